"""
This file defines error classes specific to schubert-ed.

Library code raises these exceptions; only the command-line front end turns
them into exit codes and messages.
"""


class SchubertEdError(Exception):
    """Base class for every error raised by schubert-ed."""

    pass


class InvalidRootSystemError(SchubertEdError):
    """
    Exception raised when a Lie family and rank do not describe a simple root system.

    Examples are rank 3 for type D or rank 5 for type E.
    """

    pass


class InvalidWordError(SchubertEdError):
    """
    Exception raised for malformed words in the simple reflections.

    This covers unparsable digit strings as well as node indices outside
    the rank of the root system.
    """

    pass


class ContextMismatchError(SchubertEdError):
    """Exception raised when elements of two different Weyl groups are combined."""

    pass


class NotMinimalRepresentativeError(SchubertEdError):
    """
    Exception raised when an element is required to lie in W^P but does not.

    The duality map and the projection criterion are only defined on minimal
    length coset representatives.
    """

    pass


class InvalidPartitionError(SchubertEdError):
    """Exception raised for a partition that is not k-strict for its Grassmannian context."""

    pass


class InvalidIndexSetError(SchubertEdError):
    """Exception raised for an index set violating the pairing constraint of its context."""

    pass


class InvalidVarietyError(SchubertEdError):
    """
    Exception raised for an ill-formed homogeneous variety specification.

    Typical causes are an empty or out-of-range set of excluded nodes, or an
    operation that needs a Grassmannian being handed a flag variety.
    """

    pass


class StrataCacheError(SchubertEdError):
    """
    Exception raised for errors related to the coset strata cache.

    This exception is used when a cache file is corrupted, has the wrong
    magic or a newer format version, fails its integrity check, or is locked
    by another process.
    """

    pass


class TimeBudgetExceededError(SchubertEdError):
    """
    Exception raised when a computation runs past its wall-clock deadline.

    Brute-force scans catch it and report a truncated result.
    """

    pass
