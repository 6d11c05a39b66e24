try:
    from ._version import version
except ImportError:
    # Source checkout without setuptools_scm metadata.
    version = '0.0.0'

__all__ = ['version']
