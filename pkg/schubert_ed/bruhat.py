"""
Bruhat order on W and on W^P.

BruhatOracle answers single queries with the lifting recursion and a
bounded memo. BruhatPoset materialises the order on a complete W^P as
down-set bitsets, which is what threshold scans use for posets of moderate
size.
"""

import logging
from typing import Dict, Iterator, List, Optional, Protocol, Tuple

import numpy as np

from schubert_ed.coset import WpEnumeration, deadline_passed, is_minimal_rep, project_to_wp
from schubert_ed.exception import (ContextMismatchError, NotMinimalRepresentativeError, SchubertEdError,
                                   TimeBudgetExceededError)
from schubert_ed.rootsys import ParabolicSubset
from schubert_ed.weyl import WeylElement

DEFAULT_MEMO_SIZE = 1_000_000


class BruhatOrder(Protocol):
    """Anything that can decide u <= w."""

    def leq(self, u: WeylElement, w: WeylElement) -> bool:  # noqa: D102
        ...


class BruhatCache:
    """
    Bounded memo of Bruhat comparisons.

    Entries are evicted oldest first once the table is full; an evicted
    entry is simply recomputed on the next query.

    Attributes:
        maxsize: Largest number of stored pairs
        hits: Number of successful lookups
        misses: Number of failed lookups
    """

    def __init__(self, maxsize: int = DEFAULT_MEMO_SIZE):
        self.maxsize = maxsize
        self.hits = 0
        self.misses = 0
        self._table: Dict[Tuple[bytes, bytes], bool] = {}

    def get(self, key: Tuple[bytes, bytes]) -> Optional[bool]:  # noqa: D102
        value = self._table.get(key)
        if value is None:
            self.misses += 1
        else:
            self.hits += 1
        return value

    def put(self, key: Tuple[bytes, bytes], value: bool) -> None:  # noqa: D102
        if key not in self._table and len(self._table) >= self.maxsize:
            del self._table[next(iter(self._table))]
        self._table[key] = value

    def __len__(self):
        return len(self._table)

    def __contains__(self, key):
        return key in self._table

    def stats(self) -> Dict[str, int]:  # noqa: D102
        return {'entries': len(self._table), 'hits': self.hits, 'misses': self.misses}


class BruhatOracle:
    """
    Decides u <= w with the lifting property.

    With s the smallest left descent of w: if s is also a left descent of u
    then u <= w iff su <= sw, otherwise u <= w iff u <= sw. Length, identity
    and support tests settle most queries before any recursion.
    """

    def __init__(self, cache: Optional[BruhatCache] = None):
        self.cache = cache if cache is not None else BruhatCache()

    def leq(self, u: WeylElement, w: WeylElement) -> bool:
        """
        Return True iff u <= w in Bruhat order.

        Raises:
            ContextMismatchError: If u and w belong to different root systems.
        """
        if u.rs is not w.rs:
            raise ContextMismatchError(f'Cannot compare elements of {u.rs.name} and {w.rs.name}')
        path = []
        while True:
            if u.length > w.length:
                result = False
                break
            if u.length == 0:
                result = True
                break
            if u.length == w.length:
                result = u == w
                break
            key = (u.key, w.key)
            cached = self.cache.get(key)
            if cached is not None:
                result = cached
                break
            path.append(key)
            if not u.support <= w.support:
                result = False
                break
            node = w.first_left_descent()
            if u.has_left_descent(node):
                u = u.left_multiply_simple(node)
            w = w.left_multiply_simple(node)
        for key in path:
            self.cache.put(key, result)
        return result


_default_oracle = BruhatOracle()


def leq(u: WeylElement, w: WeylElement) -> bool:
    """Bruhat comparison through a module level oracle."""
    return _default_oracle.leq(u, w)


def projection_leq(u: WeylElement, w: WeylElement, p: ParabolicSubset,
                   order: Optional[BruhatOrder] = None) -> bool:
    """
    Compare u and w in W^P through their projections to maximal quotients.

    For each excluded node j both elements are projected to W^{P_j} and
    compared there; u <= w iff every projection pair is comparable.

    Raises:
        NotMinimalRepresentativeError: If u or w is not in W^P.
    """
    for x in (u, w):
        if not is_minimal_rep(x, p):
            raise NotMinimalRepresentativeError(f'{x!r} is not a minimal representative for P{p}')
    order = order or _default_oracle
    for node in sorted(p.excluded):
        maximal = ParabolicSubset.maximal(p.rank, node)
        if not order.leq(project_to_wp(u, maximal)[0], project_to_wp(w, maximal)[0]):
            return False
    return True


class BruhatPoset:
    """
    The Bruhat order on a complete W^P as down-set bitsets.

    Elements are numbered stratum by stratum in the enumeration order. The
    down-set of w is w itself together with the down-sets of its lower
    covers, which are the elements t w of length l(w) - 1 in W^P for t a
    reflection.

    Attributes:
        enum: The enumeration the poset is built on
        down: Bitset of the down-set of each element, by global index

    Raises:
        TimeBudgetExceededError: If the deadline passes while the bitsets are built.
    """

    def __init__(self, enum: WpEnumeration, deadline: Optional[float] = None):
        if not enum.is_complete:
            raise SchubertEdError(f'Cannot build a poset on an incomplete enumeration of {enum.rs.name}')
        self.enum = enum
        self.offsets: Dict[int, int] = {}
        self.index: Dict[bytes, int] = {}
        self.down: List[int] = []
        offset = 0
        for length in range(enum.dimension + 1):
            self.offsets[length] = offset
            for u in enum.stratum(length):
                self.index[u.key] = offset
                offset += 1
        self._build(deadline)
        logging.info(f'Built Bruhat poset on {offset} elements of {enum.rs.name} P{enum.parabolic}')

    def _build(self, deadline: Optional[float]):
        rs = self.enum.rs
        roots = rs.positive_roots.T.astype(np.int64)
        for length in range(self.enum.dimension + 1):
            if deadline_passed(deadline):
                raise TimeBudgetExceededError(f'Bruhat poset of {rs.name} not built by the deadline, '
                                              f'stopped at length {length}')
            for u in self.enum.stratum(length):
                bits = 1 << self.index[u.key]
                if length:
                    sent_negative = (u.inverse_matrix.astype(np.int64) @ roots).sum(axis=0) < 0
                    candidates = rs.root_reflections[sent_negative] @ u.matrix
                    for candidate in candidates:
                        cover = self.index.get(candidate.tobytes())
                        if cover is not None and cover >= self.offsets[length - 1]:
                            bits |= self.down[cover]
                self.down.append(bits)

    def offset(self, length: int) -> int:  # noqa: D102
        return self.offsets[length]

    def stratum_mask(self, length: int) -> int:
        """Bitset of all elements of the given length."""
        return ((1 << len(self.enum.stratum(length))) - 1) << self.offsets[length]

    def leq(self, u: WeylElement, w: WeylElement) -> bool:  # noqa: D102
        return bool((self.down[self.index[w.key]] >> self.index[u.key]) & 1)

    def lower_covers(self, w: WeylElement) -> List[WeylElement]:
        """Elements of W^P covered by w."""
        length = w.length
        if length == 0:
            return []
        below = self.down[self.index[w.key]]
        start = self.offsets[length - 1]
        return [u for i, u in enumerate(self.enum.stratum(length - 1)) if (below >> (start + i)) & 1]


class IncomparablePairStream:
    """
    Iterator over the pairs (u, w) with l(u) = i, l(w) = j and u not <= w.

    Pairs come in u-major order following the sorted strata. When a
    pair-test budget is given and runs out, iteration stops and truncated
    is set.

    Attributes:
        tested: Number of comparisons made so far
        truncated: True if the budget ran out before the scan finished
    """

    def __init__(self, enum: WpEnumeration, i: int, j: int, budget: Optional[int] = None,
                 order: Optional[BruhatOrder] = None):
        if not 0 <= i <= enum.dimension or not 0 <= j <= enum.dimension:
            raise SchubertEdError(f'Lengths ({i}, {j}) exceed dim = {enum.dimension}')
        self.enum = enum
        self.i = i
        self.j = j
        self.budget = budget
        self.order = order or _default_oracle
        self.tested = 0
        self.truncated = False

    def __iter__(self) -> Iterator[Tuple[WeylElement, WeylElement]]:
        if self.i == 0:
            return
        for u in self.enum.stratum(self.i):
            for w in self.enum.stratum(self.j):
                if self.budget and self.tested >= self.budget:
                    self.truncated = True
                    return
                self.tested += 1
                if not self.order.leq(u, w):
                    yield u, w


def incomparable_pairs_at(enum: WpEnumeration, i: int, j: int, budget: Optional[int] = None,
                          order: Optional[BruhatOrder] = None) -> IncomparablePairStream:
    """
    Stream the incomparable pairs at bidegree (i, j).

    Args:
        enum: A W^P enumeration containing both strata
        i: Length of u
        j: Length of w
        budget: Largest number of comparisons, or None for no limit
        order: Comparison to use; the module oracle by default

    Returns:
        IncomparablePairStream: Iterable of (u, w); check truncated after iterating
    """
    return IncomparablePairStream(enum, i, j, budget, order)
