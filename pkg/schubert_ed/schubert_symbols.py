"""
Schubert symbols for the odd and even orthogonal Grassmannians.

A Schubert class of B_n(m) or D_{n+1}(m) is named three ways: by a
minimal coset representative, by a k-strict partition and by an index set
p_1 < ... < p_m in [1, N]. This module converts between them, decides
containment of Schubert varieties on index sets and evaluates the threshold
inequalities that guarantee nonvanishing products below 2n (type B) and
2n+1 (type D).

Partitions are indexed from 1; part 0 is the virtual part n+k+1.
"""

import json
import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from schubert_ed.coset import coset_context, enumerate_wp, is_minimal_rep
from schubert_ed.exception import (ContextMismatchError, InvalidIndexSetError, InvalidPartitionError,
                                   InvalidVarietyError, NotMinimalRepresentativeError)
from schubert_ed.rootsys import LieFamily, ParabolicSubset, RootSystem, build_root_system
from schubert_ed.weyl import WeylElement


@dataclass(frozen=True)
class GrassContext:
    """
    The isotropic Grassmannian B_n(m) or D_{n+1}(m).

    Attributes:
        family: LieFamily.B or LieFamily.D
        n: Half the dimension of the maximal isotropic subspaces, rounded down
        m: The excluded node, which is also the dimension of the isotropic subspaces
    """

    family: LieFamily
    n: int
    m: int

    def __post_init__(self):
        if self.family == LieFamily.B:
            if not 1 <= self.m <= self.n or self.n < 2:
                raise InvalidVarietyError(f'B{self.n}({self.m}) needs n >= 2 and 1 <= m <= n')
        elif self.family == LieFamily.D:
            if not 2 <= self.m < self.n:
                raise InvalidVarietyError(f'D{self.n + 1}({self.m}) needs 2 <= m < n')
        else:
            raise InvalidVarietyError(f'Schubert symbols exist for types B and D only, not {self.family.value}')

    @classmethod
    def for_b(cls, n: int, m: int) -> 'GrassContext':  # noqa: D102
        return cls(LieFamily.B, n, m)

    @classmethod
    def for_d(cls, n: int, m: int) -> 'GrassContext':
        """The Grassmannian D_{n+1}(m); the root system has rank n+1."""
        return cls(LieFamily.D, n, m)

    @property
    def k(self) -> int:  # noqa: D102
        return self.n - self.m if self.family == LieFamily.B else self.n + 1 - self.m

    @property
    def N(self) -> int:  # noqa: D102, N802
        return 2 * self.n + 1 if self.family == LieFamily.B else 2 * self.n + 2

    @property
    def rank(self) -> int:  # noqa: D102
        return self.n if self.family == LieFamily.B else self.n + 1

    @property
    def node(self) -> int:  # noqa: D102
        return self.m

    @property
    def small_threshold(self) -> int:
        """The constant c with (i, j) small iff lambda_i + lambda_j <= c + j - i."""
        return self.N - 2 * self.m - 1

    @property
    def dimension(self) -> int:
        """Weight of the largest partition (n+k, n+k-1, ..., n+k-m+1)."""
        top = self.n + self.k
        return sum(top - i for i in range(self.m))

    @property
    def vanishing_weight(self) -> int:
        """Total weight of the canonical vanishing pair, one more than the effective good divisibility."""
        return self.m + self.n + self.k

    def root_system(self) -> RootSystem:  # noqa: D102
        return build_root_system(self.family, self.rank)

    def parabolic(self) -> ParabolicSubset:  # noqa: D102
        return ParabolicSubset.maximal(self.rank, self.m)

    def __str__(self) -> str:
        return f'{self.family.value}{self.rank}({self.m})'


@dataclass(frozen=True)
class KStrictPartition:
    """
    A k-strict partition with at most m parts.

    Attributes:
        parts: lambda_1 >= ... >= lambda_m >= 0
        t: Type 0, 1 or 2; nonzero exactly when some part equals k (type D only)
    """

    parts: Tuple[int, ...]
    t: int = 0

    @property
    def weight(self) -> int:  # noqa: D102
        return sum(self.parts)

    def part(self, j: int, ctx: GrassContext) -> int:
        """lambda_j, with lambda_0 = n+k+1."""
        return ctx.n + ctx.k + 1 if j == 0 else self.parts[j - 1]

    def to_dict(self) -> Dict:  # noqa: D102
        data = {'parts': list(self.parts)}
        if self.t:
            data['t'] = self.t
        return data

    def __str__(self) -> str:
        text = '(' + ','.join(str(x) for x in self.parts) + ')'
        return f'{text}_t{self.t}' if self.t else text


@dataclass(frozen=True)
class IndexSet:
    """
    An index set p_1 < ... < p_m in [1, N] with p_i + p_j != N+1.

    Attributes:
        entries: The increasing entries
    """

    entries: Tuple[int, ...]

    def __iter__(self) -> Iterator[int]:
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __str__(self) -> str:
        return '{' + ','.join(str(p) for p in self.entries) + '}'


def validate_partition(lam: KStrictPartition, ctx: GrassContext) -> None:
    """
    Check that lam is a k-strict partition fitting ctx.

    Raises:
        InvalidPartitionError: If lam has the wrong number of parts, is not
            weakly decreasing, repeats a part above k, leaves the m x (n+k)
            rectangle or carries a type inconsistent with its parts.
    """
    parts = lam.parts
    if len(parts) != ctx.m:
        raise InvalidPartitionError(f'{lam} must have exactly {ctx.m} parts for {ctx}')
    if any(x < 0 for x in parts):
        raise InvalidPartitionError(f'{lam} has a negative part')
    if parts and parts[0] > ctx.n + ctx.k:
        raise InvalidPartitionError(f'{lam} has a part larger than n+k = {ctx.n + ctx.k}')
    for a, b in zip(parts, parts[1:]):
        if a < b:
            raise InvalidPartitionError(f'{lam} is not weakly decreasing')
        if a == b and a > ctx.k:
            raise InvalidPartitionError(f'{lam} repeats the part {a} > k = {ctx.k}')
    if ctx.family == LieFamily.D:
        has_k = ctx.k in parts
        if has_k and lam.t not in (1, 2):
            raise InvalidPartitionError(f'{lam} has a part equal to k = {ctx.k} and needs type 1 or 2')
        if not has_k and lam.t != 0:
            raise InvalidPartitionError(f'{lam} has no part equal to k = {ctx.k} and must have type 0')
    elif lam.t != 0:
        raise InvalidPartitionError('Partition types are only used in family D')


def validate_index_set(p: IndexSet, ctx: GrassContext) -> None:
    """
    Check that p is an index set for ctx.

    Raises:
        InvalidIndexSetError: If p has the wrong size, is not increasing, leaves [1, N],
            contains a pair summing to N+1 or, in family B, contains n+1.
    """
    entries = p.entries
    if len(entries) != ctx.m:
        raise InvalidIndexSetError(f'{p} must have exactly {ctx.m} entries for {ctx}')
    if any(a >= b for a, b in zip(entries, entries[1:])):
        raise InvalidIndexSetError(f'{p} is not strictly increasing')
    if entries[0] < 1 or entries[-1] > ctx.N:
        raise InvalidIndexSetError(f'{p} leaves [1, {ctx.N}]')
    present = set(entries)
    if any(ctx.N + 1 - x in present for x in entries if 2 * x != ctx.N + 1):
        raise InvalidIndexSetError(f'{p} contains a pair summing to N+1 = {ctx.N + 1}')
    if ctx.family == LieFamily.B and ctx.n + 1 in present:
        raise InvalidIndexSetError(f'{p} contains n+1 = {ctx.n + 1}')


def enumerate_kstrict(ctx: GrassContext) -> List[KStrictPartition]:
    """
    List every k-strict partition of ctx, ordered by weight then parts.

    In family D each partition with a part equal to k appears twice, with
    types 1 and 2.
    """
    top = ctx.n + ctx.k
    found = []

    def extend(prefix: List[int]):
        if len(prefix) == ctx.m:
            found.append(tuple(prefix))
            return
        bound = top if not prefix else prefix[-1]
        if prefix and prefix[-1] > ctx.k:
            bound = prefix[-1] - 1
        for x in range(bound, -1, -1):
            extend(prefix + [x])

    extend([])
    result = []
    for parts in sorted(found, key=lambda parts: (sum(parts), parts)):
        if ctx.family == LieFamily.D and ctx.k in parts:
            result.append(KStrictPartition(parts, 1))
            result.append(KStrictPartition(parts, 2))
        else:
            result.append(KStrictPartition(parts, 0))
    return result


def is_big_pair(lam: KStrictPartition, i: int, j: int, ctx: GrassContext) -> bool:
    """
    True iff (i, j) is a big subscript pair of lam.

    (i, j) is small when lambda_i + lambda_j <= N - 2m - 1 + j - i; the pair
    (0, j) is always big.

    Raises:
        InvalidPartitionError: If not 0 <= i < j <= m.
    """
    if not 0 <= i < j <= ctx.m:
        raise InvalidPartitionError(f'Subscript pair ({i}, {j}) is outside 0 <= i < j <= {ctx.m}')
    if i == 0:
        return True
    return lam.part(i, ctx) + lam.part(j, ctx) > ctx.small_threshold + j - i


def _small_count(lam: KStrictPartition, j: int, ctx: GrassContext) -> int:
    return sum(1 for i in range(1, j) if not is_big_pair(lam, i, j, ctx))


def f_big_count(lam: KStrictPartition, j: int, ctx: GrassContext) -> int:
    """Number of big pairs (i, j) with 1 <= i < j."""
    if not 1 <= j <= ctx.m:
        raise InvalidPartitionError(f'Index {j} is outside 1..{ctx.m}')
    return j - 1 - _small_count(lam, j, ctx)


def g_value(lam: KStrictPartition, j: int, ctx: GrassContext) -> int:
    """
    The correction term of the type D bijection.

    It is 1 when lambda_j > k, or when lambda_j = k < lambda_{j-1} and
    n+j+t is even; otherwise 2.
    """
    k = ctx.k
    current = lam.part(j, ctx)
    if current > k:
        return 1
    if current == k < lam.part(j - 1, ctx) and (ctx.n + j + lam.t) % 2 == 0:
        return 1
    return 2


def phi_index_set(lam: KStrictPartition, ctx: GrassContext) -> IndexSet:
    """
    Index set of a partition in family B.

    p_j = n+k+1 - lambda_j + #{i < j : (i, j) small} + [lambda_j <= k].

    Raises:
        ContextMismatchError: If ctx is not of family B.
        InvalidPartitionError: If lam does not fit ctx.
    """
    if ctx.family != LieFamily.B:
        raise ContextMismatchError(f'Phi is defined for family B, not {ctx}')
    validate_partition(lam, ctx)
    base = ctx.n + ctx.k + 1
    return IndexSet(tuple(
        base - lam.part(j, ctx) + _small_count(lam, j, ctx) + (1 if lam.part(j, ctx) <= ctx.k else 0)
        for j in range(1, ctx.m + 1)))


def psi_index_set(lam: KStrictPartition, ctx: GrassContext) -> IndexSet:
    """
    Index set of a typed partition in family D.

    p_j = n+k - lambda_j + #{i < j : (i, j) small} + g(lambda, t, j).

    Raises:
        ContextMismatchError: If ctx is not of family D.
        InvalidPartitionError: If lam or its type does not fit ctx.
    """
    if ctx.family != LieFamily.D:
        raise ContextMismatchError(f'Psi is defined for family D, not {ctx}')
    validate_partition(lam, ctx)
    base = ctx.n + ctx.k
    return IndexSet(tuple(
        base - lam.part(j, ctx) + _small_count(lam, j, ctx) + g_value(lam, j, ctx)
        for j in range(1, ctx.m + 1)))


def index_set_of(lam: KStrictPartition, ctx: GrassContext) -> IndexSet:
    """Phi or Psi, according to the family of ctx."""
    if ctx.family == LieFamily.B:
        return phi_index_set(lam, ctx)
    return psi_index_set(lam, ctx)


def dual_index_set(p: IndexSet, ctx: GrassContext) -> IndexSet:
    """
    Index set of the Poincare dual Schubert variety.

    Family B reflects every entry, p -> 2n+2 - p. Family D reflects p -> 2n+3 - p,
    except that for even n the entries n+1 and n+2 are kept.
    """
    validate_index_set(p, ctx)
    n = ctx.n
    if ctx.family == LieFamily.B:
        return IndexSet(tuple(sorted(2 * n + 2 - x for x in p)))

    def reflect(x: int) -> int:
        if n % 2 == 0 and x in (n + 1, n + 2):
            return x
        return 2 * n + 3 - x

    return IndexSet(tuple(sorted(reflect(x) for x in p)))


def symbol_leq(p: IndexSet, q: IndexSet, ctx: GrassContext) -> bool:
    """
    True iff the Schubert variety of p is contained in that of q.

    This is componentwise p_i <= q_i; family D also forbids p_i = n+1 where
    q_i = n+2.
    """
    if len(p) != len(q):
        raise ContextMismatchError(f'Index sets {p} and {q} have different sizes')
    if any(a > b for a, b in zip(p, q)):
        return False
    if ctx.family == LieFamily.D:
        return not any(b == ctx.n + 2 and a == ctx.n + 1 for a, b in zip(p, q))
    return True


def threshold_inequality_B(lam: KStrictPartition, mu: KStrictPartition, ctx: GrassContext) -> bool:  # noqa: N802
    """
    True iff f(lam, m+1-j) + f(mu, j) <= n+k - lam_{m+1-j} - mu_j for every j.

    Raises:
        ContextMismatchError: If ctx is not of family B.
    """
    if ctx.family != LieFamily.B:
        raise ContextMismatchError(f'The type B inequality does not apply to {ctx}')
    return _f_inequality(lam, mu, ctx)


def threshold_inequality_D(lam: KStrictPartition, mu: KStrictPartition, ctx: GrassContext) -> bool:  # noqa: N802
    """
    True iff for every j both g(lam, m+1-j) + g(mu, j) >= 3 and the f inequality hold.

    The types t1 and t2 are carried by the partitions.

    Raises:
        ContextMismatchError: If ctx is not of family D.
    """
    if ctx.family != LieFamily.D:
        raise ContextMismatchError(f'The type D inequality does not apply to {ctx}')
    m = ctx.m
    if any(g_value(lam, m + 1 - j, ctx) + g_value(mu, j, ctx) < 3 for j in range(1, m + 1)):
        return False
    return _f_inequality(lam, mu, ctx)


def _f_inequality(lam: KStrictPartition, mu: KStrictPartition, ctx: GrassContext) -> bool:
    m = ctx.m
    top = ctx.n + ctx.k
    return all(
        f_big_count(lam, m + 1 - j, ctx) + f_big_count(mu, j, ctx) <= top - lam.part(m + 1 - j, ctx) - mu.part(j, ctx)
        for j in range(1, m + 1))


def threshold_inequality(lam: KStrictPartition, mu: KStrictPartition, ctx: GrassContext) -> bool:  # noqa: D103
    if ctx.family == LieFamily.B:
        return threshold_inequality_B(lam, mu, ctx)
    return threshold_inequality_D(lam, mu, ctx)


def witness_partitions(ctx: GrassContext) -> Tuple[KStrictPartition, KStrictPartition]:
    """
    The pair (1^m), (n+k) whose Schubert classes multiply to zero.

    Raises:
        InvalidVarietyError: If k = 0, where (1^m) is not k-strict.
    """
    if ctx.k == 0:
        raise InvalidVarietyError(f'{ctx} has k = 0; (1^m) is not a k-strict partition there')
    ones = KStrictPartition(tuple([1] * ctx.m), _type_for((1,) * ctx.m, ctx))
    row = (ctx.n + ctx.k,) + (0,) * (ctx.m - 1)
    return ones, KStrictPartition(row, _type_for(row, ctx))


def _type_for(parts: Tuple[int, ...], ctx: GrassContext) -> int:
    return 1 if ctx.family == LieFamily.D and ctx.k in parts else 0


@lru_cache(maxsize=32)
def _partition_lookup(ctx: GrassContext) -> Dict[IndexSet, KStrictPartition]:
    lookup = {}
    for lam in enumerate_kstrict(ctx):
        p = index_set_of(lam, ctx)
        if p in lookup:
            raise InvalidPartitionError(f'{lam} and {lookup[p]} share the index set {p}')
        lookup[p] = lam
    return lookup


def partition_of(p: IndexSet, ctx: GrassContext) -> KStrictPartition:
    """
    Inverse of Phi or Psi.

    Raises:
        InvalidIndexSetError: If p is not an index set of ctx.
    """
    validate_index_set(p, ctx)
    lam = _partition_lookup(ctx).get(p)
    if lam is None:
        raise InvalidIndexSetError(f'{p} is not the index set of a partition for {ctx}')
    return lam


def _epsilon_bases(rs: RootSystem) -> Tuple[np.ndarray, np.ndarray]:
    """
    Change of basis between simple roots and the orthonormal epsilon basis.

    Returns the matrix whose columns are the alpha_i in epsilon coordinates
    and the integer matrix of 2 epsilon_a in simple-root coordinates.
    """
    r = rs.rank
    alpha = np.zeros((r, r), dtype=np.int64)
    for i in range(r - 1):
        alpha[i, i] = 1
        alpha[i + 1, i] = -1
    if rs.family == LieFamily.B:
        alpha[r - 1, r - 1] = 1
    elif rs.family == LieFamily.D:
        alpha[r - 2, r - 1] = 1
        alpha[r - 1, r - 1] = 1
    else:
        raise ContextMismatchError(f'No signed permutation model for {rs.name}')
    twice_epsilon = np.rint(2 * np.linalg.inv(alpha.astype(np.float64))).astype(np.int64)
    return alpha, twice_epsilon


def signed_permutation(u: WeylElement) -> Tuple[int, ...]:
    """
    Read an element of W(B_n) or W(D_n) as a signed permutation.

    Entry a is +b when u(epsilon_a) = epsilon_b and -b when u(epsilon_a) = -epsilon_b.

    Raises:
        ContextMismatchError: If u is not in a Weyl group of type B or D.
    """
    alpha, twice_epsilon = _epsilon_bases(u.rs)
    images = (alpha @ u.matrix.astype(np.int64) @ twice_epsilon) // 2
    result = []
    for a in range(u.rs.rank):
        column = images[:, a]
        b = int(np.flatnonzero(column)[0])
        result.append((b + 1) * int(column[b]))
    return tuple(result)


def _position(signed: int, ctx: GrassContext) -> int:
    return signed if signed > 0 else ctx.N + 1 + signed


def _check_context(u: WeylElement, ctx: GrassContext) -> None:
    rs = u.rs
    if rs.family != ctx.family or rs.rank != ctx.rank:
        raise ContextMismatchError(f'{u!r} does not belong to {ctx}')
    if not is_minimal_rep(u, ctx.parabolic()):
        raise NotMinimalRepresentativeError(f'{u!r} is not a minimal representative for {ctx}')


def symbol_of_weyl(u: WeylElement, ctx: GrassContext) -> IndexSet:
    """
    Index set of the Schubert variety of codimension l(u) indexed by u.

    The entries are the positions of (w0 u)(epsilon_a) for a = 1..m, where
    +epsilon_b sits at b and -epsilon_b at N+1-b.

    Raises:
        ContextMismatchError: If u is not in the Weyl group of ctx.
        NotMinimalRepresentativeError: If u is not in W^{P_m}.
    """
    _check_context(u, ctx)
    w0 = coset_context(u.rs, ctx.parabolic()).w0
    signed = signed_permutation(w0 * u)
    return IndexSet(tuple(sorted(_position(signed[a], ctx) for a in range(ctx.m))))


@lru_cache(maxsize=32)
def _weyl_lookup(ctx: GrassContext) -> Dict[IndexSet, WeylElement]:
    enum = enumerate_wp(ctx.root_system(), ctx.parabolic())
    lookup = {symbol_of_weyl(u, ctx): u for u in enum.elements()}
    logging.debug(f'Built the symbol dictionary of {ctx} with {len(lookup)} entries')
    return lookup


def weyl_of_symbol(p: IndexSet, ctx: GrassContext) -> WeylElement:
    """
    Minimal coset representative of the Schubert variety with index set p.

    Raises:
        InvalidIndexSetError: If p is not an index set of ctx.
    """
    validate_index_set(p, ctx)
    u = _weyl_lookup(ctx).get(p)
    if u is None:
        raise InvalidIndexSetError(f'{p} does not index a Schubert variety of {ctx}')
    return u


def parse_partition(text: str, ctx: GrassContext, t: Optional[int] = None) -> KStrictPartition:
    """
    Parse a partition given as a JSON array, '3,1' or '(3,1)', padding with zeros to m parts.

    A JSON object {"parts": [...], "t": 1} is accepted too; an explicit t argument wins.

    Raises:
        InvalidPartitionError: If the text is malformed or the partition does not fit ctx.
    """
    text = text.strip()
    data_t = 0
    try:
        if text.startswith('{'):
            data = json.loads(text)
            parts = data['parts']
            data_t = data.get('t', 0)
        elif text.startswith('['):
            parts = json.loads(text)
        else:
            body = text.strip('()')
            parts = [int(x) for x in body.split(',')] if body else []
    except (ValueError, KeyError, TypeError) as e:
        raise InvalidPartitionError(f'Malformed partition {text!r}: {e}')
    if not isinstance(parts, list) or not all(isinstance(x, int) for x in parts):
        raise InvalidPartitionError(f'Partition {text!r} must be a list of integers')
    if len(parts) > ctx.m:
        raise InvalidPartitionError(f'{text!r} has more than m = {ctx.m} parts')
    parts = tuple(parts) + (0,) * (ctx.m - len(parts))
    lam = KStrictPartition(parts, data_t if t is None else t)
    validate_partition(lam, ctx)
    return lam


def parse_index_set(text: str, ctx: GrassContext) -> IndexSet:
    """
    Parse an index set given as a JSON array, '2,5' or '{2,5}'.

    Raises:
        InvalidIndexSetError: If the text is malformed or the set does not fit ctx.
    """
    text = text.strip()
    try:
        if text.startswith('['):
            entries = json.loads(text)
        else:
            body = text.strip('{}')
            entries = [int(x) for x in body.split(',')] if body else []
    except ValueError as e:
        raise InvalidIndexSetError(f'Malformed index set {text!r}: {e}')
    if not isinstance(entries, list) or not all(isinstance(x, int) for x in entries):
        raise InvalidIndexSetError(f'Index set {text!r} must be a list of integers')
    p = IndexSet(tuple(entries))
    validate_index_set(p, ctx)
    return p


def threshold_pairs(ctx: GrassContext, below: int) -> Iterator[Tuple[KStrictPartition, KStrictPartition]]:
    """Every ordered pair of partitions of ctx with total weight below the given bound."""
    partitions = enumerate_kstrict(ctx)
    for lam, mu in product(partitions, repeat=2):
        if lam.weight + mu.weight < below:
            yield lam, mu
