"""
Root system data for the simple Lie types.

Nodes are numbered 1..rank as in Humphreys' tables: the short simple root of
B_n is alpha_n, the fork of D_n is made of nodes n-1 and n, and the branch
node of E_r is node 4 with node 2 attached to it. Roots are integer vectors in
the basis of simple roots, and the Cartan entry A[i][j] is <alpha_i, alpha_j^vee>.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import factorial, lcm
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

import numpy as np

from schubert_ed.exception import InvalidRootSystemError, InvalidVarietyError


class LieFamily(Enum):
    """The families of simple Lie algebras."""

    A = 'A'
    B = 'B'
    C = 'C'
    D = 'D'
    E = 'E'
    F = 'F'
    G = 'G'

    @property
    def is_classical(self) -> bool:  # noqa: D102
        return self in (LieFamily.A, LieFamily.B, LieFamily.C, LieFamily.D)


# Families whose rank is implied by the name, e.g. 'F4'.
FIXED_RANKS = {
    LieFamily.E: (6, 7, 8),
    LieFamily.F: (4,),
    LieFamily.G: (2,),
}

MIN_RANKS = {
    LieFamily.A: 1,
    LieFamily.B: 2,
    LieFamily.C: 2,
    LieFamily.D: 4,
}

EXCEPTIONAL_ORDERS = {
    (LieFamily.E, 6): 51840,
    (LieFamily.E, 7): 2903040,
    (LieFamily.E, 8): 696729600,
    (LieFamily.F, 4): 1152,
    (LieFamily.G, 2): 12,
}

E_EDGES = ((1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4))


def parse_family(text: str, rank: Optional[int] = None) -> Tuple[LieFamily, int]:
    """
    Parse a family name such as 'B', 'E7' or 'f4' together with an optional rank.

    Args:
        text: Family letter, optionally followed by the rank
        rank: Rank given separately; must agree with a rank embedded in text

    Returns:
        tuple: The family and the rank

    Raises:
        InvalidRootSystemError: If the name is unknown or the rank is missing or inconsistent.
    """
    text = text.strip().upper()
    try:
        family = LieFamily(text[:1])
    except ValueError:
        raise InvalidRootSystemError(f'Unknown Lie family: {text!r}')

    embedded = None
    if len(text) > 1:
        if not text[1:].isdigit():
            raise InvalidRootSystemError(f'Unknown Lie family: {text!r}')
        embedded = int(text[1:])
    if embedded is not None and rank is not None and embedded != rank:
        raise InvalidRootSystemError(f'Rank {rank} contradicts family name {text}')
    rank = rank if rank is not None else embedded
    if rank is None and family in (LieFamily.F, LieFamily.G):
        rank = FIXED_RANKS[family][0]
    if rank is None:
        raise InvalidRootSystemError(f'Family {text} needs a rank')
    validate_rank(family, rank)
    return family, rank


def validate_rank(family: LieFamily, rank: int) -> None:
    """
    Check the rank constraints of a family.

    Raises:
        InvalidRootSystemError: If the rank is not valid for the family.
    """
    if family in FIXED_RANKS:
        if rank not in FIXED_RANKS[family]:
            allowed = ', '.join(str(r) for r in FIXED_RANKS[family])
            raise InvalidRootSystemError(f'Type {family.value} requires rank in {{{allowed}}}, got {rank}')
    elif rank < MIN_RANKS[family]:
        raise InvalidRootSystemError(
            f'Type {family.value} requires rank >= {MIN_RANKS[family]}, got {rank}')


def cartan_matrix(family: LieFamily, rank: int) -> np.ndarray:
    """Return the Cartan matrix of the given type in Humphreys' numbering."""
    validate_rank(family, rank)
    if family == LieFamily.E:
        a = 2 * np.eye(rank, dtype=np.int64)
        for i, j in E_EDGES:
            if i <= rank and j <= rank:
                a[i - 1, j - 1] = a[j - 1, i - 1] = -1
        return a
    if family == LieFamily.F:
        return np.array([[2, -1, 0, 0], [-1, 2, -2, 0], [0, -1, 2, -1], [0, 0, -1, 2]], dtype=np.int64)
    if family == LieFamily.G:
        return np.array([[2, -1], [-3, 2]], dtype=np.int64)

    a = 2 * np.eye(rank, dtype=np.int64)
    for i in range(rank - 1):
        a[i, i + 1] = a[i + 1, i] = -1
    if family == LieFamily.B:
        a[rank - 2, rank - 1] = -2
    elif family == LieFamily.C:
        a[rank - 1, rank - 2] = -2
    elif family == LieFamily.D:
        a[rank - 2, rank - 1] = a[rank - 1, rank - 2] = 0
        a[rank - 3, rank - 1] = a[rank - 1, rank - 3] = -1
    return a


def root_lengths(cartan: np.ndarray) -> np.ndarray:
    """
    Squared lengths of the simple roots, scaled to even integers.

    The lengths satisfy A[i][j] * |alpha_j|^2 = A[j][i] * |alpha_i|^2 along
    every edge of the Dynkin diagram.
    """
    rank = cartan.shape[0]
    lengths: List[Optional[Fraction]] = [None] * rank
    for start in range(rank):
        if lengths[start] is not None:
            continue
        lengths[start] = Fraction(1)
        frontier = [start]
        while frontier:
            x = frontier.pop()
            for y in range(rank):
                if y != x and cartan[x, y] != 0 and lengths[y] is None:
                    lengths[y] = lengths[x] * Fraction(int(cartan[y, x]), int(cartan[x, y]))
                    frontier.append(y)
    scale = lcm(*(length.denominator for length in lengths)) * 2
    return np.array([int(length * scale) for length in lengths], dtype=np.int64)


@dataclass(frozen=True, eq=False)
class RootSystem:
    """
    Immutable root system data of a simple Lie type.

    Instances are shared through build_root_system, so identity comparison
    is enough to tell whether two elements live in the same Weyl group.

    Attributes:
        family: The Lie family
        rank: Number of simple roots
        cartan: Cartan matrix, cartan[i][j] = <alpha_i, alpha_j^vee>
        gram: Symmetric matrix of the invariant form on simple roots
        positive_roots: One positive root per row, in simple-root coordinates
        simple_reflection_actions: Matrix of s_i on the simple-root basis, columns are images
        root_reflections: Matrix of the reflection in each positive root, same order as positive_roots
    """

    family: LieFamily
    rank: int
    cartan: np.ndarray
    gram: np.ndarray
    positive_roots: np.ndarray
    simple_reflection_actions: Tuple[np.ndarray, ...]
    root_reflections: np.ndarray

    @property
    def name(self) -> str:  # noqa: D102
        return f'{self.family.value}{self.rank}'

    @property
    def nodes(self) -> Tuple[int, ...]:  # noqa: D102
        return tuple(range(1, self.rank + 1))

    def simple_reflection(self, node: int) -> np.ndarray:
        """Return the action matrix of s_node (1-based)."""
        return self.simple_reflection_actions[node - 1]

    def __reduce__(self):
        # Worker processes rebuild from their own cache so identity checks keep working.
        return build_root_system, (self.family, self.rank)

    def __repr__(self) -> str:
        return f'RootSystem({self.name})'


def _freeze(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


def _reflection_in(root: np.ndarray, gram: np.ndarray) -> np.ndarray:
    g_root = gram @ root
    coroot = (2 * g_root) // int(root @ g_root)
    return np.eye(len(root), dtype=np.int16) - np.outer(root, coroot).astype(np.int16)


@lru_cache(maxsize=None)
def build_root_system(family: LieFamily, rank: int) -> RootSystem:
    """
    Construct the root system of the given type.

    Positive roots are generated by closing the simple roots under the
    simple reflections and keeping the nonnegative vectors.

    Args:
        family: The Lie family
        rank: The rank of the root system

    Returns:
        RootSystem: Shared immutable root system data

    Raises:
        InvalidRootSystemError: If the rank is not valid for the family.
    """
    cartan = cartan_matrix(family, rank)
    gram = cartan * root_lengths(cartan)[np.newaxis, :] // 2

    reflections = []
    for i in range(rank):
        s = np.eye(rank, dtype=np.int16)
        s[i, :] -= cartan[:, i].astype(np.int16)
        reflections.append(_freeze(s))

    seen = {}
    frontier = [np.eye(rank, dtype=np.int64)[i] for i in range(rank)]
    for root in frontier:
        seen[root.tobytes()] = root
    while frontier:
        next_frontier = []
        for root in frontier:
            for s in reflections:
                image = s.astype(np.int64) @ root
                if image.min() >= 0 and image.tobytes() not in seen:
                    seen[image.tobytes()] = image
                    next_frontier.append(image)
        frontier = next_frontier
    roots = sorted(seen.values(), key=lambda r: (int(r.sum()), tuple(int(x) for x in r)))
    positive_roots = _freeze(np.array(roots, dtype=np.int16))
    root_reflections = _freeze(np.array([_reflection_in(r.astype(np.int64), gram) for r in roots], dtype=np.int16))

    logging.debug(f'Built root system {family.value}{rank} with {len(roots)} positive roots')
    return RootSystem(family=family, rank=rank, cartan=_freeze(cartan), gram=_freeze(gram),
                      positive_roots=positive_roots, simple_reflection_actions=tuple(reflections),
                      root_reflections=root_reflections)


def coxeter_number(rs: RootSystem) -> int:
    """Return the Coxeter number h, using h * rank = 2 |R+|."""
    return 2 * len(rs.positive_roots) // rs.rank


def weyl_group_order(family: LieFamily, rank: int) -> int:
    """Return |W| for the given type."""
    validate_rank(family, rank)
    if family == LieFamily.A:
        return factorial(rank + 1)
    if family in (LieFamily.B, LieFamily.C):
        return 2 ** rank * factorial(rank)
    if family == LieFamily.D:
        return 2 ** (rank - 1) * factorial(rank)
    return EXCEPTIONAL_ORDERS[(family, rank)]


@dataclass(frozen=True)
class ParabolicSubset:
    """
    A standard parabolic subgroup, recorded by the nodes outside Delta_P.

    Attributes:
        rank: Rank of the ambient root system
        excluded: The nodes of Delta not in Delta_P
    """

    rank: int
    excluded: FrozenSet[int]

    def __post_init__(self):
        object.__setattr__(self, 'excluded', frozenset(self.excluded))
        if not self.excluded:
            raise InvalidVarietyError('A proper parabolic subgroup needs at least one excluded node')
        bad = sorted(node for node in self.excluded if not 1 <= node <= self.rank)
        if bad:
            raise InvalidVarietyError(f'Excluded nodes {bad} are outside 1..{self.rank}')

    @classmethod
    def maximal(cls, rank: int, node: int) -> 'ParabolicSubset':
        """The maximal parabolic P_node, whose quotient is a Grassmannian."""
        return cls(rank, frozenset([node]))

    @classmethod
    def borel(cls, rank: int) -> 'ParabolicSubset':
        """The Borel subgroup; W^B is the whole Weyl group."""
        return cls(rank, frozenset(range(1, rank + 1)))

    @property
    def retained(self) -> Tuple[int, ...]:
        """The nodes of Delta_P in increasing order."""
        return tuple(node for node in range(1, self.rank + 1) if node not in self.excluded)

    @property
    def is_maximal(self) -> bool:  # noqa: D102
        return len(self.excluded) == 1

    def __str__(self) -> str:
        return '{' + ','.join(str(node) for node in sorted(self.excluded)) + '}'


@dataclass(frozen=True)
class DynkinComponent:
    """
    A connected piece of a Dynkin diagram.

    Attributes:
        family: Type of the component (B is used for the rank 2 double bond)
        rank: Number of nodes
        numbering: Global node to the node number inside the component's own diagram
    """

    family: LieFamily
    rank: int
    numbering: Dict[int, int]

    @property
    def nodes(self) -> Tuple[int, ...]:  # noqa: D102
        return tuple(sorted(self.numbering))

    @property
    def name(self) -> str:  # noqa: D102
        return f'{self.family.value}{self.rank}'

    def __hash__(self):
        return hash((self.family, self.rank, tuple(sorted(self.numbering.items()))))


def _neighbours(cartan: np.ndarray, nodes: Iterable[int]) -> Dict[int, List[int]]:
    nodes = set(nodes)
    return {x: sorted(y for y in nodes if y != x and cartan[x - 1, y - 1] != 0) for x in nodes}


def _walk(start: int, graph: Dict[int, List[int]], blocked: Iterable[int] = ()) -> List[int]:
    path = [start]
    visited = set(blocked) | {start}
    while True:
        nxt = [y for y in graph[path[-1]] if y not in visited]
        if not nxt:
            return path
        path.append(nxt[0])
        visited.add(nxt[0])


def dynkin_components(rs: RootSystem, nodes: Iterable[int]) -> List[DynkinComponent]:
    """
    Split a set of nodes into connected components and classify each one.

    Components come back ordered by their smallest node. Each component
    carries the numbering of its own standard diagram so that closed forms
    keyed by node number can be applied to it.

    Args:
        rs: The ambient root system
        nodes: A subset of 1..rank

    Returns:
        list: The classified components
    """
    graph = _neighbours(rs.cartan, nodes)
    lengths = root_lengths(rs.cartan)
    components = []
    remaining = set(graph)
    while remaining:
        seed = min(remaining)
        members = {seed}
        frontier = [seed]
        while frontier:
            x = frontier.pop()
            for y in graph[x]:
                if y not in members:
                    members.add(y)
                    frontier.append(y)
        remaining -= members
        sub = {x: graph[x] for x in members}
        components.append(_classify(rs, sub, lengths))
    return components


def _classify(rs: RootSystem, graph: Dict[int, List[int]], lengths: np.ndarray) -> DynkinComponent:
    nodes = sorted(graph)
    rank = len(nodes)
    if rank == 1:
        return DynkinComponent(LieFamily.A, 1, {nodes[0]: 1})

    bonds = {(x, y): int(rs.cartan[x - 1, y - 1] * rs.cartan[y - 1, x - 1]) for x in nodes for y in graph[x]}
    multiple = [(x, y) for (x, y), value in bonds.items() if value > 1 and x < y]
    leaves = [x for x in nodes if len(graph[x]) == 1]
    branch = [x for x in nodes if len(graph[x]) == 3]

    def short(x: int) -> bool:
        return lengths[x - 1] < lengths.max()

    if multiple:
        x, y = multiple[0]
        if bonds[(x, y)] == 3:
            first = x if short(x) else y
            return DynkinComponent(LieFamily.G, 2, {first: 1, (y if first == x else x): 2})
        if rank == 2:
            first = x if not short(x) else y
            return DynkinComponent(LieFamily.B, 2, {first: 1, (y if first == x else x): 2})
        if x in leaves or y in leaves:
            end = x if x in leaves else y
            start = [leaf for leaf in leaves if leaf != end][0]
            path = _walk(start, graph)
            family = LieFamily.B if short(end) else LieFamily.C
            return DynkinComponent(family, rank, {node: i + 1 for i, node in enumerate(path)})
        start = [leaf for leaf in leaves if not short(leaf)][0]
        path = _walk(start, graph)
        return DynkinComponent(LieFamily.F, 4, {node: i + 1 for i, node in enumerate(path)})

    if not branch:
        path = _walk(min(leaves), graph)
        return DynkinComponent(LieFamily.A, rank, {node: i + 1 for i, node in enumerate(path)})

    hub = branch[0]
    arms = sorted((_walk(y, graph, blocked=[hub]) for y in graph[hub]), key=lambda arm: (len(arm), arm[-1]))
    if len(arms[0]) == 1 and len(arms[1]) == 1:
        # D_rank: long arm first, hub, then the two fork leaves.
        long_arm = list(reversed(arms[2]))
        order = long_arm + [hub, arms[0][0], arms[1][0]]
        return DynkinComponent(LieFamily.D, rank, {node: i + 1 for i, node in enumerate(order)})

    # E_rank: arms of length 1, 2 and rank - 4.
    numbering = {hub: 4, arms[0][0]: 2}
    two_arm, long_arm = arms[1], arms[2]
    numbering[two_arm[0]] = 3
    numbering[two_arm[1]] = 1
    for i, node in enumerate(long_arm):
        numbering[node] = 5 + i
    return DynkinComponent(LieFamily.E, rank, numbering)


def parabolic_order(rs: RootSystem, nodes: Iterable[int]) -> int:
    """Return |W_J| for the standard parabolic subgroup generated by the given nodes."""
    order = 1
    for component in dynkin_components(rs, nodes):
        order *= weyl_group_order(component.family, component.rank)
    return order
