"""
Weyl group elements stored as integer action matrices.

An element w is kept as the matrix whose j-th column holds w(alpha_j) in the
simple-root basis, together with the matrix of w^-1 and the length. Two
elements are equal exactly when their matrices are equal.
"""

import json
from typing import FrozenSet, Iterable, List, Optional, Tuple, Union

import numpy as np

from schubert_ed.exception import ContextMismatchError, InvalidWordError
from schubert_ed.rootsys import ParabolicSubset, RootSystem

Word = List[int]

DTYPE = np.int16


def parse_word(text: str, rank: Optional[int] = None) -> Word:
    """
    Parse a word in the simple reflections.

    Accepted forms are a digit string such as '765432413' (also written
    's_{765432413}'), a JSON array such as '[7, 6, 5]', and '', 'e' or 'id'
    for the empty word.

    Args:
        text: The textual word
        rank: If given, every letter must lie in 1..rank

    Returns:
        list: The node indices, read left to right

    Raises:
        InvalidWordError: If the text cannot be parsed or a letter is out of range.
    """
    text = text.strip()
    if text.startswith('['):
        try:
            word = json.loads(text)
        except json.JSONDecodeError as e:
            raise InvalidWordError(f'Malformed word {text!r}: {e}')
        if not isinstance(word, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in word):
            raise InvalidWordError(f'Word {text!r} must be an array of integers')
    else:
        if text.startswith('s_'):
            text = text[2:]
        text = text.strip('{}')
        if text in ('', 'e', 'id'):
            return []
        if not text.isdigit():
            raise InvalidWordError(f'Malformed word {text!r}: expected digits')
        word = [int(c) for c in text]
    check_word(word, rank)
    return word


def check_word(word: Iterable[int], rank: Optional[int]) -> None:
    """
    Raise InvalidWordError if a letter is not a node index.

    Raises:
        InvalidWordError: If a letter is below 1 or above rank.
    """
    for letter in word:
        if letter < 1 or (rank is not None and letter > rank):
            raise InvalidWordError(f'Letter {letter} is outside 1..{rank}')


def format_word(word: Iterable[int]) -> str:
    """Render a word as a digit string, falling back to JSON for letters above 9."""
    word = list(word)
    if all(1 <= letter <= 9 for letter in word):
        return ''.join(str(letter) for letter in word)
    return json.dumps(word)


class WeylElement:
    """
    An element of the Weyl group of a root system.

    Attributes:
        rs: The root system the element acts on
        matrix: Images of the simple roots as columns
        inverse_matrix: The matrix of the inverse element
        length: Number of positive roots sent to negative roots
    """

    __slots__ = ('rs', 'matrix', 'inverse_matrix', 'length', '_key', '_support')

    def __init__(self, rs: RootSystem, matrix: np.ndarray, inverse_matrix: np.ndarray, length: int):
        self.rs = rs
        self.matrix = matrix
        self.inverse_matrix = inverse_matrix
        self.length = length
        self._key = None
        self._support = None

    @property
    def key(self) -> bytes:
        """Canonical hashable form of the element."""
        if self._key is None:
            self._key = self.matrix.tobytes()
        return self._key

    def sort_key(self) -> Tuple[int, ...]:
        """Lexicographic order on matrix entries, used to sort strata deterministically."""
        return tuple(self.matrix.flatten().tolist())

    def __eq__(self, other):
        if not isinstance(other, WeylElement):
            return NotImplemented
        return self.rs is other.rs and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f'WeylElement({self.rs.name}, s_{{{format_word(self.reduced_word())}}})'

    def is_identity(self) -> bool:  # noqa: D102
        return self.length == 0

    def has_right_descent(self, node: int) -> bool:
        """True iff w(alpha_node) is a negative root."""
        return int(self.matrix[:, node - 1].sum()) < 0

    def has_left_descent(self, node: int) -> bool:
        """True iff w^-1(alpha_node) is a negative root."""
        return int(self.inverse_matrix[:, node - 1].sum()) < 0

    def right_descents(self) -> FrozenSet[int]:  # noqa: D102
        return frozenset(int(i) + 1 for i in np.flatnonzero(self.matrix.sum(axis=0) < 0))

    def left_descents(self) -> FrozenSet[int]:  # noqa: D102
        return frozenset(int(i) + 1 for i in np.flatnonzero(self.inverse_matrix.sum(axis=0) < 0))

    def descents(self, side: str = 'right') -> FrozenSet[int]:
        """
        Return the left or right descent set.

        Args:
            side: 'left' or 'right'

        Returns:
            frozenset: Nodes i with l(s_i w) < l(w) (left) or l(w s_i) < l(w) (right)
        """
        if side == 'left':
            return self.left_descents()
        if side == 'right':
            return self.right_descents()
        raise ValueError(f'side must be left or right, got {side!r}')

    def first_left_descent(self) -> Optional[int]:
        """The smallest left descent, or None for the identity."""
        negative = np.flatnonzero(self.inverse_matrix.sum(axis=0) < 0)
        return int(negative[0]) + 1 if negative.size else None

    def left_multiply_simple(self, node: int) -> 'WeylElement':
        """Return s_node * w."""
        s = self.rs.simple_reflection(node)
        step = -1 if self.has_left_descent(node) else 1
        return WeylElement(self.rs, s @ self.matrix, self.inverse_matrix @ s, self.length + step)

    def right_multiply_simple(self, node: int) -> 'WeylElement':
        """Return w * s_node."""
        s = self.rs.simple_reflection(node)
        step = -1 if self.has_right_descent(node) else 1
        return WeylElement(self.rs, self.matrix @ s, s @ self.inverse_matrix, self.length + step)

    def multiply(self, other: 'WeylElement') -> 'WeylElement':
        """
        Return the product self * other.

        Raises:
            ContextMismatchError: If the elements belong to different root systems.
        """
        if other.rs is not self.rs:
            raise ContextMismatchError(f'Cannot multiply elements of {self.rs.name} and {other.rs.name}')
        matrix = self.matrix @ other.matrix
        return WeylElement(self.rs, matrix, other.inverse_matrix @ self.inverse_matrix,
                           inversion_count(self.rs, matrix))

    def __mul__(self, other: 'WeylElement') -> 'WeylElement':
        return self.multiply(other)

    def inverse(self) -> 'WeylElement':  # noqa: D102
        return WeylElement(self.rs, self.inverse_matrix, self.matrix, self.length)

    @property
    def support(self) -> FrozenSet[int]:
        """
        Nodes occurring in some (equivalently every) reduced word.

        Row i of w - 1 vanishes exactly when w fixes the i-th fundamental
        coweight, i.e. when w lies in the parabolic subgroup without node i.
        """
        if self._support is None:
            moved = (self.matrix != np.eye(self.rs.rank, dtype=DTYPE)).any(axis=1)
            self._support = frozenset(int(i) + 1 for i in np.flatnonzero(moved))
        return self._support

    def reduced_word(self) -> Word:
        """Return a reduced word, always peeling off the smallest left descent."""
        word = []
        w = self
        while w.length:
            node = w.first_left_descent()
            word.append(node)
            w = w.left_multiply_simple(node)
        return word


def inversion_count(rs: RootSystem, matrix: np.ndarray) -> int:
    """Count the positive roots that the matrix sends to negative roots."""
    images = matrix.astype(np.int64) @ rs.positive_roots.T.astype(np.int64)
    return int((images.sum(axis=0) < 0).sum())


def identity(rs: RootSystem) -> WeylElement:  # noqa: D103
    eye = np.eye(rs.rank, dtype=DTYPE)
    return WeylElement(rs, eye, eye.copy(), 0)


def from_word(rs: RootSystem, word: Iterable[int]) -> WeylElement:
    """
    Multiply out a word of simple reflections, left to right.

    The word need not be reduced; the length is tracked exactly.

    Raises:
        InvalidWordError: If a letter is outside 1..rank.
    """
    word = list(word)
    check_word(word, rs.rank)
    w = identity(rs)
    for node in word:
        w = w.right_multiply_simple(node)
    return w


def from_matrix(rs: RootSystem, matrix: np.ndarray, length: Optional[int] = None) -> WeylElement:
    """
    Rebuild an element from its action matrix.

    The inverse comes from invariance of the form: M^-1 = G^-1 M^T G.
    """
    matrix = np.asarray(matrix, dtype=DTYPE).reshape(rs.rank, rs.rank)
    gram = rs.gram.astype(np.float64)
    inverse = np.rint(np.linalg.solve(gram, matrix.T.astype(np.float64) @ gram)).astype(DTYPE)
    if length is None:
        length = inversion_count(rs, matrix)
    return WeylElement(rs, matrix, inverse, length)


def from_key(rs: RootSystem, key: bytes, length: Optional[int] = None) -> WeylElement:
    """Rebuild an element from the bytes returned by WeylElement.key."""
    return from_matrix(rs, np.frombuffer(key, dtype=DTYPE).copy(), length)


def longest_element(rs: RootSystem,
                    subset: Union[ParabolicSubset, Iterable[int], None] = None) -> WeylElement:
    """
    Return the longest element of a standard parabolic subgroup.

    Greedily right-multiplies by the smallest allowed s_i that increases
    the length until every allowed node is a right descent.

    Args:
        rs: The root system
        subset: A ParabolicSubset (its Delta_P is used), an iterable of
                generating nodes, or None for the whole group

    Returns:
        WeylElement: w_0 of the generated subgroup
    """
    if subset is None:
        nodes = rs.nodes
    elif isinstance(subset, ParabolicSubset):
        nodes = subset.retained
    else:
        nodes = tuple(sorted(set(subset)))
        check_word(nodes, rs.rank)
    w = identity(rs)
    while True:
        ascents = [node for node in nodes if not w.has_right_descent(node)]
        if not ascents:
            return w
        w = w.right_multiply_simple(ascents[0])


def length(w: WeylElement) -> int:  # noqa: D103
    return w.length


def descents(w: WeylElement, side: str = 'right') -> FrozenSet[int]:  # noqa: D103
    return w.descents(side)


def reduced_word(w: WeylElement) -> Word:  # noqa: D103
    return w.reduced_word()
