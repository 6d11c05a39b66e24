"""
Minimal length coset representatives W^P.

W^P indexes the Schubert classes of G/P. This module tests membership,
enumerates W^P stratum by stratum, factors elements as w = w1 w2 with
w1 in W^P and w2 in W_P, and implements the duality u -> w0 u w_P.
"""

import logging
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from schubert_ed.exception import NotMinimalRepresentativeError
from schubert_ed.rootsys import ParabolicSubset, RootSystem, parabolic_order, weyl_group_order
from schubert_ed.weyl import WeylElement, identity, longest_element


def deadline_passed(deadline: Optional[float]) -> bool:
    """True once time.monotonic() is past deadline; None never passes."""
    return deadline is not None and time.monotonic() > deadline


def is_minimal_rep(u: WeylElement, p: ParabolicSubset) -> bool:
    """True iff u(alpha_i) > 0 for every node i of Delta_P."""
    retained = [node - 1 for node in p.retained]
    if not retained:
        return True
    return bool((u.matrix[:, retained].sum(axis=0) > 0).all())


@dataclass(frozen=True, eq=False)
class CosetContext:
    """
    Per-parabolic data shared by the coset operations.

    Attributes:
        rs: The root system
        parabolic: The parabolic subgroup
        w0: Longest element of W
        w_p: Longest element of W_P
        dimension: dim G/P, the length of the longest element of W^P
    """

    rs: RootSystem
    parabolic: ParabolicSubset
    w0: WeylElement
    w_p: WeylElement

    @property
    def dimension(self) -> int:  # noqa: D102
        return self.w0.length - self.w_p.length


@lru_cache(maxsize=64)
def coset_context(rs: RootSystem, p: ParabolicSubset) -> CosetContext:  # noqa: D103
    return CosetContext(rs, p, longest_element(rs), longest_element(rs, p))


def project_to_wp(w: WeylElement, p: ParabolicSubset) -> Tuple[WeylElement, WeylElement]:
    """
    Factor w = w1 w2 with w1 in W^P and w2 in W_P.

    Right descents lying in Delta_P are stripped one at a time; lengths add.

    Args:
        w: Any element
        p: The parabolic subgroup

    Returns:
        tuple: (w1, w2)
    """
    w1 = w
    w2 = identity(w.rs)
    while True:
        node = next((i for i in p.retained if w1.has_right_descent(i)), None)
        if node is None:
            return w1, w2
        w1 = w1.right_multiply_simple(node)
        w2 = w2.left_multiply_simple(node)


def dual_rep(u: WeylElement, p: ParabolicSubset) -> WeylElement:
    """
    Return the minimal representative of w0 u w_P.

    This is Poincare duality on Schubert classes: it is an involution on
    W^P and sends length l to dim G/P - l.

    Raises:
        NotMinimalRepresentativeError: If u is not in W^P.
    """
    if not is_minimal_rep(u, p):
        raise NotMinimalRepresentativeError(f'{u!r} is not a minimal representative for P{p}')
    ctx = coset_context(u.rs, p)
    return project_to_wp(ctx.w0 * u * ctx.w_p, p)[0]


@dataclass
class WpEnumeration:
    """
    The elements of W^P grouped by length.

    Attributes:
        rs: The root system
        parabolic: The parabolic subgroup
        strata: Length to the elements of that length, sorted by matrix entries
        dimension: dim G/P
        truncated: True if enumeration stopped on the element or time budget
    """

    rs: RootSystem
    parabolic: ParabolicSubset
    strata: Dict[int, List[WeylElement]]
    dimension: int
    truncated: bool = False
    _positions: Optional[Dict[bytes, int]] = field(default=None, repr=False)

    @property
    def total_count(self) -> int:  # noqa: D102
        return sum(len(stratum) for stratum in self.strata.values())

    @property
    def counts(self) -> List[int]:
        """Poincare numbers: the stratum sizes by increasing length."""
        return [len(self.strata.get(length, [])) for length in range(max(self.strata) + 1)]

    @property
    def is_complete(self) -> bool:
        """True when every stratum up to the dimension has been produced."""
        return not self.truncated and max(self.strata) == self.dimension

    def is_palindromic(self) -> bool:  # noqa: D102
        counts = self.counts
        return self.is_complete and counts == counts[::-1]

    def stratum(self, length: int) -> List[WeylElement]:  # noqa: D102
        return self.strata.get(length, [])

    def elements(self) -> List[WeylElement]:
        """All elements, stratum by stratum."""
        return [u for length in sorted(self.strata) for u in self.strata[length]]

    def position(self, u: WeylElement) -> int:
        """Index of u inside its stratum."""
        if self._positions is None:
            self._positions = {v.key: i for stratum in self.strata.values() for i, v in enumerate(stratum)}
        return self._positions[u.key]

    def expected_count(self) -> int:
        """|W| / |W_P|, the size W^P must have once complete."""
        return weyl_group_order(self.rs.family, self.rs.rank) // parabolic_order(self.rs, self.parabolic.retained)


def enumerate_wp(rs: RootSystem, p: ParabolicSubset, max_length: Optional[int] = None,
                 max_elements: Optional[int] = None, deadline: Optional[float] = None) -> WpEnumeration:
    """
    Enumerate W^P breadth first by length.

    Stratum l+1 consists of the s_i u with u in stratum l, l(s_i u) = l+1 and
    s_i u in W^P, deduplicated by canonical form.

    Both budgets are checked while a stratum is being built. A stratum that
    is cut short is dropped, so a truncated enumeration holds whole strata
    only.

    Args:
        rs: The root system
        p: The parabolic subgroup
        max_length: Stop after this stratum
        max_elements: Memory budget; holding more elements stops with truncated set
        deadline: time.monotonic() value after which enumeration stops with truncated set

    Returns:
        WpEnumeration: The strata, each sorted by matrix entries
    """
    dimension = coset_context(rs, p).dimension
    top = dimension if max_length is None else min(max_length, dimension)
    strata = {0: [identity(rs)]}
    total = 1
    truncated = False
    for length in range(top):
        found: Dict[bytes, WeylElement] = {}
        for u in strata[length]:
            if deadline_passed(deadline):
                logging.warning(f'Enumeration of {rs.name} P{p} ran out of time in stratum {length + 1}')
                truncated = True
                break
            for node in rs.nodes:
                if u.has_left_descent(node):
                    continue
                v = u.left_multiply_simple(node)
                if v.key not in found and is_minimal_rep(v, p):
                    found[v.key] = v
            if max_elements is not None and total + len(found) > max_elements:
                logging.warning(f'Enumeration of {rs.name} P{p} stopped in stratum {length + 1}: '
                                f'more than {max_elements} elements')
                truncated = True
                break
        if truncated:
            break
        strata[length + 1] = sorted(found.values(), key=WeylElement.sort_key)
        total += len(found)
        logging.debug(f'{rs.name} P{p}: stratum {length + 1} has {len(found)} elements')
    logging.info(f'Enumerated {total} minimal representatives of {rs.name} P{p}')
    return WpEnumeration(rs, p, strata, dimension, truncated)
