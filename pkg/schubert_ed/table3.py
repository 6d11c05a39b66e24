"""
Bundled incomparable pairs for the exceptional Grassmannians.

Each row names u and v in W^{P_m} with l(u) + l(v) = L and the dual w of v,
such that u is not below w. Such a pair shows that e.d.(G/P_m) < L. The
rows are claims to be checked, never trusted input.
"""

import json
import logging
import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional

from schubert_ed.bruhat import BruhatCache, BruhatOracle
from schubert_ed.coset import coset_context, dual_rep, is_minimal_rep
from schubert_ed.exception import InvalidVarietyError, InvalidWordError
from schubert_ed.rootsys import LieFamily, ParabolicSubset, build_root_system
from schubert_ed.weyl import WeylElement, from_word, parse_word

TABLE3_PATH = os.path.join(os.path.dirname(__file__), 'data', 'table3.json')

# Diagram automorphism of E6.
E6_MIRROR = {1: 6, 2: 2, 3: 5, 4: 4, 5: 3, 6: 1}


@dataclass(frozen=True)
class Table3Row:
    """
    One incomparable pair.

    Attributes:
        family: LieFamily.E or LieFamily.F
        rank: Rank of the root system
        node: The excluded node m
        u: Word of u
        v: Word of v
        w: Word of the dual of v, or None when it is not recorded
        L: l(u) + l(v), one more than the effective good divisibility
        derived: True for rows obtained from another row by a diagram automorphism
    """

    family: LieFamily
    rank: int
    node: int
    u: str
    v: str
    w: Optional[str]
    L: int  # noqa: N815
    derived: bool = False

    @property
    def label(self) -> str:  # noqa: D102
        return f'{self.family.value}{self.rank}({self.node})'


@dataclass
class Table3Check:
    """
    Outcome of checking one row.

    Attributes:
        row: The checked row
        checks: Name of each check to its result
        messages: Human readable description of every failed check
    """

    row: Table3Row
    checks: Dict[str, bool] = field(default_factory=dict)
    messages: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:  # noqa: D102
        return all(self.checks.values())

    def record(self, name: str, ok: bool, message: str) -> None:
        """Store a check result, keeping the message only when it failed."""
        self.checks[name] = ok
        if not ok:
            self.messages.append(f'{self.row.label}: {message}')

    def to_dict(self) -> Dict:  # noqa: D102
        return {'variety': self.row.label, 'L': self.row.L, 'passed': self.passed,
                'checks': self.checks, 'messages': self.messages}


def _mirror(word: str) -> str:
    return ''.join(str(E6_MIRROR[int(c)]) for c in word)


@lru_cache(maxsize=1)
def load_table3(path: str = TABLE3_PATH) -> List[Table3Row]:
    """
    Read the bundled rows and add the E6 rows for nodes 5 and 6 by the diagram symmetry.

    Returns:
        list: Rows sorted by family, rank and node
    """
    with open(path, 'r') as f:
        data = json.load(f)
    rows = [Table3Row(LieFamily(r['family']), r['rank'], r['node'], r['u'], r['v'], r.get('w'), r['L'])
            for r in data['rows']]
    present = {(row.family, row.rank, row.node) for row in rows}
    for row in list(rows):
        if row.family == LieFamily.E and row.rank == 6:
            node = E6_MIRROR[row.node]
            if (row.family, row.rank, node) not in present:
                rows.append(Table3Row(row.family, row.rank, node, _mirror(row.u), _mirror(row.v),
                                      _mirror(row.w) if row.w else None, row.L, derived=True))
                present.add((row.family, row.rank, node))
    rows.sort(key=lambda row: (row.family.value, row.rank, row.node))
    logging.debug(f'Loaded {len(rows)} incomparable pairs from {path}')
    return rows


def find_row(family: LieFamily, rank: int, node: int) -> Table3Row:
    """
    Return the row of an exceptional Grassmannian.

    Raises:
        InvalidVarietyError: If no row exists for the variety.
    """
    for row in load_table3():
        if (row.family, row.rank, row.node) == (family, rank, node):
            return row
    raise InvalidVarietyError(f'No incomparable pair recorded for {family.value}{rank}({node})')


def _reduced(word: str, rank: int, check: Table3Check, name: str) -> Optional[WeylElement]:
    rs = build_root_system(check.row.family, rank)
    try:
        letters = parse_word(word, rank)
    except InvalidWordError as e:
        check.record(f'{name}_parses', False, str(e))
        return None
    element = from_word(rs, letters)
    check.record(f'{name}_reduced', element.length == len(letters),
                 f'{name} = s_{{{word}}} has length {element.length}, not {len(letters)}')
    return element


def check_row(row: Table3Row, expected_ed: int) -> Table3Check:
    """
    Check one row.

    The checks are: the words of u, v and w are reduced; u and v lie in
    W^{P_m}; w is the dual of v; u is not below w, decided by an oracle with
    an empty memo; l(u) + l(v) = L = expected_ed + 1.

    Args:
        row: The row to check
        expected_ed: The closed-form effective good divisibility of the variety

    Returns:
        Table3Check: Every check with its outcome
    """
    check = Table3Check(row)
    p = ParabolicSubset.maximal(row.rank, row.node)
    u = _reduced(row.u, row.rank, check, 'u')
    v = _reduced(row.v, row.rank, check, 'v')
    if u is None or v is None:
        return check
    check.record('u_minimal', is_minimal_rep(u, p), f'u = s_{{{row.u}}} is not in W^P')
    check.record('v_minimal', is_minimal_rep(v, p), f'v = s_{{{row.v}}} is not in W^P')
    if not (check.checks['u_minimal'] and check.checks['v_minimal']):
        return check

    dual = dual_rep(v, p)
    if row.w is not None:
        w = _reduced(row.w, row.rank, check, 'w')
        if w is None:
            return check
        check.record('w_is_dual', w == dual, f'w = s_{{{row.w}}} is not w0 v w_P')
    dimension = coset_context(u.rs, p).dimension
    check.record('dual_length', dual.length == dimension - v.length,
                 f'dual of v has length {dual.length}, expected {dimension - v.length}')

    oracle = BruhatOracle(BruhatCache())
    check.record('incomparable', not oracle.leq(u, dual), 'u <= w0 v w_P, so the pair is comparable')
    check.record('total_degree', u.length + v.length == row.L,
                 f'l(u) + l(v) = {u.length + v.length}, table says {row.L}')
    check.record('matches_closed_form', row.L == expected_ed + 1,
                 f'L = {row.L} but the closed form gives e.d. + 1 = {expected_ed + 1}')
    logging.info(f'Recorded pair for {row.label}: {"pass" if check.passed else "FAIL"}')
    return check


@dataclass
class ReductionChain:
    """
    A worked reduction of one comparison to an obviously false one.

    Attributes:
        label: The variety
        u: Word of u
        head: First factor of w
        tail: Second factor of w; u <= head*tail reduces to u <= tail
        reduced_u: Word of u after stripping common left descents
        reduced_w: Word of tail after the same stripping
        results: The four comparisons, all expected False, and the factorisation check
    """

    label: str
    u: str
    head: str
    tail: str
    reduced_u: str
    reduced_w: str
    results: Dict[str, bool] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        """True when w = head * tail is length additive and every step of the chain is incomparable."""
        return (self.results.get('length_additive', False)
                and not any(v for k, v in self.results.items() if k != 'length_additive'))


def check_reduction_chains(path: str = TABLE3_PATH) -> List[ReductionChain]:
    """Evaluate every recorded reduction chain with a cold oracle."""
    with open(path, 'r') as f:
        data = json.load(f)
    chains = []
    for record in data.get('reduction_chains', []):
        family = LieFamily(record['family'])
        rs = build_root_system(family, record['rank'])
        chain = ReductionChain(f'{family.value}{record["rank"]}({record["node"]})', record['u'],
                               record['head'], record['tail'], record['reduced_u'], record['reduced_w'])
        oracle = BruhatOracle(BruhatCache())

        def element(word: str) -> WeylElement:
            return from_word(rs, parse_word(word, rs.rank))

        head, tail = element(chain.head), element(chain.tail)
        w = head * tail
        u = element(chain.u)
        chain.results['length_additive'] = w.length == head.length + tail.length
        chain.results['u_le_w'] = oracle.leq(u, w)
        chain.results['u_le_tail'] = oracle.leq(u, tail)
        chain.results['reduced'] = oracle.leq(element(chain.reduced_u), element(chain.reduced_w))
        chains.append(chain)
    return chains
