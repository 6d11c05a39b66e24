"""
schubert-ed - Main Entry Point

This script provides a command-line interface for computing the effective good
divisibility of rational homogeneous varieties G/P and for checking the
combinatorics behind it.

Usage:
  schubert-ed <command> [options]

Commands:
  ed         e.d. of a Grassmannian or flag variety (closed form, brute force or both)
  bruhat     Compare two Weyl group elements in Bruhat order
  wp         Enumerate the minimal coset representatives W^P by length
  symbols    Convert between partitions and index sets of B_n(m) and D_{n+1}(m)
  verify     Run acceptance suites
  morphism   Decide whether morphisms into a variety must be constant
  cache      List or clear the enumeration cache

Common options:
  --format FORMAT        json (default) or tsv
  --threads N            Worker processes for brute-force scans
  --budget-pairs N       Stop scans after N pair tests (0 = unlimited)
  --budget-seconds S     Stop scans after S seconds (0 = unlimited)
  --cache-dir DIR        Where enumerations are cached
  --no-cache             Do not read or write the cache
  --log-level LEVEL      Set the logging level (default: warning)

Configuration:
  Settings can be provided in three ways (in order of precedence):
  1. Command line arguments
  2. Environment variables (also read from a .env file): SCHUBERT_ED_CACHE,
     SCHUBERT_ED_THREADS, SCHUBERT_ED_BUDGET_PAIRS, SCHUBERT_ED_BUDGET_SECONDS,
     SCHUBERT_ED_POSET_LIMIT
  3. Built-in defaults

Exit codes:
  0 success, 1 usage error or failed verification, 2 methods disagree, 3 budget exhausted
"""

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from typing import Dict, List, Optional

from dotenv import load_dotenv

from schubert_ed import version
from schubert_ed.bruhat import leq
from schubert_ed.coset import enumerate_wp
from schubert_ed.ed_engine import (DEFAULT_POSET_LIMIT, EdReport, ScanBudget, VarietySpec, closed_form_report,
                                   corollary_obstruction, ed_bruteforce, ed_flag, morphism_obstruction)
from schubert_ed.exception import SchubertEdError, StrataCacheError
from schubert_ed.rootsys import LieFamily, build_root_system, parse_family
from schubert_ed.schubert_symbols import (GrassContext, dual_index_set, index_set_of, parse_index_set,
                                          parse_partition, partition_of, weyl_of_symbol)
from schubert_ed.strata_cache import DEFAULT_CACHE_DIR, NullStrataCache, StrataCache, StrataCacheFile
from schubert_ed.verify import SUITES, VerifyOptions, run_suite
from schubert_ed.weyl import format_word, from_word, parse_word

LOG_LEVELS = {
    'debug': logging.DEBUG,
    'info': logging.INFO,
    'warning': logging.WARNING,
    'error': logging.ERROR,
    'critical': logging.CRITICAL
}

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_DISAGREE = 2
EXIT_TRUNCATED = 3


class UsageError(SchubertEdError):
    """Exception raised for invalid command-line arguments."""

    pass


class ArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that raises UsageError instead of exiting with status 2."""

    def error(self, message):  # noqa: D102
        raise UsageError(message)


@dataclass
class CliConfig:
    """
    Settings resolved from arguments, environment and defaults.

    Attributes:
        cache_dir: Directory of the enumeration cache
        use_cache: False when --no-cache is given
        threads: Worker processes, at least 1
        budget_pairs: Pair-test budget, 0 for unlimited
        budget_seconds: Time budget in seconds, 0 for unlimited
        output_format: 'json' or 'tsv'
        poset_limit: Largest |W^P| scanned on a bitset poset
        max_elements: Largest W^P to enumerate, 0 for unlimited
    """

    cache_dir: str = DEFAULT_CACHE_DIR
    use_cache: bool = True
    threads: int = 1
    budget_pairs: int = 0
    budget_seconds: float = 0
    output_format: str = 'json'
    poset_limit: int = DEFAULT_POSET_LIMIT
    max_elements: int = 0

    def budget(self) -> ScanBudget:  # noqa: D102
        return ScanBudget(pairs=self.budget_pairs, seconds=self.budget_seconds,
                          max_elements=self.max_elements or None)

    def cache(self) -> StrataCache:  # noqa: D102
        return StrataCacheFile(self.cache_dir) if self.use_cache else NullStrataCache()


def _env_number(value, name: str, cast=int):
    try:
        return cast(value)
    except (TypeError, ValueError):
        raise UsageError(f'{name} must be a number, got {value!r}')


def build_config(args) -> CliConfig:
    """
    Resolve settings, command line first, then environment variables, then defaults.

    Raises:
        UsageError: If a value is not a number, threads < 1 or a budget is negative.
    """
    def pick(arg_value, env_name, default):
        if arg_value is not None:
            return arg_value
        env_value = os.getenv(env_name)
        return env_value if env_value not in (None, '') else default

    config = CliConfig(
        cache_dir=pick(getattr(args, 'cache_dir', None), 'SCHUBERT_ED_CACHE', DEFAULT_CACHE_DIR),
        use_cache=not getattr(args, 'no_cache', False),
        threads=_env_number(pick(getattr(args, 'threads', None), 'SCHUBERT_ED_THREADS', 1), 'threads'),
        budget_pairs=_env_number(pick(getattr(args, 'budget_pairs', None), 'SCHUBERT_ED_BUDGET_PAIRS', 0),
                                 'budget-pairs'),
        budget_seconds=_env_number(pick(getattr(args, 'budget_seconds', None), 'SCHUBERT_ED_BUDGET_SECONDS', 0),
                                   'budget-seconds', float),
        output_format=getattr(args, 'format', 'json'),
        poset_limit=_env_number(pick(getattr(args, 'poset_limit', None), 'SCHUBERT_ED_POSET_LIMIT',
                                     DEFAULT_POSET_LIMIT), 'poset-limit'),
        max_elements=_env_number(pick(getattr(args, 'max_elements', None), 'SCHUBERT_ED_MAX_ELEMENTS', 0),
                                 'max-elements'),
    )
    if config.threads < 1:
        raise UsageError(f'threads must be at least 1, got {config.threads}')
    if config.budget_pairs < 0 or config.budget_seconds < 0 or config.max_elements < 0:
        raise UsageError('budgets must not be negative')
    return config


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--format', default='json', choices=('json', 'tsv'), help='Output format (default: json)')
    parser.add_argument('--threads', type=int, help='Worker processes for brute-force scans')
    parser.add_argument('--budget-pairs', type=int, help='Largest number of pair tests (0 = unlimited)')
    parser.add_argument('--budget-seconds', type=float, help='Time limit in seconds (0 = unlimited)')
    parser.add_argument('--cache-dir', help='Directory of the enumeration cache')
    parser.add_argument('--no-cache', action='store_true', help='Do not read or write the enumeration cache')
    parser.add_argument('--poset-limit', type=int, help='Largest |W^P| scanned on a bitset poset')
    parser.add_argument('--max-elements', type=int, help='Largest W^P to enumerate (0 = unlimited)')
    parser.add_argument('--log-level',
                        default='warning',
                        choices=LOG_LEVELS.keys(),
                        help='Set the logging level (default: warning)')


def _add_variety(parser: argparse.ArgumentParser, required: bool = True) -> None:
    parser.add_argument('--family', required=required, help='Lie type, e.g. B, D or E7')
    parser.add_argument('--rank', type=int, help='Rank, unless implied by the family')
    parser.add_argument('--node', type=int, nargs='+', help='Excluded node(s)')
    parser.add_argument('--flag', action='store_true', help='Exclude every node (complete flag variety)')


def parse_arguments(argv: Optional[List[str]] = None):  # noqa: D103
    parser = ArgumentParser(
        prog='schubert-ed',
        description='Effective good divisibility of rational homogeneous varieties')
    parser.add_argument('--version', action='version', version=f'%(prog)s {version}')
    commands = parser.add_subparsers(dest='command', required=True)

    ed = commands.add_parser('ed', help='Compute e.d.(G/P)')
    _add_variety(ed)
    ed.add_argument('--method', default='closed', choices=('closed', 'brute', 'both'),
                    help='Closed form, brute-force scan, or both with a comparison (default: closed)')
    _add_common(ed)
    ed.set_defaults(handler=cmd_ed)

    bruhat = commands.add_parser('bruhat', help='Decide u <= w in Bruhat order')
    bruhat.add_argument('--family', required=True, help='Lie type, e.g. E7')
    bruhat.add_argument('--rank', type=int, help='Rank, unless implied by the family')
    bruhat.add_argument('--u', required=True, help="Word of u, e.g. 765432413 or '' for the identity")
    bruhat.add_argument('--w', required=True, help='Word of w')
    _add_common(bruhat)
    bruhat.set_defaults(handler=cmd_bruhat)

    wp = commands.add_parser('wp', help='Enumerate W^P by length')
    _add_variety(wp)
    wp.add_argument('--max-length', type=int, help='Stop after this length')
    _add_common(wp)
    wp.set_defaults(handler=cmd_wp)

    symbols = commands.add_parser('symbols', help='Convert partitions and index sets')
    symbols.add_argument('--family', required=True, choices=('B', 'D'), help='B for B_n(m), D for D_{n+1}(m)')
    symbols.add_argument('--n', type=int, required=True, help='n')
    symbols.add_argument('--m', type=int, required=True, help='The excluded node m')
    symbols.add_argument('--from', dest='source', required=True, choices=('partition', 'indexset'),
                         help='What --value holds')
    symbols.add_argument('--value', required=True, help="A partition such as '3,1' or an index set such as '2,5'")
    symbols.add_argument('--t', type=int, choices=(0, 1, 2), help='Type of a family D partition with a part equal to k')
    _add_common(symbols)
    symbols.set_defaults(handler=cmd_symbols)

    verify = commands.add_parser('verify', help='Run acceptance suites')
    verify.add_argument('--suite', required=True, nargs='+', choices=list(SUITES) + ['all'],
                        help='Suites to run; "all" runs every suite except table1-e8-heavy')
    verify.add_argument('--max-rank', type=int, default=6, help='Largest classical rank (default: 6)')
    verify.add_argument('--n', type=int, help='Restrict partition suites to this n')
    verify.add_argument('--m', type=int, help='Restrict partition suites to this m')
    _add_common(verify)
    verify.set_defaults(handler=cmd_verify)

    morphism = commands.add_parser('morphism', help='Decide whether morphisms must be constant')
    _add_variety(morphism)
    morphism.add_argument('--source-ed', type=int, help='e.d. of the source variety')
    morphism.add_argument('--source-family', help='Source Lie type, to compute its e.d.')
    morphism.add_argument('--source-rank', type=int, help='Source rank')
    morphism.add_argument('--source-node', type=int, nargs='+', help='Source excluded node(s)')
    morphism.add_argument('--q', type=int, nargs='+',
                          help='Nodes outside Delta_Q; selects the G/P -> Q/P_bar form with --family/--node as G/P')
    morphism.add_argument('--p-bar', type=int, nargs='+', help='Nodes outside Delta_P_bar')
    _add_common(morphism)
    morphism.set_defaults(handler=cmd_morphism)

    cache = commands.add_parser('cache', help='Manage the enumeration cache')
    cache.add_argument('action', choices=('list', 'clear'))
    _add_common(cache)
    cache.set_defaults(handler=cmd_cache)

    return parser.parse_args(argv)


def _spec_from(args) -> VarietySpec:
    return VarietySpec.parse(args.family, args.rank, args.node, args.flag)


def _emit(config: CliConfig, data: Dict, header: List[str], rows: List[List]) -> None:
    if config.output_format == 'tsv':
        print('\t'.join(header))
        for row in rows:
            print('\t'.join('' if value is None else str(value) for value in row))
    else:
        print(json.dumps(data, indent=2))


def _report_row(report: EdReport) -> List:
    witness = report.witness
    return [report.spec.label, report.ed, report.method.value,
            format_word(witness.u) if witness else None, format_word(witness.w) if witness else None,
            witness.total_degree if witness else None]


ED_HEADER = ['spec', 'ed', 'method', 'witness_u', 'witness_w', 'L']


def cmd_ed(args, config: CliConfig) -> int:
    """Compute e.d. and print the report."""
    spec = _spec_from(args)
    if args.method == 'closed':
        report = closed_form_report(spec)
        _emit(config, report.to_dict(), ED_HEADER, [_report_row(report)])
        return EXIT_OK

    with config.cache() as cache:
        report = ed_bruteforce(spec, config.budget(), config.threads, cache, config.poset_limit)
    data = report.to_dict()
    status = EXIT_TRUNCATED if report.truncated else EXIT_OK
    rows = [_report_row(report)]
    if args.method == 'both':
        closed = ed_flag(spec)
        data['closed_form'] = closed
        data['agree'] = None if report.truncated else report.ed == closed
        rows.append([spec.label, closed, closed_form_report(spec).method.value, None, None, None])
        if not report.truncated and report.ed != closed:
            logging.error(f'{spec.label}: brute force gives {report.ed}, closed form {closed}')
            status = EXIT_DISAGREE
    _emit(config, data, ED_HEADER, rows)
    return status


def cmd_bruhat(args, config: CliConfig) -> int:
    """Compare two words in Bruhat order."""
    family, rank = parse_family(args.family, args.rank)
    rs = build_root_system(LieFamily.B if family == LieFamily.C else family, rank)
    u = from_word(rs, parse_word(args.u, rank))
    w = from_word(rs, parse_word(args.w, rank))
    result = leq(u, w)
    data = {'family': family.value, 'rank': rank, 'u': format_word(u.reduced_word()),
            'w': format_word(w.reduced_word()), 'u_length': u.length, 'w_length': w.length, 'leq': result}
    _emit(config, data, ['u', 'w', 'leq'], [[data['u'], data['w'], result]])
    return EXIT_OK


def cmd_wp(args, config: CliConfig) -> int:
    """Print the number of minimal coset representatives of each length."""
    spec = _spec_from(args)
    rs = build_root_system(spec.data_family, spec.rank)
    enum = enumerate_wp(rs, spec.parabolic, args.max_length, config.max_elements or None)
    data = {'variety': spec.label, 'dimension': enum.dimension, 'counts': enum.counts,
            'total': enum.total_count, 'complete': enum.is_complete, 'truncated': enum.truncated}
    rows = [[length, count] for length, count in enumerate(enum.counts)] + [['total', enum.total_count]]
    _emit(config, data, ['length', 'count'], rows)
    if enum.truncated:
        print(f'Enumeration stopped after {enum.total_count} elements', file=sys.stderr)
        return EXIT_TRUNCATED
    return EXIT_OK


def cmd_symbols(args, config: CliConfig) -> int:
    """Convert a partition or index set and print every related symbol."""
    ctx = GrassContext(LieFamily(args.family), args.n, args.m)
    if args.source == 'partition':
        lam = parse_partition(args.value, ctx, args.t)
        p = index_set_of(lam, ctx)
    else:
        p = parse_index_set(args.value, ctx)
        lam = partition_of(p, ctx)
    dual = dual_index_set(p, ctx)
    u = weyl_of_symbol(p, ctx)
    data = {'context': str(ctx), 'k': ctx.k, 'N': ctx.N, 'partition': lam.to_dict(), 'weight': lam.weight,
            'index_set': list(p), 'dual_index_set': list(dual), 'dual_partition': partition_of(dual, ctx).to_dict(),
            'weyl_word': format_word(u.reduced_word()), 'length': u.length}
    _emit(config, data, ['partition', 'index_set', 'dual_index_set', 'weyl_word'],
          [[str(lam), str(p), str(dual), data['weyl_word']]])
    return EXIT_OK


def cmd_verify(args, config: CliConfig) -> int:
    """Run suites and print a pass/fail summary."""
    names = [name for name in SUITES if name != 'table1-e8-heavy'] if 'all' in args.suite else args.suite
    with config.cache() as cache:
        options = VerifyOptions(max_rank=args.max_rank, n=args.n, m=args.m, budget=config.budget(),
                                threads=config.threads, cache=cache, poset_limit=config.poset_limit)
        results = [run_suite(name, options) for name in names]
    data = {'suites': [result.to_dict() for result in results],
            'passed': all(result.passed for result in results)}
    rows = [[r.name, 'pass' if r.passed else 'FAIL', len(r.cases), 'truncated' if r.truncated else '']
            for r in results]
    _emit(config, data, ['suite', 'status', 'cases', 'note'], rows)
    if not data['passed']:
        return EXIT_FAILURE
    return EXIT_TRUNCATED if any(result.truncated for result in results) else EXIT_OK


def cmd_morphism(args, config: CliConfig) -> int:
    """Print the verdict on morphisms into the target."""
    if args.q:
        if not args.p_bar:
            raise UsageError('--q needs --p-bar')
        verdict = corollary_obstruction(_spec_from(args), args.q, args.p_bar)
    else:
        target = _spec_from(args)
        if args.source_ed is not None:
            source_ed = args.source_ed
        elif args.source_family:
            source_ed = ed_flag(VarietySpec.parse(args.source_family, args.source_rank, args.source_node))
        else:
            raise UsageError('Give --source-ed or a source variety')
        verdict = morphism_obstruction(source_ed, target)
    _emit(config, verdict.to_dict(), ['verdict', 'source_ed', 'target_ed', 'reason'],
          [[verdict.verdict, verdict.source_ed, verdict.target_ed, verdict.reason]])
    return EXIT_OK


def cmd_cache(args, config: CliConfig) -> int:
    """List or clear cache files."""
    cache = StrataCacheFile(config.cache_dir)
    if args.action == 'clear':
        with cache:
            removed = cache.clear()
        _emit(config, {'removed': removed, 'cache_dir': cache.cache_dir}, ['removed'], [[removed]])
        return EXIT_OK
    entries = cache.entries()
    _emit(config, {'cache_dir': cache.cache_dir, 'entries': entries},
          ['file', 'family', 'rank', 'excluded', 'code_version', 'size'],
          [[e.get('file'), e.get('family'), e.get('rank'), e.get('excluded'), e.get('code_version'), e.get('size')]
           for e in entries])
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:  # noqa: D103
    try:
        args = parse_arguments(argv)
    except UsageError as e:
        print(f'Error: {e}', file=sys.stderr)
        return EXIT_FAILURE

    # Configure logging
    logging.basicConfig(
        level=LOG_LEVELS[args.log_level],
        format='%(asctime)s - %(levelname)s - %(message)s'
    )

    # Environment variables may come from a .env file
    load_dotenv()

    try:
        config = build_config(args)
        return args.handler(args, config)
    except StrataCacheError as e:
        logging.error('Error occurred while using the enumeration cache.')
        print(f'Error: Problem with the enumeration cache - {e}', file=sys.stderr)
        return EXIT_FAILURE
    except SchubertEdError as e:
        print(f'Error: {e}', file=sys.stderr)
        return EXIT_FAILURE
