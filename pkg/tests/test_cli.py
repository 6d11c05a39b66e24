"""Tests for the schubert-ed command line."""
import argparse
import json
import os
import tempfile
import unittest
from io import StringIO
from unittest.mock import patch

import jsonschema

from schubert_ed.cli import EXIT_DISAGREE, EXIT_FAILURE, EXIT_OK, EXIT_TRUNCATED, UsageError, build_config, main
from schubert_ed.verify import SuiteResult

SCHEMA_PATH = os.path.join(os.path.dirname(__file__), '..', 'schubert_ed', 'schema', 'ed_report.schema.json')


def run_cli(argv):
    """Run main() and return the exit code with everything printed to stdout and stderr."""
    with patch('sys.stdout', new_callable=StringIO) as out, patch('sys.stderr', new_callable=StringIO) as err:
        code = main(argv)
    return code, out.getvalue(), err.getvalue()


def run_json(argv):  # noqa: D103
    code, out, _ = run_cli(argv)
    return code, json.loads(out)


class TestEdCommand(unittest.TestCase):
    """Tests for `schubert-ed ed`."""

    def test_closed_form(self):
        """Test the closed form of F4 at node 2."""
        code, data = run_json(['ed', '--family', 'F4', '--node', '2'])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(data['ed'], 14)
        self.assertEqual(data['method'], 'closed_form')
        self.assertEqual(data['spec']['label'], 'F4(2)')

    def test_complete_flag(self):
        """Test that --flag takes the minimum over every node."""
        code, data = run_json(['ed', '--family', 'E6', '--flag'])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(data['ed'], 12)

    def test_brute_force(self):
        """Test a brute-force scan with a witness."""
        code, data = run_json(['ed', '--family', 'A', '--rank', '3', '--node', '2', '--method', 'brute',
                               '--no-cache'])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(data['ed'], 3)
        self.assertEqual(data['method'], 'brute_force')
        self.assertTrue(data['witness']['verified'])

    def test_both_methods_agree(self):
        """Test the comparison of brute force with the closed form."""
        code, data = run_json(['ed', '--family', 'B', '--rank', '3', '--node', '2', '--method', 'both',
                               '--no-cache'])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual((data['ed'], data['closed_form'], data['agree']), (5, 5, True))

    def test_reports_match_schema(self):
        """Test that ed output validates against the report schema for every method."""
        with open(SCHEMA_PATH, 'r') as f:
            schema = json.load(f)
        runs = [
            ['ed', '--family', 'B', '--rank', '3', '--node', '2', '--method', 'both', '--no-cache'],
            ['ed', '--family', 'A', '--rank', '3', '--node', '2', '--method', 'both', '--budget-pairs', '1',
             '--no-cache'],
            ['ed', '--family', 'E7', '--node', '3'],
        ]
        for argv in runs:
            with self.subTest(argv=' '.join(argv)):
                _, data = run_json(argv)
                jsonschema.validate(data, schema)

    def test_budget_exhausted(self):
        """Test the exit code of a scan stopped by the pair budget."""
        code, data = run_json(['ed', '--family', 'A', '--rank', '3', '--node', '2', '--method', 'both',
                               '--budget-pairs', '1', '--no-cache'])
        self.assertEqual(code, EXIT_TRUNCATED)
        self.assertTrue(data['truncated'])
        self.assertIsNone(data['agree'])
        self.assertNotEqual(code, EXIT_DISAGREE)

    def test_element_budget(self):
        """Test that --max-elements reaches the brute-force scan."""
        code, data = run_json(['ed', '--family', 'E7', '--node', '7', '--method', 'brute', '--max-elements', '10',
                               '--no-cache'])
        self.assertEqual(code, EXIT_TRUNCATED)
        self.assertTrue(data['truncated'])
        self.assertIsNone(data['ed'])

    @patch.dict(os.environ, {'SCHUBERT_ED_MAX_ELEMENTS': '10'})
    def test_element_budget_from_environment(self):
        """Test that SCHUBERT_ED_MAX_ELEMENTS limits the enumeration of an ed scan."""
        code, data = run_json(['ed', '--family', 'E7', '--node', '7', '--method', 'brute', '--no-cache'])
        self.assertEqual(code, EXIT_TRUNCATED)
        self.assertTrue(data['truncated'])

    def test_tsv_output(self):
        """Test the tab separated report."""
        code, out, _ = run_cli(['ed', '--family', 'G2', '--node', '1', '--format', 'tsv'])
        self.assertEqual(code, EXIT_OK)
        lines = out.splitlines()
        self.assertEqual(lines[0].split('\t'), ['spec', 'ed', 'method', 'witness_u', 'witness_w', 'L'])
        self.assertEqual(lines[1].split('\t')[:3], ['G2(1)', '5', 'closed_form'])

    def test_invalid_family(self):
        """Test that an unknown Lie type is reported with exit code 1."""
        code, out, err = run_cli(['ed', '--family', 'E9', '--node', '1'])
        self.assertEqual(code, EXIT_FAILURE)
        self.assertEqual(out, '')
        self.assertIn('Error:', err)

    def test_missing_node(self):
        """Test that a variety needs a node or --flag."""
        code, _, err = run_cli(['ed', '--family', 'B', '--rank', '3'])
        self.assertEqual(code, EXIT_FAILURE)
        self.assertIn('Error:', err)

    def test_usage_error(self):
        """Test that argparse errors become exit code 1."""
        self.assertEqual(run_cli(['ed'])[0], EXIT_FAILURE)
        self.assertEqual(run_cli(['frobnicate'])[0], EXIT_FAILURE)
        self.assertEqual(run_cli(['ed', '--family', 'A', '--rank', '3', '--node', '1', '--method', 'guess'])[0],
                         EXIT_FAILURE)


class TestBruhatCommand(unittest.TestCase):
    """Tests for `schubert-ed bruhat`."""

    def test_comparable(self):
        """Test a pair in Bruhat order."""
        code, data = run_json(['bruhat', '--family', 'A', '--rank', '3', '--u', '1', '--w', '121'])
        self.assertEqual(code, EXIT_OK)
        self.assertTrue(data['leq'])
        self.assertEqual((data['u_length'], data['w_length']), (1, 3))

    def test_incomparable(self):
        """Test a pair not in Bruhat order."""
        code, data = run_json(['bruhat', '--family', 'A', '--rank', '3', '--u', '2', '--w', '13'])
        self.assertEqual(code, EXIT_OK)
        self.assertFalse(data['leq'])

    def test_identity(self):
        """Test that the empty word is the identity."""
        code, data = run_json(['bruhat', '--family', 'E6', '--u', '', '--w', '654'])
        self.assertEqual(code, EXIT_OK)
        self.assertTrue(data['leq'])
        self.assertEqual(data['u'], '')

    def test_malformed_word(self):
        """Test that malformed words and out of range letters are rejected."""
        self.assertEqual(run_cli(['bruhat', '--family', 'A', '--rank', '3', '--u', '1x', '--w', '2'])[0],
                         EXIT_FAILURE)
        self.assertEqual(run_cli(['bruhat', '--family', 'A', '--rank', '3', '--u', '5', '--w', '2'])[0],
                         EXIT_FAILURE)


class TestWpCommand(unittest.TestCase):
    """Tests for `schubert-ed wp`."""

    def test_counts(self):
        """Test the strata sizes of the Grassmannian of planes in C^4."""
        code, data = run_json(['wp', '--family', 'A', '--rank', '3', '--node', '2'])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(data['counts'], [1, 1, 2, 1, 1])
        self.assertEqual((data['total'], data['dimension'], data['complete']), (6, 4, True))

    def test_tsv(self):
        """Test the tab separated counts."""
        code, out, _ = run_cli(['wp', '--family', 'G2', '--node', '1', '--format', 'tsv'])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(out.splitlines(), ['length\tcount', '0\t1', '1\t1', '2\t1', '3\t1', '4\t1', '5\t1',
                                            'total\t6'])

    def test_truncated(self):
        """Test that --max-elements stops the enumeration with exit code 3."""
        code, out, err = run_cli(['wp', '--family', 'E7', '--node', '7', '--max-elements', '10'])
        self.assertEqual(code, EXIT_TRUNCATED)
        self.assertTrue(json.loads(out)['truncated'])
        self.assertIn('Enumeration stopped', err)


class TestSymbolsCommand(unittest.TestCase):
    """Tests for `schubert-ed symbols`."""

    def test_partition_of_odd_quadric(self):
        """Test the symbols of the line class on the quadric B2(1)."""
        code, data = run_json(['symbols', '--family', 'B', '--n', '2', '--m', '1', '--from', 'partition',
                               '--value', '1'])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(data['index_set'], [4])
        self.assertEqual(data['dual_index_set'], [2])
        self.assertEqual(data['dual_partition'], {'parts': [2]})
        self.assertEqual((data['weight'], data['length'], data['weyl_word']), (1, 1, '1'))

    def test_from_index_set(self):
        """Test converting an index set back to its partition."""
        code, data = run_json(['symbols', '--family', 'B', '--n', '3', '--m', '2', '--from', 'indexset',
                               '--value', '2,5'])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(data['partition'], {'parts': [3, 1]})
        self.assertEqual(data['dual_index_set'], [3, 6])
        self.assertEqual(data['length'], 4)

    def test_type_d_needs_t(self):
        """Test that a type D partition with a part equal to k needs --t."""
        args = ['symbols', '--family', 'D', '--n', '4', '--m', '2', '--from', 'partition', '--value', '3,1']
        self.assertEqual(run_cli(args)[0], EXIT_FAILURE)
        code, data = run_json(args + ['--t', '1'])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(data['partition'], {'parts': [3, 1], 't': 1})

    def test_invalid_index_set(self):
        """Test that an index set outside the context is rejected."""
        self.assertEqual(run_cli(['symbols', '--family', 'B', '--n', '2', '--m', '1', '--from', 'indexset',
                                  '--value', '9'])[0], EXIT_FAILURE)


class TestVerifyCommand(unittest.TestCase):
    """Tests for `schubert-ed verify`."""

    def test_construction_suite(self):
        """Test a passing suite."""
        code, data = run_json(['verify', '--suite', 'prop34', '--n', '4', '--m', '2', '--no-cache'])
        self.assertEqual(code, EXIT_OK)
        self.assertTrue(data['passed'])
        self.assertEqual([suite['suite'] for suite in data['suites']], ['prop34'])

    def test_summary_tsv(self):
        """Test the tab separated summary of two suites."""
        code, out, _ = run_cli(['verify', '--suite', 'prop24', 'duality', '--no-cache', '--format', 'tsv'])
        self.assertEqual(code, EXIT_OK)
        lines = out.splitlines()
        self.assertEqual(lines[0], 'suite\tstatus\tcases\tnote')
        self.assertEqual([line.split('\t')[:2] for line in lines[1:]], [['prop24', 'pass'], ['duality', 'pass']])

    def test_failed_suite(self):
        """Test that a failing suite gives exit code 1."""
        failing = SuiteResult('prop24')
        failing.cases.append({'case': 'broken', 'passed': False})
        with patch('schubert_ed.cli.run_suite', return_value=failing):
            code, data = run_json(['verify', '--suite', 'prop24', '--no-cache'])
        self.assertEqual(code, EXIT_FAILURE)
        self.assertFalse(data['passed'])

    def test_unknown_suite(self):
        """Test that unknown suite names are usage errors."""
        self.assertEqual(run_cli(['verify', '--suite', 'table9'])[0], EXIT_FAILURE)

    def test_element_budget(self):
        """Test that --max-elements is passed to the suites."""
        with patch('schubert_ed.cli.run_suite', return_value=SuiteResult('prop24')) as run_suite:
            code, _, _ = run_cli(['verify', '--suite', 'prop24', '--no-cache', '--max-elements', '500'])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(run_suite.call_args[0][1].budget.max_elements, 500)


class TestMorphismCommand(unittest.TestCase):
    """Tests for `schubert-ed morphism`."""

    def test_constant_forced(self):
        """Test a source whose e.d. exceeds the target's."""
        code, data = run_json(['morphism', '--family', 'B', '--rank', '7', '--node', '3', '--source-ed', '15'])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(data['verdict'], 'constant-forced')
        self.assertEqual(data['target_ed'], 13)

    def test_source_variety(self):
        """Test computing the source e.d. from a variety."""
        code, data = run_json(['morphism', '--family', 'A', '--rank', '3', '--node', '1',
                               '--source-family', 'A', '--source-rank', '4', '--source-node', '2'])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual((data['verdict'], data['source_ed']), ('constant-forced', 4))

    def test_exceptional_target(self):
        """Test that exceptional targets are outside the comparison."""
        code, data = run_json(['morphism', '--family', 'E6', '--node', '1', '--source-ed', '30'])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(data['verdict'], 'theorem does not apply')

    def test_quotient_form(self):
        """Test the G/P -> Q/P_bar form."""
        code, data = run_json(['morphism', '--family', 'E7', '--node', '3', '--q', '1', '--p-bar', '1', '7'])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual((data['verdict'], data['source_ed']), ('constant-forced', 24))

    def test_missing_arguments(self):
        """Test the usage errors of the morphism command."""
        self.assertEqual(run_cli(['morphism', '--family', 'E7', '--node', '3', '--q', '1'])[0], EXIT_FAILURE)
        self.assertEqual(run_cli(['morphism', '--family', 'B', '--rank', '3', '--node', '1'])[0], EXIT_FAILURE)


class TestCacheCommand(unittest.TestCase):
    """Tests for `schubert-ed cache` and the cache options."""

    def setUp(self):
        self.temp_dir = tempfile.TemporaryDirectory()
        self.cache_dir = os.path.join(self.temp_dir.name, 'cache')

    def tearDown(self):
        self.temp_dir.cleanup()

    def test_list_and_clear(self):
        """Test that a brute-force scan fills the cache and clear empties it."""
        code, data = run_json(['cache', 'list', '--cache-dir', self.cache_dir])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(data['entries'], [])

        code, _, _ = run_cli(['ed', '--family', 'A', '--rank', '3', '--node', '2', '--method', 'brute',
                              '--cache-dir', self.cache_dir])
        self.assertEqual(code, EXIT_OK)
        code, data = run_json(['cache', 'list', '--cache-dir', self.cache_dir])
        self.assertEqual(len(data['entries']), 1)
        self.assertEqual((data['entries'][0]['family'], data['entries'][0]['rank'], data['entries'][0]['excluded']),
                         ('A', 3, [2]))

        code, data = run_json(['cache', 'clear', '--cache-dir', self.cache_dir])
        self.assertEqual((code, data['removed']), (EXIT_OK, 1))
        self.assertEqual(run_json(['cache', 'list', '--cache-dir', self.cache_dir])[1]['entries'], [])

    def test_no_cache_writes_nothing(self):
        """Test that --no-cache leaves the cache directory untouched."""
        run_cli(['ed', '--family', 'A', '--rank', '3', '--node', '2', '--method', 'brute', '--no-cache',
                 '--cache-dir', self.cache_dir])
        self.assertFalse(os.path.exists(self.cache_dir) and os.listdir(self.cache_dir))

    def test_environment_cache_dir(self):
        """Test that SCHUBERT_ED_CACHE selects the cache directory."""
        with patch.dict(os.environ, {'SCHUBERT_ED_CACHE': self.cache_dir}):
            run_cli(['ed', '--family', 'A', '--rank', '2', '--node', '1', '--method', 'brute'])
        self.assertEqual(len([name for name in os.listdir(self.cache_dir) if name.endswith('.json')]), 1)


class TestBuildConfig(unittest.TestCase):
    """Tests for resolving settings from arguments and environment."""

    def namespace(self, **kwargs):  # noqa: D102
        values = {'cache_dir': None, 'no_cache': False, 'threads': None, 'budget_pairs': None,
                  'budget_seconds': None, 'format': 'json', 'poset_limit': None, 'max_elements': None}
        values.update(kwargs)
        return argparse.Namespace(**values)

    @patch.dict(os.environ, {}, clear=True)
    def test_defaults(self):
        """Test the built-in defaults."""
        config = build_config(self.namespace())
        self.assertEqual((config.threads, config.budget_pairs, config.budget_seconds), (1, 0, 0))
        self.assertTrue(config.use_cache)

    @patch.dict(os.environ, {'SCHUBERT_ED_THREADS': '3', 'SCHUBERT_ED_BUDGET_PAIRS': '100'}, clear=True)
    def test_environment(self):
        """Test that environment variables fill unset options."""
        config = build_config(self.namespace())
        self.assertEqual((config.threads, config.budget_pairs), (3, 100))
        self.assertEqual(config.budget().pairs, 100)

    @patch.dict(os.environ, {'SCHUBERT_ED_THREADS': '3'}, clear=True)
    def test_command_line_wins(self):
        """Test that a command-line value overrides the environment."""
        self.assertEqual(build_config(self.namespace(threads=2)).threads, 2)

    @patch.dict(os.environ, {'SCHUBERT_ED_THREADS': 'many'}, clear=True)
    def test_invalid_environment(self):
        """Test that a non-numeric environment value is a usage error."""
        with self.assertRaises(UsageError):
            build_config(self.namespace())

    def test_invalid_values(self):
        """Test that zero threads and negative budgets are rejected."""
        with self.assertRaises(UsageError):
            build_config(self.namespace(threads=0))
        with self.assertRaises(UsageError):
            build_config(self.namespace(budget_pairs=-1))

    @patch.dict(os.environ, {'SCHUBERT_ED_MAX_ELEMENTS': '5000'}, clear=True)
    def test_max_elements(self):
        """Test that the element budget is read and handed to ScanBudget, 0 meaning unlimited."""
        self.assertEqual(build_config(self.namespace()).budget().max_elements, 5000)
        self.assertEqual(build_config(self.namespace(max_elements=20)).budget().max_elements, 20)
        self.assertIsNone(build_config(self.namespace(max_elements=0)).budget().max_elements)
        with self.assertRaises(UsageError):
            build_config(self.namespace(max_elements=-1))

    @patch.dict(os.environ, {'SCHUBERT_ED_THREADS': '0'})
    def test_invalid_threads_exit_code(self):
        """Test that main() reports invalid threads with exit code 1."""
        code, _, err = run_cli(['ed', '--family', 'A', '--rank', '2', '--node', '1', '--method', 'brute',
                                '--no-cache'])
        self.assertEqual(code, EXIT_FAILURE)
        self.assertIn('threads', err)


if __name__ == '__main__':
    unittest.main()
