"""Tests for k-strict partitions, index sets and their dictionary with W^P."""
import unittest

from schubert_ed.bruhat import leq
from schubert_ed.coset import enumerate_wp
from schubert_ed.exception import (ContextMismatchError, InvalidIndexSetError, InvalidPartitionError,
                                   InvalidVarietyError, NotMinimalRepresentativeError)
from schubert_ed.rootsys import LieFamily, build_root_system
from schubert_ed.schubert_symbols import (GrassContext, IndexSet, KStrictPartition, dual_index_set,
                                          enumerate_kstrict, f_big_count, g_value, index_set_of, is_big_pair,
                                          parse_index_set, parse_partition, partition_of, phi_index_set,
                                          psi_index_set, signed_permutation, symbol_leq, symbol_of_weyl,
                                          threshold_inequality, threshold_inequality_B, threshold_pairs,
                                          validate_index_set, weyl_of_symbol, witness_partitions)
from schubert_ed.weyl import from_word, identity

CONTEXTS = [GrassContext.for_b(2, 1), GrassContext.for_b(3, 2), GrassContext.for_b(3, 3),
            GrassContext.for_d(4, 2), GrassContext.for_d(4, 3), GrassContext.for_d(5, 2)]


class TestGrassContext(unittest.TestCase):
    """Tests for GrassContext."""

    def test_derived_quantities(self):
        """Test k, N, rank and dimension."""
        b = GrassContext.for_b(3, 2)
        self.assertEqual((b.k, b.N, b.rank, b.dimension, b.vanishing_weight), (1, 7, 3, 7, 6))
        self.assertEqual(str(b), 'B3(2)')
        d = GrassContext.for_d(4, 2)
        self.assertEqual((d.k, d.N, d.rank, d.dimension, d.vanishing_weight), (3, 10, 5, 13, 9))
        self.assertEqual(str(d), 'D5(2)')

    def test_dimension_matches_wp(self):
        """Test that the dimension is the length of the longest element of W^P."""
        for ctx in CONTEXTS:
            with self.subTest(ctx=str(ctx)):
                self.assertEqual(enumerate_wp(ctx.root_system(), ctx.parabolic()).dimension, ctx.dimension)

    def test_invalid_contexts(self):
        """Test the range checks on n and m."""
        for family, n, m in [(LieFamily.B, 3, 4), (LieFamily.B, 1, 1), (LieFamily.D, 4, 1),
                             (LieFamily.D, 4, 4), (LieFamily.A, 3, 1)]:
            with self.subTest(family=family, n=n, m=m):
                with self.assertRaises(InvalidVarietyError):
                    GrassContext(family, n, m)


class TestPartitions(unittest.TestCase):
    """Tests for k-strict partitions."""

    def test_enumeration_matches_wp(self):
        """Test that there are as many partitions as minimal representatives."""
        for ctx in CONTEXTS:
            with self.subTest(ctx=str(ctx)):
                enum = enumerate_wp(ctx.root_system(), ctx.parabolic())
                self.assertEqual(len(enumerate_kstrict(ctx)), enum.total_count)

    def test_b3_m2_partitions(self):
        """Test the partitions of B3(2) in weight order."""
        parts = [lam.parts for lam in enumerate_kstrict(GrassContext.for_b(3, 2))]
        self.assertEqual(parts, [(0, 0), (1, 0), (1, 1), (2, 0), (2, 1), (3, 0), (3, 1), (4, 0),
                                 (3, 2), (4, 1), (4, 2), (4, 3)])

    def test_types_come_in_pairs(self):
        """Test that partitions with a part equal to k appear once for each type."""
        partitions = enumerate_kstrict(GrassContext.for_d(4, 2))
        ones = [lam.parts for lam in partitions if lam.t == 1]
        twos = [lam.parts for lam in partitions if lam.t == 2]
        self.assertEqual(ones, twos)
        self.assertIn((3, 3), ones)

    def test_invalid_partitions(self):
        """Test the validation of partitions."""
        ctx = GrassContext.for_b(3, 2)
        for text in ['5', '2,2', '1,2', '1,1,1', '-1', 'a,b']:
            with self.subTest(text=text):
                with self.assertRaises(InvalidPartitionError):
                    parse_partition(text, ctx)
        d = GrassContext.for_d(4, 2)
        with self.assertRaises(InvalidPartitionError):
            parse_partition('3,1', d)
        with self.assertRaises(InvalidPartitionError):
            parse_partition('2,1', d, t=1)

    def test_parse_forms(self):
        """Test the accepted textual forms of a partition."""
        ctx = GrassContext.for_b(3, 2)
        self.assertEqual(parse_partition('3,1', ctx).parts, (3, 1))
        self.assertEqual(parse_partition('(1)', ctx).parts, (1, 0))
        self.assertEqual(parse_partition('[4]', ctx).parts, (4, 0))
        self.assertEqual(parse_partition('', ctx).parts, (0, 0))
        d = GrassContext.for_d(4, 2)
        self.assertEqual(parse_partition('{"parts": [3, 1], "t": 2}', d), KStrictPartition((3, 1), 2))
        self.assertEqual(parse_partition('3,1', d, t=1).t, 1)

    def test_big_pairs(self):
        """Test big subscript pairs and the counting function f."""
        ctx = GrassContext.for_b(3, 2)
        lam = KStrictPartition((4, 2))
        self.assertTrue(is_big_pair(lam, 0, 1, ctx))
        self.assertTrue(is_big_pair(lam, 1, 2, ctx))
        self.assertFalse(is_big_pair(KStrictPartition((1, 1)), 1, 2, ctx))
        self.assertEqual(f_big_count(lam, 1, ctx), 0)
        self.assertEqual(f_big_count(lam, 2, ctx), 1)
        with self.assertRaises(InvalidPartitionError):
            is_big_pair(lam, 2, 1, ctx)
        with self.assertRaises(InvalidPartitionError):
            f_big_count(lam, 3, ctx)

    def test_big_pairs_are_a_prefix(self):
        """Test that the big pairs of each column are (0, j), ..., (f, j) for every partition."""
        for ctx in CONTEXTS + [GrassContext.for_b(4, 2), GrassContext.for_d(5, 3)]:
            for lam in enumerate_kstrict(ctx):
                for j in range(1, ctx.m + 1):
                    with self.subTest(ctx=str(ctx), lam=str(lam), j=j):
                        big = [is_big_pair(lam, i, j, ctx) for i in range(j)]
                        for i in range(1, j):
                            if big[i]:
                                self.assertTrue(big[i - 1])
                        f = f_big_count(lam, j, ctx)
                        self.assertEqual(big, [True] * (f + 1) + [False] * (j - 1 - f))
                        self.assertEqual(big, [i <= f for i in range(j)])

    def test_g_value(self):
        """Test the type D correction term."""
        ctx = GrassContext.for_d(4, 2)
        self.assertEqual(g_value(KStrictPartition((3, 3), 1), 1, ctx), 1)
        self.assertEqual(g_value(KStrictPartition((3, 3), 2), 1, ctx), 2)
        self.assertEqual(g_value(KStrictPartition((3, 3), 1), 2, ctx), 2)
        self.assertEqual(g_value(KStrictPartition((5, 0)), 1, ctx), 1)
        self.assertEqual(g_value(KStrictPartition((5, 0)), 2, ctx), 2)


class TestIndexSets(unittest.TestCase):
    """Tests for the maps from partitions to index sets."""

    def test_odd_quadric(self):
        """Test the index sets of the quadric B2(1)."""
        ctx = GrassContext.for_b(2, 1)
        self.assertEqual([phi_index_set(KStrictPartition((x,)), ctx).entries for x in range(4)],
                         [(5,), (4,), (2,), (1,)])

    def test_known_values(self):
        """Test a few hand computed index sets."""
        b = GrassContext.for_b(3, 2)
        self.assertEqual(phi_index_set(KStrictPartition((3, 1)), b), IndexSet((2, 5)))
        self.assertEqual(phi_index_set(KStrictPartition((1, 1)), b), IndexSet((5, 6)))
        self.assertEqual(phi_index_set(KStrictPartition((4, 0)), b), IndexSet((1, 6)))
        d = GrassContext.for_d(4, 2)
        self.assertEqual(psi_index_set(KStrictPartition((0, 0)), d), IndexSet((9, 10)))
        self.assertEqual(psi_index_set(KStrictPartition((1, 0)), d), IndexSet((8, 10)))
        self.assertEqual(psi_index_set(KStrictPartition((3, 3), 1), d), IndexSet((5, 7)))
        self.assertEqual(psi_index_set(KStrictPartition((3, 3), 2), d), IndexSet((6, 7)))

    def test_maps_are_bijections(self):
        """Test that distinct partitions get distinct valid index sets and partition_of inverts them."""
        for ctx in CONTEXTS:
            partitions = enumerate_kstrict(ctx)
            images = [index_set_of(lam, ctx) for lam in partitions]
            with self.subTest(ctx=str(ctx)):
                self.assertEqual(len(set(images)), len(images))
            for lam, p in zip(partitions, images):
                validate_index_set(p, ctx)
                self.assertEqual(partition_of(p, ctx), lam)

    def test_type_d_properties(self):
        """Test that parts at most k land above n and parts equal to k below a larger part land at n+1 or n+2."""
        for ctx in [GrassContext.for_d(4, 2), GrassContext.for_d(5, 3)]:
            n, k = ctx.n, ctx.k
            for lam in enumerate_kstrict(ctx):
                p = psi_index_set(lam, ctx)
                for j in range(1, ctx.m + 1):
                    with self.subTest(ctx=str(ctx), lam=str(lam), j=j):
                        self.assertEqual(lam.part(j, ctx) <= k, p[j - 1] > n)
                        boundary = lam.part(j, ctx) == k < lam.part(j - 1, ctx)
                        self.assertEqual(boundary, p[j - 1] in (n + 1, n + 2))

    def test_wrong_family(self):
        """Test that Phi and Psi refuse the other family."""
        with self.assertRaises(ContextMismatchError):
            phi_index_set(KStrictPartition((0, 0)), GrassContext.for_d(4, 2))
        with self.assertRaises(ContextMismatchError):
            psi_index_set(KStrictPartition((0, 0)), GrassContext.for_b(3, 2))

    def test_parse_index_set(self):
        """Test parsing and validation of index sets."""
        ctx = GrassContext.for_b(3, 2)
        self.assertEqual(parse_index_set('{2,5}', ctx), IndexSet((2, 5)))
        self.assertEqual(parse_index_set('[2, 5]', ctx), IndexSet((2, 5)))
        for text in ['{4,5}', '{2,6}', '{5,2}', '{0,5}', '{2,8}', '{2}', 'x']:
            with self.subTest(text=text):
                with self.assertRaises(InvalidIndexSetError):
                    parse_index_set(text, ctx)

    def test_dual(self):
        """Test duality of index sets."""
        b2 = GrassContext.for_b(2, 1)
        self.assertEqual(dual_index_set(IndexSet((4,)), b2), IndexSet((2,)))
        b3 = GrassContext.for_b(3, 2)
        self.assertEqual(dual_index_set(IndexSet((2, 5)), b3), IndexSet((3, 6)))
        d = GrassContext.for_d(4, 2)
        self.assertEqual(dual_index_set(IndexSet((9, 10)), d), IndexSet((3, 4)))
        self.assertEqual(dual_index_set(IndexSet((5, 10)), d), IndexSet((3, 5)))

    def test_dual_is_complementary(self):
        """Test that duality is an involution that complements the weight."""
        for ctx in CONTEXTS:
            for lam in enumerate_kstrict(ctx):
                p = index_set_of(lam, ctx)
                q = dual_index_set(p, ctx)
                with self.subTest(ctx=str(ctx), lam=str(lam)):
                    self.assertEqual(dual_index_set(q, ctx), p)
                    self.assertEqual(lam.weight + partition_of(q, ctx).weight, ctx.dimension)

    def test_symbol_leq(self):
        """Test containment of Schubert varieties on index sets."""
        b = GrassContext.for_b(3, 2)
        self.assertTrue(symbol_leq(IndexSet((1, 3)), IndexSet((1, 6)), b))
        self.assertFalse(symbol_leq(IndexSet((2, 3)), IndexSet((1, 6)), b))
        d = GrassContext.for_d(4, 2)
        self.assertFalse(symbol_leq(IndexSet((5, 10)), IndexSet((6, 10)), d))
        self.assertFalse(symbol_leq(IndexSet((6, 10)), IndexSet((5, 10)), d))
        self.assertTrue(symbol_leq(IndexSet((5, 9)), IndexSet((7, 10)), d))
        with self.assertRaises(ContextMismatchError):
            symbol_leq(IndexSet((1,)), IndexSet((1, 2)), b)


class TestThresholdInequalities(unittest.TestCase):
    """Tests for the inequalities that force nonvanishing products."""

    def test_hold_below_threshold(self):
        """Test that every pair of small total weight satisfies the inequality."""
        cases = [(GrassContext.for_b(3, 2), 6), (GrassContext.for_b(4, 2), 8), (GrassContext.for_b(4, 3), 8),
                 (GrassContext.for_d(4, 2), 9), (GrassContext.for_d(5, 2), 11)]
        for ctx, below in cases:
            for lam, mu in threshold_pairs(ctx, below):
                with self.subTest(ctx=str(ctx), lam=str(lam), mu=str(mu)):
                    self.assertTrue(threshold_inequality(lam, mu, ctx))

    def test_zero_partitions(self):
        """Test the inequality for two empty partitions."""
        ctx = GrassContext.for_b(3, 2)
        zero = KStrictPartition((0, 0))
        self.assertTrue(threshold_inequality_B(zero, zero, ctx))
        with self.assertRaises(ContextMismatchError):
            threshold_inequality_B(zero, zero, GrassContext.for_d(4, 2))

    def test_witness_pair(self):
        """Test that the canonical pair fails the inequality and gives incomparable index sets."""
        for ctx in CONTEXTS:
            if ctx.k == 0:
                continue
            lam, mu = witness_partitions(ctx)
            with self.subTest(ctx=str(ctx)):
                self.assertEqual(lam.weight + mu.weight, ctx.vanishing_weight)
                self.assertFalse(threshold_inequality(lam, mu, ctx))
                self.assertFalse(symbol_leq(dual_index_set(index_set_of(lam, ctx), ctx), index_set_of(mu, ctx), ctx))

    def test_no_witness_for_maximal_isotropic(self):
        """Test that B_n(n) has no (1^m) witness."""
        with self.assertRaises(InvalidVarietyError):
            witness_partitions(GrassContext.for_b(3, 3))


class TestWeylDictionary(unittest.TestCase):
    """Tests for the dictionary between index sets and minimal representatives."""

    def test_signed_permutation(self):
        """Test the signed permutations of a few simple reflections."""
        b2 = build_root_system(LieFamily.B, 2)
        self.assertEqual(signed_permutation(identity(b2)), (1, 2))
        self.assertEqual(signed_permutation(from_word(b2, [1])), (2, 1))
        self.assertEqual(signed_permutation(from_word(b2, [2])), (1, -2))
        d4 = build_root_system(LieFamily.D, 4)
        self.assertEqual(signed_permutation(from_word(d4, [4])), (1, 2, -4, -3))
        with self.assertRaises(ContextMismatchError):
            signed_permutation(identity(build_root_system(LieFamily.A, 2)))

    def test_identity_is_the_zero_partition(self):
        """Test that the identity gets the index set of the empty partition."""
        for ctx in CONTEXTS:
            with self.subTest(ctx=str(ctx)):
                zero = KStrictPartition((0,) * ctx.m)
                self.assertEqual(symbol_of_weyl(identity(ctx.root_system()), ctx), index_set_of(zero, ctx))

    def test_dictionary_preserves_weight_and_order(self):
        """Test that lengths become weights and Bruhat order becomes reversed containment."""
        for ctx in CONTEXTS:
            elements = enumerate_wp(ctx.root_system(), ctx.parabolic()).elements()
            symbols = {u.key: symbol_of_weyl(u, ctx) for u in elements}
            self.assertEqual(len(set(symbols.values())), len(elements))
            for u in elements:
                self.assertEqual(partition_of(symbols[u.key], ctx).weight, u.length)
                self.assertEqual(weyl_of_symbol(symbols[u.key], ctx), u)
                for v in elements:
                    with self.subTest(ctx=str(ctx), u=u, v=v):
                        self.assertEqual(symbol_leq(symbols[u.key], symbols[v.key], ctx), leq(v, u))

    def test_wrong_context(self):
        """Test that elements of another group or outside W^P are refused."""
        ctx = GrassContext.for_b(3, 2)
        with self.assertRaises(ContextMismatchError):
            symbol_of_weyl(identity(build_root_system(LieFamily.B, 4)), ctx)
        with self.assertRaises(NotMinimalRepresentativeError):
            symbol_of_weyl(from_word(ctx.root_system(), [1]), ctx)
        with self.assertRaises(InvalidIndexSetError):
            weyl_of_symbol(IndexSet((4, 5)), ctx)


if __name__ == '__main__':
    unittest.main()
