#!/usr/bin/env python

import unittest
import numpy
from topokinetic.kernel import RankKernel, build_discrete_table, sample_rank, eval_kernel, \
    DomainError, NonSmoothKernel, DegenerateKernel
from topokinetic.core.utils import setup_logging


setup_logging(level=40)

class Test(unittest.TestCase):

    def setUp(self):
        self.kernels = [RankKernel('constant'),
                        RankKernel('powerlaw', {'alpha': 2.0}),
                        RankKernel('powerlaw', {'alpha': 1.0, 'mirror': True}),
                        RankKernel('uniformcutoff', {'theta': 0.1}),
                        RankKernel('smoothcutoff', {'theta': 0.5, 'eps': 0.8}),
                        RankKernel('smoothcutoff', {'theta': 0.2, 'eps': 0.1})]

    def test_normalization(self):
        for K in self.kernels:
            self.assertLess(K.normalization_error(), 1e-10, K)
            self.assertAlmostEqual(K.antiderivative(0.0), 0.0, places=14)
            self.assertAlmostEqual(K.antiderivative(1.0), 1.0, places=14)

    def test_uniform_cutoff(self):
        K = RankKernel('uniformcutoff', {'theta': 0.1})
        self.assertAlmostEqual(eval_kernel(K, 0.05, 0), 10.0)
        self.assertEqual(eval_kernel(K, 0.2, 0), 0.0)
        # The cutoff belongs to the support
        self.assertAlmostEqual(K(0.1), 10.0)
        self.assertFalse(K.smooth)
        with self.assertRaises(NonSmoothKernel):
            K.compute(0.05, 1)
        with self.assertRaises(NonSmoothKernel):
            K.derivative(0.5, 2)

    def test_domain(self):
        K = RankKernel('constant')
        with self.assertRaises(DomainError):
            K(1.5)
        with self.assertRaises(DomainError):
            K.compute(numpy.array([0.5, -0.1]))
        with self.assertRaises(DomainError):
            RankKernel('uniformcutoff', {'theta': 1.5})
        with self.assertRaises(DomainError):
            RankKernel('nokernel')
        with self.assertRaises(ValueError):
            K.compute(0.5, 3)

    def test_derivatives(self):
        # Derivatives against central differences
        r = numpy.linspace(0.05, 0.95, 19)
        h = 1e-5
        for K in self.kernels:
            if not K.smooth:
                continue
            d1 = (K(r + h) - K(r - h)) / (2 * h)
            d2 = (K.derivative(r + h) - K.derivative(r - h)) / (2 * h)
            scale = 1 + numpy.max(numpy.abs(K.derivative(r, 2)))
            self.assertLess(numpy.max(numpy.abs(d1 - K.derivative(r))), 1e-5 * scale, K)
            self.assertLess(numpy.max(numpy.abs(d2 - K.derivative(r, 2))), 1e-4 * scale, K)

    def test_smooth_cutoff_is_flat(self):
        K = RankKernel('smoothcutoff', {'theta': 0.5, 'eps': 0.2})
        self.assertEqual(K.derivative(0.2), 0.0)
        self.assertEqual(K(0.9), 0.0)
        self.assertAlmostEqual(K(0.1), K(0.3))

    def test_config(self):
        K = RankKernel.from_dict({'family': 'smoothcutoff', 'theta': 0.3, 'eps': 0.4})
        self.assertEqual(K.family, 'smooth_cutoff')
        self.assertEqual(RankKernel.from_dict(K.to_dict()), K)
        self.assertEqual(str(K), 'smooth_cutoff(eps=0.4;theta=0.3)')
        self.assertEqual(RankKernel.from_dict('powerlaw').params, {'alpha': 2.0})

    def test_table_constant(self):
        table = build_discrete_table(RankKernel('constant'), 5)
        self.assertEqual(table.weights[0], 0.0)
        numpy.testing.assert_allclose(table.weights[1:], 0.25)
        self.assertEqual(table.cdf[-1], 1.0)
        self.assertAlmostEqual(table.s_n, 1.0)
        self.assertEqual(list(table.ranks), [1, 2, 3, 4])

    def test_table_linear(self):
        # K(r) = 2r gives S^5 = 1.25 exactly
        K = RankKernel('powerlaw', {'alpha': 1.0, 'mirror': True})
        table = build_discrete_table(K, 5)
        self.assertAlmostEqual(table.s_n, 1.25, places=15)
        numpy.testing.assert_allclose(table.weights[1:], [0.1, 0.2, 0.3, 0.4])

    def test_table_cutoff(self):
        # Only the nearest neighbour for N=11 and theta=0.1
        table = build_discrete_table(RankKernel('uniformcutoff', {'theta': 0.1}), 11)
        self.assertEqual(table.weights[1], 1.0)
        self.assertEqual(numpy.sum(table.weights[2:]), 0.0)
        u = numpy.random.default_rng(1).random(1000)
        self.assertTrue(numpy.all(sample_rank(table, u) == 1))

    def test_table_degenerate(self):
        # Support below the first rank
        K = RankKernel('smoothcutoff', {'theta': 0.05, 'eps': 0.02})
        with self.assertRaises(DegenerateKernel):
            build_discrete_table(K, 5)
        with self.assertRaises(ValueError):
            build_discrete_table(RankKernel('constant'), 1)
        table = build_discrete_table(K, 1000)
        self.assertAlmostEqual(numpy.sum(table.weights), 1.0, places=12)

    def test_table_readonly(self):
        table = build_discrete_table(RankKernel('constant'), 4)
        with self.assertRaises(ValueError):
            table.weights[1] = 0.5

    def test_sample_rank(self):
        table = build_discrete_table(RankKernel('powerlaw', {'alpha': 1.0, 'mirror': True}), 5)
        self.assertEqual(sample_rank(table, 0.0), 1)
        self.assertEqual(sample_rank(table, 0.0999), 1)
        self.assertEqual(sample_rank(table, 0.1), 2)
        self.assertEqual(sample_rank(table, 0.999999), 4)
        self.assertIsInstance(sample_rank(table, 0.5), int)
        # Frequencies of the ranks
        u = numpy.random.default_rng(2).random(200000)
        counts = numpy.bincount(sample_rank(table, u), minlength=5) / float(len(u))
        numpy.testing.assert_allclose(counts[1:], table.weights[1:], atol=5e-3)
        self.assertEqual(counts[0], 0.0)

    def test_tabulate(self):
        r, k0, k1, k2 = RankKernel('smoothcutoff').tabulate(11)
        self.assertEqual(len(r), 11)
        out = RankKernel('uniformcutoff').tabulate(11)
        self.assertEqual(len(out), 2)


if __name__ == '__main__':
    unittest.main()
