#!/usr/bin/env python

import os
import unittest
import tempfile
import numpy
from topokinetic.kernel import RankKernel
from topokinetic.simulation import ConfigError
from topokinetic.kinetic import KineticState, kinetic_initial, EmptyDensity, StepTooLarge, \
    KineticConfig, gain_operator, transport, collide, step, solve, write_solution, \
    build_partial_mass_table, partial_mass, change_of_variable_check, cell_distance
from topokinetic.core.utils import setup_logging, rmd


setup_logging(level=40)

class Test(unittest.TestCase):

    def setUp(self):
        self.kernels = [RankKernel('constant'),
                        RankKernel('powerlaw', {'alpha': 2.0}),
                        RankKernel('uniformcutoff', {'theta': 0.3}),
                        RankKernel('smoothcutoff', {'theta': 0.5, 'eps': 0.8})]
        self.cosine = kinetic_initial({'type': 'cosine', 'amplitude': 0.5}, 1.0, 16, [-1.0, 1.0])

    def test_initial(self):
        self.assertAlmostEqual(self.cosine.mass, 1.0, places=14)
        state = kinetic_initial({'type': 'homogeneous', 'weights': [1, 3]}, 2.0, 8, [-1.0, 1.0])
        numpy.testing.assert_allclose(state.velocity_marginal(), [0.25, 0.75])
        self.assertAlmostEqual(state.inhomogeneity(), 0.0, places=14)
        state = kinetic_initial({'type': 'gaussian', 'width': 0.05}, 1.0, 32, [0.0, 0.5, 1.0])
        self.assertEqual(numpy.argmax(state.rho), 15)
        for db in [{'type': 'sine'},
                   {'type': 'cosine', 'amplitude': 2.0},
                   {'type': 'homogeneous', 'weights': [1.0]},
                   {'type': 'homogeneous', 'width': 0.1}]:
            with self.assertRaises(ValueError):
                kinetic_initial(db, 1.0, 8, [-1.0, 1.0])
        with self.assertRaises(EmptyDensity):
            KineticState(1.0, 4, [0.0], f=numpy.zeros((4, 1))).normalize()
        with self.assertRaises(ValueError):
            KineticState(1.0, 4, [0.0], f=-numpy.ones((4, 1)))

    def test_cell_distance(self):
        d = cell_distance(5)
        self.assertEqual(list(d[0]), [0, 1, 2, 2, 1])
        self.assertTrue(numpy.all(d == d.T))

    def test_shell_weights(self):
        for K in self.kernels:
            table = build_partial_mass_table(self.cosine, K)
            numpy.testing.assert_allclose(table.weights.sum(axis=1), 1.0, rtol=0, atol=1e-13)
            numpy.testing.assert_allclose(table.shell_mass.sum(axis=1), 1.0, rtol=0, atol=1e-13)
            self.assertTrue(numpy.all(table.weights >= 0))
            self.assertTrue(numpy.all(table.cumulative[:, -1] == 1.0))
        # Even number of cells: the opposite shell holds a single cell
        table = build_partial_mass_table(self.cosine, self.kernels[0])
        self.assertAlmostEqual(table.shell_mass[0, -1], self.cosine.rho[8] / 16, places=14)

    def test_partial_mass(self):
        state = kinetic_initial({'type': 'homogeneous'}, 1.0, 10, [0.0])
        self.assertAlmostEqual(partial_mass(state, 0, 0.0), 0.1)
        self.assertAlmostEqual(partial_mass(state, 3, 0.1), 0.3)
        self.assertAlmostEqual(partial_mass(state, 3, 0.45), 0.9)
        self.assertEqual(partial_mass(state, 3, 0.5), 1.0)
        with self.assertRaises(ValueError):
            partial_mass(state, 0, -0.1)

    def test_change_of_variable(self):
        rng = numpy.random.default_rng(1)
        f = rng.random((32, 2)) + 0.01
        state = KineticState(1.0, 32, [-1.0, 1.0], f=f).normalize()
        K = RankKernel('smoothcutoff', {'theta': 0.5, 'eps': 0.8})
        for r in [0.0, 0.1, 0.27, 0.5]:
            for m in [0, 7, 31]:
                lhs, rhs = change_of_variable_check(state, lambda p: 1.0, m, r,
                                                    primitive=lambda p: p)
                self.assertAlmostEqual(lhs, rhs, places=12)
                lhs, rhs = change_of_variable_check(state, K, m, r, kernel=K)
                self.assertAlmostEqual(lhs, rhs, places=10)
                lhs, rhs = change_of_variable_check(state, K, m, r, kernel=K,
                                                    primitive=K.antiderivative)
                self.assertAlmostEqual(lhs, rhs, places=12)

    def test_gain_constant_kernel(self):
        # With K = 1 the leader is chosen according to rho, independently of x
        gain = gain_operator(self.cosine, RankKernel('constant'))
        expected = numpy.outer(self.cosine.rho, self.cosine.velocity_marginal())
        numpy.testing.assert_allclose(gain, expected, rtol=1e-12, atol=1e-14)

    def test_collision_keeps_rho(self):
        for K in self.kernels:
            gain = gain_operator(self.cosine, K)
            numpy.testing.assert_allclose(gain.sum(axis=1), self.cosine.rho, rtol=1e-12)
            new = collide(self.cosine.copy(), K, 0.5)
            numpy.testing.assert_allclose(new.rho, self.cosine.rho, rtol=1e-12)

    def test_mass_conservation(self):
        for K in self.kernels:
            for splitting in ['lie', 'strang']:
                state = self.cosine
                for n in range(1, 51):
                    state = step(state, K, 0.05, splitting)
                    self.assertLess(abs(state.mass - 1.0), 1e-12 * n, (K, splitting))
                    self.assertTrue(numpy.all(state.f >= 0))
                self.assertAlmostEqual(state.t, 2.5)

    def test_homogeneous_is_stationary(self):
        state = kinetic_initial({'type': 'homogeneous', 'weights': [1, 2, 5]}, 1.0, 12,
                                [-1.0, 0.0, 1.0])
        for K in self.kernels:
            new = state
            for _ in range(20):
                new = step(new, K, 0.1)
            numpy.testing.assert_allclose(new.f, state.f, rtol=0, atol=1e-10)

    def test_free_transport(self):
        state = kinetic_initial({'type': 'cosine'}, 1.0, 10, [-1.0, 1.0])
        new = state
        for _ in range(10):
            new = step(new, None, 0.1, collisions=False)
        numpy.testing.assert_allclose(new.f, state.f, rtol=0, atol=1e-14)
        # Half a cell: linear interpolation between neighbours
        new = transport(state.copy(), 0.05)
        expected = 0.5 * (state.f[:, 1] + numpy.roll(state.f[:, 1], 1))
        numpy.testing.assert_allclose(new.f[:, 1], expected, rtol=1e-14)

    def test_step_too_large(self):
        with self.assertRaises(StepTooLarge):
            step(self.cosine, self.kernels[0], 1.5)
        with self.assertRaises(ConfigError):
            step(self.cosine, self.kernels[0], 0.0)
        with self.assertRaises(ConfigError):
            step(self.cosine, self.kernels[0], 0.1, splitting='yoshida')
        # dt = 1 replaces f with the gain
        new = step(self.cosine, self.kernels[0], 1.0, collisions=True)
        self.assertTrue(numpy.all(new.f >= 0))

    def test_relaxation(self):
        # Transport and collisions smooth out the spatial modulation
        K = RankKernel('smoothcutoff', {'theta': 0.5, 'eps': 0.8})
        solution = solve(self.cosine, K, 0.02, 4.0, interval=1.0)
        self.assertEqual(len(solution), 5)
        self.assertLess(solution.inhomogeneity[-1], solution.inhomogeneity[0])
        self.assertAlmostEqual(solution.state.t, 4.0)
        self.assertEqual(solution.index(2.0), 2)
        with self.assertRaises(ValueError):
            solution.index(2.5)

    def test_config(self):
        config = KineticConfig(Nx=8, kernel='smoothcutoff', t_end=0.5)
        self.assertEqual(config.rank_kernel.family, 'smooth_cutoff')
        self.assertEqual(KineticConfig.from_dict(config.to_dict()).to_dict(), config.to_dict())
        self.assertAlmostEqual(config.initial_state().mass, 1.0)
        with self.assertRaises(StepTooLarge):
            KineticConfig(dt=1.5)
        with self.assertRaises(ConfigError):
            KineticConfig(splitting='yoshida')
        with self.assertRaises(ConfigError):
            KineticConfig(t_end=-1.0)
        with self.assertRaises(ConfigError):
            KineticConfig(kernel={'family': 'uniformcutoff', 'theta': 2.0})
        with self.assertRaises(ConfigError):
            KineticConfig(initial={'type': 'sine'}).initial_state()

    def test_write_solution(self):
        tmpdir = tempfile.mkdtemp()
        state = kinetic_initial({'type': 'cosine'}, 1.0, 4, [-1.0, 1.0])
        solution = solve(state, RankKernel('constant'), 0.1, 0.5, times=[0.25], dump_f=True)
        self.assertEqual(list(solution.times), [0.0, 0.25, 0.5])
        paths = write_solution(tmpdir, solution)
        self.assertEqual([os.path.basename(p) for p in paths],
                         ['rho.csv', 'g.csv', 'mass.csv', 'f.csv'])
        headers = {'rho.csv': 't,x,rho', 'g.csv': 't,v,g', 'mass.csv': 't,mass,inhomogeneity',
                   'f.csv': 't,x,v,f'}
        rows = {'rho.csv': 12, 'g.csv': 6, 'mass.csv': 3, 'f.csv': 24}
        for path in paths:
            with open(path) as fh:
                lines = fh.readlines()
            name = os.path.basename(path)
            self.assertEqual(lines[0].strip(), headers[name])
            self.assertEqual(len(lines), rows[name] + 1)
        data = numpy.loadtxt(os.path.join(tmpdir, 'f.csv'), delimiter=',', skiprows=1)
        numpy.testing.assert_array_equal(data[:8, 3], state.f.ravel())
        numpy.testing.assert_array_equal(data[:8, 1], [0.125, 0.125, 0.375, 0.375,
                                                       0.625, 0.625, 0.875, 0.875])
        rmd(tmpdir)

    def test_gain_two_cells(self):
        # Masses 0.6 and 0.4 on two cells of width 1/2
        f = numpy.array([[0.8, 0.4], [0.2, 0.6]])
        state = KineticState(1.0, 2, [-1.0, 1.0], f=f)
        numpy.testing.assert_allclose(gain_operator(state, RankKernel('constant')),
                                      [[0.6, 0.6], [0.4, 0.4]], rtol=1e-14)
        # K(r) = 2r: shell weights p^2 increments, (0.36, 0.64) and (0.16, 0.84)
        K = RankKernel('powerlaw', {'alpha': 1.0, 'mirror': True})
        table = build_partial_mass_table(state, K)
        numpy.testing.assert_allclose(table.weights, [[0.36, 0.64], [0.16, 0.84]], rtol=1e-14)
        numpy.testing.assert_allclose(table.kernel_matrix(), [[0.6, 1.6], [1.4, 0.4]],
                                      rtol=1e-14)
        numpy.testing.assert_allclose(gain_operator(state, K), [[0.48, 0.72], [0.48, 0.32]],
                                      rtol=1e-14)

    def test_single_velocity_class(self):
        state = kinetic_initial({'type': 'cosine', 'amplitude': 0.5}, 1.0, 16, [0.7])
        K = RankKernel('smoothcutoff', {'theta': 0.5, 'eps': 0.8})
        self.assertAlmostEqual(numpy.sum(gain_operator(state, K)) * state.dx, 1.0, places=14)
        solution = solve(state, K, 0.05, 1.0, interval=0.25)
        self.assertEqual(solution.g.shape, (5, 1))
        numpy.testing.assert_allclose(solution.g, 1.0, rtol=0, atol=1e-12)

    def test_homogeneous_velocity_marginal_frozen(self):
        state = kinetic_initial({'type': 'homogeneous', 'weights': [1, 3]}, 1.0, 16, [-1.0, 1.0])
        for K in self.kernels:
            solution = solve(state, K, 0.05, 2.0, interval=0.5)
            numpy.testing.assert_allclose(solution.g, [[0.25, 0.75]] * 5, rtol=0, atol=1e-12)

    def test_time_step_ladder(self):
        # With v dt / dx integer transport is exact and the error is first order in dt
        state = kinetic_initial({'type': 'cosine', 'amplitude': 0.5}, 1.0, 64, [-1.0, 1.0])
        K = RankKernel('smoothcutoff', {'theta': 0.5, 'eps': 0.8})
        f = [solve(state, K, n / 64., 1.0).state.f for n in [8, 4, 2, 1]]
        diff = [numpy.sum(numpy.abs(a - b)) * state.dx for a, b in zip(f[:-1], f[1:])]
        for coarse, fine in zip(diff[:-1], diff[1:]):
            self.assertGreater(coarse / fine, 1.6)
            self.assertLess(coarse / fine, 2.6)


if __name__ == '__main__':
    unittest.main()
