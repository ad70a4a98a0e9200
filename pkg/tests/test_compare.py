#!/usr/bin/env python

import os
import unittest
import tempfile
import numpy
from topokinetic.kinetic import kinetic_initial
from topokinetic.system import from_kinetic_state
from topokinetic.simulation import ConfigError, MarginalGrid, ensemble_marginal
from topokinetic.simulation.marginal import EmpiricalMarginal
from topokinetic.compare import GridMismatch, check_grid, marginal_distance, distance_stderr, \
    noise_level, ChaosEstimate, chaos_metric, joint_distance, CompareConfig, \
    ConvergenceReport, convergence_study
from topokinetic.core.utils import setup_logging, rmd


setup_logging(level=40)

def _sampled_marginal(state, N, runs, rng):
    """Marginal of particles sampled independently from `state` at t=0."""
    grid = MarginalGrid.from_dict({'Nx': state.Nx, 'L': state.L,
                                   'velocities': state.velocities})
    per_run, pairs = [], []
    for _ in range(runs):
        x, v = from_kinetic_state(state, N, rng)
        per_run.append([grid.histogram(x, v)])
        pairs.append([numpy.array(grid.bin(x[:2], v[:2])).T])
    return EmpiricalMarginal([0.0], grid, numpy.array(per_run), numpy.array(pairs), N)


class Test(unittest.TestCase):

    def setUp(self):
        self.state = kinetic_initial({'type': 'cosine', 'amplitude': 0.5}, 1.0, 16, [-1.0, 1.0])

    def test_check_grid(self):
        grid = MarginalGrid.from_dict({'Nx': 16, 'L': 1.0, 'velocities': [-1.0, 1.0]})
        check_grid(grid, self.state)
        with self.assertRaises(GridMismatch):
            check_grid(MarginalGrid.from_dict({'Nx': 8, 'L': 1.0, 'velocities': [-1.0, 1.0]}),
                       self.state)
        with self.assertRaises(GridMismatch):
            check_grid(MarginalGrid.from_dict({'Nx': 16, 'L': 1.0, 'velocities': [-1.0, 2.0]}),
                       self.state)
        with self.assertRaises(GridMismatch):
            check_grid(MarginalGrid.from_dict({'Nx': 16, 'L': 1.0, 'v': [-2, 2, 2]}),
                       self.state)

    def test_sampled_marginal_distance(self):
        # Sampling from f itself leaves only Monte Carlo noise
        fhat = _sampled_marginal(self.state, 200, 100, numpy.random.default_rng(1))
        d_rho, d_vel = marginal_distance(fhat, self.state, 0.0)
        noise_rho, noise_vel = noise_level(fhat, 0.0)
        self.assertGreater(noise_rho, 0.0)
        self.assertLess(d_rho, 3 * noise_rho)
        self.assertLess(d_vel, 3 * noise_vel)
        se_rho, se_vel = distance_stderr(fhat, self.state, 0.0)
        self.assertGreater(se_rho, 0.0)
        self.assertGreater(se_vel, 0.0)
        self.assertLess(se_rho, d_rho + noise_rho)

    def test_distance_decreases_with_N(self):
        rng = numpy.random.default_rng(2)
        small = marginal_distance(_sampled_marginal(self.state, 20, 50, rng), self.state, 0.0)
        large = marginal_distance(_sampled_marginal(self.state, 2000, 50, rng), self.state, 0.0)
        self.assertLess(large[0], small[0])

    def test_joint_distance(self):
        a = numpy.array([0, 1, 0, 1])
        self.assertAlmostEqual(joint_distance(a, a, 2), 1.0)
        self.assertAlmostEqual(joint_distance(a, numpy.array([0, 0, 1, 1]), 2), 0.0)
        self.assertTrue(numpy.isnan(joint_distance(numpy.array([-1]), numpy.array([0]), 2)))

    def test_chaos_initial(self):
        # Particles sampled independently are chaotic
        fhat = _sampled_marginal(self.state, 10, 400, numpy.random.default_rng(3))
        chaos = chaos_metric(fhat, 0.0, rng=numpy.random.default_rng(4))
        self.assertGreater(chaos.floor, 0.0)
        self.assertTrue(chaos.compatible(4.0), chaos)

    def test_chaos_two_particles(self):
        # Two particles copy each other: velocities become fully correlated
        config = {'N': 2, 't_end': 8.0, 'metric': {'type': 'periodic', 'L': 1.0},
                  'initial': {'type': 'kinetic'}, 'snapshot_interval': 0.0}
        grid = {'Nx': 16, 'L': 1.0, 'velocities': [-1.0, 1.0]}
        fhat = ensemble_marginal(config, 200, grid, seed=5, state=self.state)
        chaos = chaos_metric(fhat, 8.0, xbins=1, rng=numpy.random.default_rng(6))
        self.assertGreater(chaos.metric, 0.8)
        self.assertFalse(chaos.compatible(3.0))
        self.assertGreater(chaos.excess, 0.5)

    def test_chaos_single_run(self):
        fhat = _sampled_marginal(self.state, 10, 1, numpy.random.default_rng(7))
        chaos = chaos_metric(fhat, 0.0)
        self.assertTrue(numpy.isnan(chaos.floor))

    def test_config_errors(self):
        for db in [{'N': [100, 200]},
                   {'N': [100, 100, 200]},
                   {'runs': 1},
                   {'times': [-1.0]},
                   {'dt': 1.5}]:
            with self.assertRaises(ConfigError):
                CompareConfig(**db)
        config = CompareConfig(N=[400, 100, 200], kernel='smoothcutoff')
        self.assertEqual(config.N, [100, 200, 400])
        self.assertEqual(config.particle_config(100, 1).metric, {'type': 'periodic', 'L': 1.0})
        db = config.to_dict()
        self.assertEqual(CompareConfig.from_dict(db).to_dict(), db)

    def test_report(self):
        report = ConvergenceReport(10, 1)
        chaos = ChaosEstimate(1.0, 0.1, 0.1, 0.01)
        report.append(100, 1.0, 0.30, 0.01, 0.20, 0.01, chaos)
        report.append(200, 1.0, 0.20, 0.01, 0.21, 0.01, chaos)
        report.append(400, 1.0, 0.25, 0.01, 0.10, 0.01, chaos)
        failures = report.failures()
        self.assertEqual(len(failures), 2)
        self.assertTrue(failures[0].startswith('d_rho does not decrease from N=200 to N=400'))
        self.assertTrue(failures[1].startswith('d_vel does not decrease from N=100 to N=200'))
        # Increases fail however wide the error bars
        self.assertFalse(report.passed(sigmas=4.0))
        self.assertEqual(list(report.column('N', 1.0)), [100, 200, 400])

        tmpdir = tempfile.mkdtemp()
        path = os.path.join(tmpdir, 'convergence.csv')
        report.write(path)
        with open(path) as fh:
            lines = fh.readlines()
        self.assertEqual(lines[0].strip(), 'N,t,d_rho,d_rho_stderr,d_vel,d_vel_stderr,chaos_metric')
        self.assertEqual(len(lines), 4)
        self.assertTrue(lines[1].startswith('100,1,0.29999999999999999'))
        rmd(tmpdir)

    def test_report_flat_ladder(self):
        report = ConvergenceReport(10, 1)
        chaos = ChaosEstimate(1.0, 0.1, 0.1, 0.01)
        for N in [250, 500, 1000]:
            report.append(N, 1.0, 0.2, 0.01, 0.1, 0.01, chaos)
        failures = report.failures()
        self.assertEqual(len(failures), 4)
        self.assertTrue(all('does not decrease' in f for f in failures))
        self.assertFalse(report.passed())

    def test_report_inconclusive(self):
        report = ConvergenceReport(10, 1)
        chaos = ChaosEstimate(1.0, 0.1, 0.1, 0.01)
        report.append(250, 1.0, 0.30, 0.02, 0.30, 0.01, chaos)
        report.append(500, 1.0, 0.29, 0.02, 0.20, 0.01, chaos)
        report.append(1000, 1.0, 0.10, 0.02, 0.10, 0.01, chaos)
        failures = report.failures()
        self.assertEqual(len(failures), 1)
        self.assertTrue(failures[0].startswith('d_rho decrease from N=250 to N=500'))
        self.assertIn('inconclusive', failures[0])

    def test_report_chaos(self):
        # Distances decrease but pair correlations grow with N
        report = ConvergenceReport(10, 1)
        for N, d, metric in [(250, 0.3, 0.1), (500, 0.2, 0.2), (1000, 0.1, 0.3)]:
            report.append(N, 1.0, d, 0.01, d, 0.01, ChaosEstimate(1.0, metric, 0.05, 0.01))
        failures = report.failures()
        self.assertEqual(len(failures), 2)
        self.assertTrue(all(f.startswith('chaos_metric does not decrease') for f in failures))
        self.assertFalse(report.passed())
        # A decreasing chaos metric that reaches its floor passes
        report = ConvergenceReport(10, 1)
        for N, d, metric in [(250, 0.3, 0.3), (500, 0.2, 0.15), (1000, 0.1, 0.06)]:
            report.append(N, 1.0, d, 0.01, d, 0.01, ChaosEstimate(1.0, metric, 0.05, 0.01))
        self.assertEqual(report.failures(), [])

    def test_stratified_initial_time(self):
        # Stratified samples of a homogeneous density hit every bin exactly,
        # and a single coarse bin has no pair correlations
        config = {'Nx': 4, 'initial': {'type': 'homogeneous'}, 'N': [8, 16, 32],
                  'runs': 3, 'times': [0.0], 'stratified': True, 'seed': 1,
                  'chaos': {'xbins': 1, 'vbins': 1, 'shuffles': 5}}
        report = convergence_study(config)
        for name in ['d_rho', 'd_vel', 'd_rho_stderr', 'd_vel_stderr']:
            numpy.testing.assert_allclose(report.column(name, 0.0), 0.0, atol=1e-12)
        self.assertTrue(report.passed())

    def test_convergence_study(self):
        config = {'Nx': 4, 'N': [10, 20, 40], 'runs': 8, 'times': [0.1, 0.2],
                  'kernel': {'family': 'smoothcutoff', 'theta': 0.5, 'eps': 0.8}}
        a = convergence_study(config, seed=3)
        self.assertEqual(len(a.rows), 6)
        self.assertEqual(a.N, [10, 20, 40])
        self.assertEqual(a.times, [0.1, 0.2])
        self.assertEqual(a.seed, 3)
        b = convergence_study(CompareConfig(**config), seed=3)
        self.assertEqual(a.rows, b.rows)
        with self.assertRaises(GridMismatch):
            convergence_study(dict(config, grid={'Nx': 8, 'L': 1.0, 'velocities': [-1.0, 1.0]}),
                              seed=3)

    def test_distances_decrease_along_dynamics(self):
        # Shifts of one cell per step make the kinetic transport exact
        config = {'Nx': 16, 'N': [10, 40, 160], 'runs': 40, 'times': [0.5], 'dt': 1 / 16.,
                  'kernel': {'family': 'smoothcutoff', 'theta': 0.5, 'eps': 0.8},
                  'initial': {'type': 'cosine', 'amplitude': 0.5}}
        report = convergence_study(config, seed=21)
        d_rho = report.column('d_rho', 0.5)
        self.assertGreater(d_rho[0], d_rho[1])
        self.assertGreater(d_rho[1], d_rho[2])
        self.assertTrue(numpy.all(report.column('d_rho_stderr', 0.5) > 0))
        self.assertTrue(numpy.all(report.column('d_vel', 0.5) >= 0))


if __name__ == '__main__':
    unittest.main()
