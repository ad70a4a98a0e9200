# This file is part of topokinetic

"""
Convergence of the particle marginal to the kinetic solution.

A comparison is described by a config dict, typically read from YAML:

    L: 1.0
    Nx: 16
    velocities: [-1.0, 1.0]
    dt: 0.01
    kernel: {family: smoothcutoff, theta: 0.5, eps: 0.8}
    initial: {type: cosine, amplitude: 0.5}
    N: [250, 500, 1000, 2000]
    runs: 200
    times: [1.0]
    seed: 1

Particles live on the periodic segment of the kinetic solver, start
from samples of its initial density and carry its velocity classes,
so that both marginals are binned on the same grid.
"""

import copy
import logging

import numpy

from topokinetic.kinetic import KineticConfig, solve
from topokinetic.simulation import SimConfig, ConfigError, ensemble_marginal, \
    MarginalGrid, master_seed
from topokinetic.simulation.config import check_keys
from topokinetic.core.utils import write_table
from .distance import marginal_distance, distance_stderr, check_grid
from .chaos import chaos_metric

__all__ = ['CompareConfig', 'ConvergenceReport', 'convergence_study']

_log = logging.getLogger(__name__)


class CompareConfig(object):

    """Parameters of a convergence study."""

    _defaults = {'L': 1.0,
                 'Nx': 16,
                 'velocities': [-1.0, 1.0],
                 'dt': 0.01,
                 'kernel': {'family': 'constant'},
                 'initial': {'type': 'cosine', 'amplitude': 0.5},
                 'splitting': 'lie',
                 'N': [250, 500, 1000, 2000],
                 'runs': 200,
                 'times': [1.0],
                 'seed': None,
                 'stratified': False,
                 'grid': None,
                 'chaos': {'xbins': 2, 'vbins': None, 'shuffles': 20}}

    def __init__(self, **kwargs):
        check_keys(kwargs, self._defaults, 'compare config')
        db = copy.deepcopy(self._defaults)
        db.update(kwargs)
        for key in self._defaults:
            setattr(self, key, db[key])
        try:
            self.N = sorted(int(n) for n in self.N)
            self.runs = int(self.runs)
            self.times = sorted(float(t) for t in self.times)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc))
        if len(self.N) < 3:
            raise ConfigError('the N ladder needs at least 3 values, got %s' % self.N)
        if len(set(self.N)) != len(self.N):
            raise ConfigError('repeated values in the N ladder %s' % self.N)
        if self.runs < 2:
            raise ConfigError('need at least 2 runs per N, got %d' % self.runs)
        if len(self.times) == 0 or self.times[0] < 0:
            raise ConfigError('need nonnegative comparison times, got %s' % self.times)
        self.kinetic = KineticConfig(L=self.L, Nx=self.Nx, velocities=self.velocities,
                                     dt=self.dt, t_end=self.times[-1], kernel=self.kernel,
                                     initial=self.initial, splitting=self.splitting)

    @classmethod
    def from_dict(cls, db):
        return cls(**db)

    def to_dict(self):
        db = {}
        for key in self._defaults:
            db[key] = copy.deepcopy(getattr(self, key))
        db['kernel'] = self.kinetic.rank_kernel.to_dict()
        return db

    def particle_config(self, N, seed):
        """`SimConfig` of the particle runs with `N` particles."""
        return SimConfig(N=N, t_end=self.times[-1], kernel=self.kernel,
                         metric={'type': 'periodic', 'L': self.L},
                         initial={'type': 'kinetic', 'stratified': self.stratified},
                         seed=seed, snapshot_interval=0.0)

    def marginal_grid(self):
        """Grid of the particle histograms, by default the kinetic one."""
        if self.grid is None:
            return MarginalGrid.from_dict({'Nx': self.Nx, 'L': self.L,
                                           'velocities': self.velocities})
        return MarginalGrid.from_dict(self.grid)


class ConvergenceReport(object):

    """Distances and chaos metric for each N and time."""

    columns = ['N', 't', 'd_rho', 'd_rho_stderr', 'd_vel', 'd_vel_stderr', 'chaos_metric']

    def __init__(self, runs, seed):
        self.runs = runs
        self.seed = seed
        self.rows = []
        self.chaos = {}

    def append(self, N, t, d_rho, d_rho_stderr, d_vel, d_vel_stderr, chaos):
        self.rows.append((N, t, d_rho, d_rho_stderr, d_vel, d_vel_stderr, chaos.metric))
        self.chaos[(N, t)] = chaos

    @property
    def N(self):
        return sorted(set(row[0] for row in self.rows))

    @property
    def times(self):
        return sorted(set(row[1] for row in self.rows))

    def column(self, name, t):
        """Values of column `name` at time `t`, sorted by N."""
        k = self.columns.index(name)
        rows = sorted([row for row in self.rows if row[1] == t], key=lambda r: r[0])
        return numpy.array([row[k] for row in rows])

    def failures(self, sigmas=1.0, floor=1e-14):
        """
        List the rungs of the N ladder where d_rho, d_vel or the chaos
        metric fail to decrease.

        A decrease smaller than `sigmas` combined standard errors is
        inconclusive and listed as well. Distances at or below `floor`
        on both rungs are exact agreement. The chaos metric passes a
        rung when at the larger N it is compatible with its
        independence floor within 3 floor standard errors.
        """
        out = []
        for t in self.times:
            N = self.column('N', t)
            for name in ('d_rho', 'd_vel'):
                d = self.column(name, t)
                se = self.column(name + '_stderr', t)
                for k in range(len(d) - 1):
                    if d[k] <= floor and d[k + 1] <= floor:
                        continue
                    error = sigmas * (se[k]**2 + se[k + 1]**2)**0.5
                    out += self._check_rung(name, N[k], N[k + 1], t, d[k], d[k + 1], error)
            chaos = [self.chaos[(n, t)] for n in N]
            for k in range(len(chaos) - 1):
                if chaos[k + 1].compatible(3.0):
                    continue
                error = sigmas * (chaos[k].floor_stderr**2 + chaos[k + 1].floor_stderr**2)**0.5
                out += self._check_rung('chaos_metric', N[k], N[k + 1], t,
                                        chaos[k].metric, chaos[k + 1].metric, error)
        return out

    @staticmethod
    def _check_rung(name, N0, N1, t, d0, d1, error):
        if not d1 < d0:
            return ['%s does not decrease from N=%d to N=%d at t=%g: %.4g >= %.4g' %
                    (name, N0, N1, t, d1, d0)]
        if d0 - d1 <= error:
            return ['%s decrease from N=%d to N=%d at t=%g is within error bars '
                    '(inconclusive): %.4g - %.4g <= %.2g' % (name, N0, N1, t, d0, d1, error)]
        return []

    def passed(self, sigmas=1.0):
        return len(self.failures(sigmas)) == 0

    def write(self, path):
        fmt = ['%d'] + ['%.17g'] * (len(self.columns) - 1)
        write_table(path, self.columns, list(zip(*self.rows)), fmt=fmt)

    def report(self):
        txt = 'convergence study with {} runs per N, master seed {}\n'.format(self.runs, self.seed)
        for row in self.rows:
            txt += 'N={} t={:g} d_rho={:.4g}+-{:.2g} d_vel={:.4g}+-{:.2g} chaos={:.4g}\n'.format(*row)
        return txt


def convergence_study(config, workers=1, seed=None):
    """
    Run the convergence study described by `config` (a `CompareConfig`
    or a dict) and return a `ConvergenceReport`.

    The kinetic equation is solved once; for each N of the ladder the
    empirical marginal is estimated from independent runs, seeded by
    the master seed and N. `seed` overrides the config seed.
    """
    if not isinstance(config, CompareConfig):
        config = CompareConfig.from_dict(config)
    seed = master_seed(seed if seed is not None else config.seed)
    initial = config.kinetic.initial_state()
    kernel = config.kinetic.rank_kernel
    solution = solve(initial, kernel, config.kinetic.dt, config.times[-1],
                     times=config.times, splitting=config.splitting)
    grid = config.marginal_grid()
    check_grid(grid, solution.state)

    report = ConvergenceReport(config.runs, seed)
    for N in config.N:
        particles = config.particle_config(N, seed)
        fhat = ensemble_marginal(particles, config.runs, grid, times=config.times,
                                 seed=seed, workers=workers, state=initial, stream=N)
        for t in config.times:
            d_rho, d_vel = marginal_distance(fhat, solution, t)
            se_rho, se_vel = distance_stderr(fhat, solution, t)
            chaos = chaos_metric(fhat, t, rng=numpy.random.default_rng([seed, N]),
                                 **config.chaos)
            report.append(N, t, d_rho, se_rho, d_vel, se_vel, chaos)
            _log.info('N=%d t=%g d_rho=%.4g d_vel=%.4g %s', N, t, d_rho, d_vel, chaos)
    return report
