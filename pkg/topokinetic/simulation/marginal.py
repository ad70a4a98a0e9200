# This file is part of topokinetic

"""
Monte Carlo estimate of the one-particle marginal.

Independent runs of the same config are binned on a (x, v) grid and
averaged. Run k draws its random stream from the seed sequence
(seed, stream, k), so the result does not depend on how runs are scheduled
across workers.
"""

import logging
import concurrent.futures as cf

import numpy

from topokinetic.core.progress import progress
from .config import SimConfig, ConfigError
from .leader import ChooseTheLeader, make_ensemble

__all__ = ['MarginalGrid', 'EmpiricalMarginal', 'ensemble_marginal', 'master_seed']

_log = logging.getLogger(__name__)


def master_seed(seed=None):
    """Return `seed`, or fresh entropy if it is None."""
    if seed is not None:
        return int(seed)
    seed = numpy.random.SeedSequence().entropy
    _log.info('using fresh master seed %d', seed)
    return seed


class MarginalGrid(object):

    """
    Grid of cells in x and velocity classes (or velocity bins) on
    which particles are histogrammed.
    """

    def __init__(self, x_edges, velocities=None, v_edges=None):
        self.x_edges = numpy.asarray(x_edges, dtype=float)
        if (velocities is None) == (v_edges is None):
            raise ValueError('provide either velocity classes or velocity edges')
        self.velocities = None if velocities is None else numpy.asarray(velocities, dtype=float)
        self.v_edges = None if v_edges is None else numpy.asarray(v_edges, dtype=float)

    @classmethod
    def from_dict(cls, db):
        """
        Grid from a dict with either `Nx` and `L` (periodic cells) or
        `x: [min, max, bins]`, and either `velocities: [...]` or
        `v: [min, max, bins]`.
        """
        if 'Nx' in db:
            x_edges = numpy.linspace(0.0, float(db.get('L', 1.0)), int(db['Nx']) + 1)
        else:
            lo, hi, n = db['x']
            x_edges = numpy.linspace(lo, hi, int(n) + 1)
        if 'velocities' in db:
            return cls(x_edges, velocities=db['velocities'])
        lo, hi, n = db['v']
        return cls(x_edges, v_edges=numpy.linspace(lo, hi, int(n) + 1))

    def __eq__(self, other):
        def same(a, b):
            if a is None or b is None:
                return a is None and b is None
            return a.shape == b.shape and numpy.all(a == b)
        return isinstance(other, MarginalGrid) and same(self.x_edges, other.x_edges) and \
            same(self.velocities, other.velocities) and same(self.v_edges, other.v_edges)

    @property
    def nx(self):
        return len(self.x_edges) - 1

    @property
    def nv(self):
        if self.velocities is not None:
            return len(self.velocities)
        return len(self.v_edges) - 1

    @property
    def dx(self):
        return numpy.diff(self.x_edges)

    def bin(self, position, velocity):
        """
        Return the cell and velocity indices of particles; -1 marks
        particles outside the grid.
        """
        x = numpy.asarray(position, dtype=float).reshape(len(position), -1)[:, 0]
        v = numpy.asarray(velocity, dtype=float).reshape(len(velocity), -1)[:, 0]
        ix = numpy.searchsorted(self.x_edges, x, side='right') - 1
        ix[(x < self.x_edges[0]) | (x >= self.x_edges[-1])] = -1
        if self.velocities is not None:
            order = numpy.argsort(self.velocities, kind='stable')
            pos = numpy.searchsorted(self.velocities[order], v)
            pos = numpy.minimum(pos, len(order) - 1)
            iv = numpy.where(self.velocities[order][pos] == v, order[pos], -1)
        else:
            iv = numpy.searchsorted(self.v_edges, v, side='right') - 1
            iv[(v < self.v_edges[0]) | (v >= self.v_edges[-1])] = -1
        return ix, iv

    def histogram(self, position, velocity):
        """Fraction of the particles in each (cell, velocity) bin."""
        ix, iv = self.bin(position, velocity)
        inside = (ix >= 0) & (iv >= 0)
        counts = numpy.zeros((self.nx, self.nv))
        numpy.add.at(counts, (ix[inside], iv[inside]), 1.0)
        return counts / len(ix)


class EmpiricalMarginal(object):

    """
    Empirical one-particle marginal averaged over independent runs.

    `mass[k, m, a]` is the fraction of particles in cell m with
    velocity a at time `times[k]`, so that the density on the grid is
    `mass / dx`.
    """

    def __init__(self, times, grid, per_run, pairs, N):
        self.times = numpy.asarray(times, dtype=float)
        self.grid = grid
        self.N = N
        self.per_run = per_run
        """Histograms of the single runs, shape (runs, times, nx, nv)."""
        self.pairs = pairs
        """Bins of particles 0 and 1, shape (runs, times, 2, 2)."""

    @property
    def runs(self):
        return self.per_run.shape[0]

    @property
    def mass(self):
        return self.per_run.mean(axis=0)

    @property
    def stderr(self):
        """Per-bin standard error from the across-run variance."""
        if self.runs < 2:
            return numpy.zeros_like(self.mass)
        return self.per_run.std(axis=0, ddof=1) / self.runs**0.5

    @property
    def density(self):
        return self.mass / self.grid.dx[:, numpy.newaxis]

    @property
    def rho(self):
        """Spatial density, shape (times, nx)."""
        return self.mass.sum(axis=-1) / self.grid.dx

    @property
    def g(self):
        """Velocity marginal, shape (times, nv)."""
        return self.mass.sum(axis=1)

    def index(self, t):
        """Index of time `t` in `times`."""
        where = numpy.flatnonzero(numpy.isclose(self.times, t, rtol=0, atol=1e-12))
        if len(where) == 0:
            raise ValueError('time %g not sampled, available %s' % (t, self.times))
        return int(where[0])


def _run_member(args):
    config_db, seed, stream, index, times, grid, state = args
    rng = numpy.random.default_rng([seed, stream, index])
    config = SimConfig.from_dict(config_db)
    ens = make_ensemble(config, rng, state=state)
    backend = ChooseTheLeader(ens, config.rank_kernel, config.space)
    hist, pairs = [], []
    for t in times:
        backend.run_until(t)
        hist.append(grid.histogram(ens.position, ens.velocity))
        pairs.append(numpy.array(grid.bin(ens.position[:2], ens.velocity[:2])).T)
    return numpy.array(hist), numpy.array(pairs)


def ensemble_marginal(config, runs, grid, times=None, seed=None, workers=1, state=None,
                      stream=0):
    """
    Estimate the one-particle marginal of the dynamics of `config` at
    `times` (default: `config.t_end`) from `runs` independent runs.

    `grid` is a `MarginalGrid` or a dict accepted by
    `MarginalGrid.from_dict`. `state` is the kinetic state used by
    kinetic initial conditions. Runs are distributed over `workers`
    processes. Run k of `stream` draws from the seed sequence
    (seed, stream, k), so that different streams are independent.
    """
    if not isinstance(config, SimConfig):
        config = SimConfig.from_dict(config)
    if not isinstance(grid, MarginalGrid):
        grid = MarginalGrid.from_dict(grid)
    if runs < 1:
        raise ConfigError('need at least one run, got %d' % runs)
    if config.space.ndim != 1:
        raise ConfigError('marginals are only binned for 1d positions')
    times = sorted([config.t_end] if times is None else list(times))
    seed = master_seed(seed if seed is not None else config.seed)
    config_db = config.to_dict()
    tasks = [(config_db, seed, stream, k, times, grid, state) for k in range(runs)]

    results = []
    if workers is None or workers <= 1:
        for task in progress(tasks):
            results.append(_run_member(task))
    else:
        with cf.ProcessPoolExecutor(max_workers=workers) as ex:
            # map keeps results in run order
            for result in ex.map(_run_member, tasks, chunksize=max(1, runs // (4 * workers))):
                results.append(result)
    per_run = numpy.array([r[0] for r in results])
    pairs = numpy.array([r[1] for r in results])
    _log.info('marginal of %d runs of N=%d at times %s', runs, config.N, times)
    return EmpiricalMarginal(times, grid, per_run, pairs, config.N)
