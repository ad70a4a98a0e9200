# This file is part of topokinetic

"""
Splitting solver of the kinetic equation

    df/dt + v df/dx = rho(x) int f(x',v) K(M_rho(x, |x'-x|)) dx' - f(x,v)

on a periodic segment with a finite set of velocities. Each step
transports every velocity class by v dt with periodic linear
interpolation, then relaxes f towards the gain term

    f <- (1 - dt) f + dt gain(f)

which keeps f nonnegative for dt <= 1. Both substeps conserve mass
exactly, up to round-off.
"""

import copy
import logging

import numpy

from topokinetic.kernel import RankKernel, DomainError
from topokinetic.simulation import Simulation, Scheduler, ConfigError, write_kinetic
from topokinetic.simulation.config import check_keys
from topokinetic.core.utils import write_table
from .state import KineticState, EmptyDensity, kinetic_initial
from .shells import build_partial_mass_table

__all__ = ['StepTooLarge', 'gain_operator', 'transport', 'collide', 'step',
           'KineticSolver', 'KineticConfig', 'KineticSolution', 'solve',
           'write_solution']

_log = logging.getLogger(__name__)


class StepTooLarge(ConfigError):
    """Raised when the time step exceeds 1, the collision rate."""
    pass


def _check_dt(dt):
    if dt > 1:
        raise StepTooLarge('time step %g exceeds 1' % dt)
    if not dt > 0:
        raise ConfigError('time step must be positive, got %g' % dt)


def gain_operator(state, kernel, table=None):
    """
    Return the gain term

        gain[m, a] = (rho_m / mass) sum_m' f[m', a] Kbar[m, m'] dx

    where Kbar is the kernel weight per unit mass of the shell of m'
    seen from m. `table` is the `PartialMassTable` of the current
    density; it is built if not given.
    """
    if table is None:
        table = build_partial_mass_table(state, kernel)
    if table.total_mass <= 0:
        raise EmptyDensity('total mass is zero')
    rho = state.rho / table.total_mass
    return rho[:, numpy.newaxis] * numpy.dot(table.kernel_matrix(), state.f) * state.dx


def transport(state, dt):
    """Advect every velocity class by v dt, in place."""
    for a, v in enumerate(state.velocities):
        shift = v * dt / state.dx
        n = int(numpy.floor(shift))
        theta = shift - n
        column = state.f[:, a]
        if theta == 0:
            state.f[:, a] = numpy.roll(column, n)
        else:
            state.f[:, a] = (1 - theta) * numpy.roll(column, n) + theta * numpy.roll(column, n + 1)
    return state


def collide(state, kernel, dt):
    """Relax f towards the gain term over a time `dt`, in place."""
    gain = gain_operator(state, kernel)
    state.f = (1 - dt) * state.f + dt * gain
    return state


def step(state, kernel, dt, splitting='lie', collisions=True):
    """
    Return the state after one time step `dt`.

    `splitting` is `lie` (transport then collision, first order) or
    `strang` (half transport, collision, half transport). With
    `collisions=False` only transport is performed.
    """
    _check_dt(dt)
    new = state.copy()
    if splitting == 'lie':
        transport(new, dt)
        if collisions:
            collide(new, kernel, dt)
    elif splitting == 'strang':
        transport(new, dt / 2)
        if collisions:
            collide(new, kernel, dt)
        transport(new, dt / 2)
    else:
        raise ConfigError('unknown splitting %s' % splitting)
    new.t = state.t + dt
    return new


class KineticSolver(object):

    """Backend that advances a `KineticState` with fixed time step."""

    def __init__(self, state, kernel, dt, splitting='lie', collisions=True):
        _check_dt(dt)
        self.system = state
        self.kernel = kernel
        self.dt = dt
        self.splitting = splitting
        self.collisions = collisions
        self.steps = 0

    def __str__(self):
        return 'kinetic splitting solver'

    @property
    def current_time(self):
        return self.system.t

    def report(self):
        txt = self.kernel.report()
        txt += 'time step: {:g}\nsplitting: {}\n'.format(self.dt, self.splitting)
        return txt

    def run_until(self, t):
        # Steps of dt, the last one possibly shorter so as to land on t
        while self.system.t < t:
            h = min(self.dt, t - self.system.t)
            if h <= 1e-9 * self.dt:
                break
            self.system = step(self.system, self.kernel, h, self.splitting, self.collisions)
            self.steps += 1
            if abs(self.system.t - t) <= 1e-9 * self.dt:
                self.system.t = t
        self.system.t = t


class KineticConfig(object):

    """Parameters of a kinetic run."""

    _defaults = {'L': 1.0,
                 'Nx': 64,
                 'velocities': [-1.0, 1.0],
                 'dt': 0.01,
                 't_end': 1.0,
                 'kernel': {'family': 'constant'},
                 'initial': {'type': 'homogeneous'},
                 'splitting': 'lie',
                 'interval': 0.1,
                 'dump_f': False}

    def __init__(self, **kwargs):
        check_keys(kwargs, self._defaults, 'kinetic config')
        db = copy.deepcopy(self._defaults)
        db.update(kwargs)
        for key in self._defaults:
            setattr(self, key, db[key])
        try:
            self.L = float(self.L)
            self.Nx = int(self.Nx)
            self.dt = float(self.dt)
            self.t_end = float(self.t_end)
            self.interval = float(self.interval) if self.interval is not None else 0.0
            self.velocities = [float(v) for v in self.velocities]
            self.rank_kernel = RankKernel.from_dict(self.kernel)
        except (TypeError, ValueError, DomainError) as exc:
            raise ConfigError(str(exc))
        _check_dt(self.dt)
        if self.Nx < 1 or self.L <= 0 or len(self.velocities) == 0:
            raise ConfigError('need Nx >= 1, L > 0 and at least one velocity')
        if self.t_end < 0:
            raise ConfigError('t_end must be nonnegative, got %g' % self.t_end)
        if self.splitting not in ('lie', 'strang'):
            raise ConfigError('unknown splitting %s' % self.splitting)

    @classmethod
    def from_dict(cls, db):
        return cls(**db)

    def to_dict(self):
        db = {}
        for key in self._defaults:
            db[key] = copy.deepcopy(getattr(self, key))
        db['kernel'] = self.rank_kernel.to_dict()
        return db

    def initial_state(self):
        try:
            return kinetic_initial(self.initial, self.L, self.Nx, self.velocities)
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError('invalid kinetic initial condition: %s' % exc)


class KineticSolution(object):

    """Observables of a kinetic run sampled in time, plus the final state."""

    def __init__(self, observables, state):
        self.times = numpy.array(observables['t'])
        self.rho = numpy.array(observables['rho'])
        self.g = numpy.array(observables['g'])
        self.mass = numpy.array(observables['mass'])
        self.inhomogeneity = numpy.array(observables['inhomogeneity'])
        self.f = numpy.array(observables['f']) if 'f' in observables else None
        self.state = state

    def __len__(self):
        return len(self.times)

    def index(self, t):
        where = numpy.flatnonzero(numpy.isclose(self.times, t, rtol=0, atol=1e-9))
        if len(where) == 0:
            raise ValueError('time %g not sampled, available %s' % (t, self.times))
        return int(where[0])


def solve(initial, kernel, dt, t_end, interval=None, times=None, splitting='lie',
          collisions=True, dump_f=False):
    """
    Solve the kinetic equation from the `initial` state up to `t_end`
    with time step `dt`.

    Observables (rho, velocity marginal, mass, inhomogeneity and,
    with `dump_f`, the full density) are sampled every `interval` or
    at the given `times`, and always at the initial and final times.
    Return a `KineticSolution`.

    The transport substep is exact only when v dt / dx is an integer
    for every velocity class. Otherwise the linear interpolation adds
    a numerical diffusion that depends on the fractional shift, and
    solutions computed with dt and dt/2 need not differ by O(dt).
    Time step ladders should use grid-aligned shifts.
    """
    backend = KineticSolver(initial.copy(), kernel, dt, splitting, collisions)
    sim = Simulation(backend, t_end=t_end)
    observables = {'f': []} if dump_f else {}
    if times is not None:
        scheduler = Scheduler(times=list(times) + [t_end])
    else:
        scheduler = Scheduler(interval if interval else t_end)
    sim.add(write_kinetic, scheduler, observables)
    sim.run()
    # The final state is always sampled
    if len(observables['t']) == 0 or observables['t'][-1] != sim.current_time:
        write_kinetic(sim, observables)
    _log.info('%d steps, final mass %.15g', backend.steps, backend.system.mass)
    return KineticSolution(observables, backend.system)


def write_solution(directory, solution):
    """
    Write the CSV files of a kinetic solution in `directory`:
    `rho.csv` (t, x, rho), `g.csv` (t, v, g), `mass.csv`
    (t, mass, inhomogeneity) and, if available, `f.csv` (t, x, v, f).
    Return the list of written paths.
    """
    import os
    state = solution.state
    x, v = state.x, state.velocities
    T = len(solution.times)
    paths = []

    path = os.path.join(directory, 'rho.csv')
    write_table(path, ['t', 'x', 'rho'],
                [numpy.repeat(solution.times, state.Nx), numpy.tile(x, T), solution.rho.ravel()])
    paths.append(path)

    path = os.path.join(directory, 'g.csv')
    write_table(path, ['t', 'v', 'g'],
                [numpy.repeat(solution.times, state.Nv), numpy.tile(v, T), solution.g.ravel()])
    paths.append(path)

    path = os.path.join(directory, 'mass.csv')
    write_table(path, ['t', 'mass', 'inhomogeneity'],
                [solution.times, solution.mass, solution.inhomogeneity])
    paths.append(path)

    if solution.f is not None:
        path = os.path.join(directory, 'f.csv')
        n = state.Nx * state.Nv
        write_table(path, ['t', 'x', 'v', 'f'],
                    [numpy.repeat(solution.times, n),
                     numpy.tile(numpy.repeat(x, state.Nv), T),
                     numpy.tile(v, T * state.Nx),
                     solution.f.ravel()])
        paths.append(path)
    return paths
