# This file is part of topokinetic

"""
Scheduler and callbacks (aka observers) to be called during a simulation.

To add a callback `func` to a `Simulation` instance `sim` and have it
called every 0.5 time units

    #!python
    sim.add(func, Scheduler(0.5))

Callbacks are functions or callable classes that take the simulation
as first argument. To differentiate different types of callbacks, we
follow a naming convention. If their name contains

- target : these callbacks raise a SimulationEnd when it's over
- write : these callbacks store or dump data

Targeters are always notified after writers, so that the data at the
final time are stored before the run ends.
"""

import math
import logging

import numpy

from topokinetic.core.utils import write_table

__all__ = ['SimulationEnd', 'Scheduler', 'DiagnosticsSeries',
           'write_diagnostics', 'write_snapshot', 'write_kinetic',
           'target_time', 'target_consensus', 'target']

_log = logging.getLogger(__name__)


class SimulationEnd(Exception):
    """Raised when an targeter reaches its target."""
    pass


class Scheduler(object):

    """
    Schedule observer calls during the simulation.

    This is nothing but a callable that takes a simulation instance
    and returns the next time at which an observer has to be notified.
    """

    def __init__(self, interval=None, calls=None, times=None):
        """
        Only one of the arguments can be different from None.

        - `interval`: notify at a fixed time interval
        - `calls`: fixed number of notifications over the run
        - `times`: list of times at which the observer will be notified
        """
        self.interval = interval
        self.calls = calls
        self.times = sorted(times) if times is not None else None

        # Normalize non-positive intervals and n. of calls
        if self.interval is not None and self.interval <= 0:
            self.interval = None
        if self.calls is not None and self.calls <= 0:
            self.calls = None

    @staticmethod
    def _next_multiple(t, interval):
        n = t / interval
        # The clock is set exactly to the scheduled times, but the
        # ratio may be off by one ulp
        if abs(n - round(n)) < 1e-9 * max(1.0, abs(n)):
            n = round(n)
        else:
            n = math.floor(n)
        return (n + 1) * interval

    def __call__(self, sim):
        """
        Given a simulation instance `sim`, return the next time at which
        the observer will be called.
        """
        t = sim.current_time
        if self.interval is not None and self.calls is None:
            return self._next_multiple(t, self.interval)

        elif self.calls is not None:
            if sim.t_end <= 0:
                return float('inf')
            return self._next_multiple(t, sim.t_end / self.calls)

        elif self.times is not None:
            for time in self.times:
                if time > t:
                    return time
            return float('inf')

        else:
            return float('inf')


class DiagnosticsSeries(object):

    """
    Time series of the velocity variance and of the number of
    distinct velocities, plus the consensus time.
    """

    columns = ['t', 'variance', 'distinct_velocities']

    def __init__(self):
        self.times = []
        self.velocity_variance = []
        self.distinct_velocities = []
        self.consensus_time = None

    def __len__(self):
        return len(self.times)

    def append(self, t, variance, distinct):
        self.times.append(t)
        self.velocity_variance.append(variance)
        self.distinct_velocities.append(distinct)

    def is_nonincreasing(self):
        """True if the number of distinct velocities never grows."""
        d = numpy.array(self.distinct_velocities)
        return bool(numpy.all(d[1:] <= d[:-1]))

    def write(self, path):
        write_table(path, self.columns,
                    [self.times, self.velocity_variance, self.distinct_velocities],
                    fmt=['%.17g', '%.17g', '%d'])


# Writer callbacks

def write_diagnostics(sim, series):
    """Append the current velocity diagnostics to `series`."""
    system = sim.system
    series.append(sim.current_time, system.velocity_variance,
                  system.distinct_velocities)
    series.consensus_time = system.consensus_time


def write_snapshot(sim, snapshots):
    """Append a copy of (t, positions, velocities) to the list `snapshots`."""
    system = sim.system
    snapshots.append((sim.current_time, system.position.copy(),
                      system.velocity.copy()))


def write_kinetic(sim, observables):
    """
    Append the observables of the current kinetic state to the
    dict of lists `observables` (keys: t, rho, g, mass, inhomogeneity,
    and f when the key is present).
    """
    state = sim.system
    observables.setdefault('t', []).append(sim.current_time)
    observables.setdefault('rho', []).append(state.rho.copy())
    observables.setdefault('g', []).append(state.velocity_marginal())
    observables.setdefault('mass', []).append(state.mass)
    observables.setdefault('inhomogeneity', []).append(state.inhomogeneity())
    if 'f' in observables:
        observables['f'].append(state.f.copy())


# Target callbacks

def target(sim, attribute, value):
    """Stop when the system `attribute` reaches `value` from above."""
    current = getattr(sim.system, attribute)
    if current <= value:
        raise SimulationEnd('target %s %s reached' % (attribute, value))


def target_time(sim, t_end):
    """Stop when the simulation clock reaches `t_end`."""
    if sim.current_time >= t_end:
        raise SimulationEnd('reached target time %g' % t_end)


def target_consensus(sim):
    """Stop as soon as all velocities coincide."""
    if sim.system.distinct_velocities == 1:
        raise SimulationEnd('consensus reached at time %g' % sim.system.consensus_time)
