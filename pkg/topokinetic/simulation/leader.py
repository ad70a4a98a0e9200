# This file is part of topokinetic

"""
The "Choose the Leader" dynamics.

At the times of a Poisson process with rate N, a follower i is picked
uniformly among the N particles and a leader j is picked with
probability K^N(r(i,j)) among the others, where r(i,j) is the scaled
proximity rank of j seen from i. The follower then takes the velocity
of the leader. Between collisions particles fly freely.
"""

import logging

import numpy

from topokinetic.kernel import build_discrete_table, DegenerateKernel
from topokinetic.rank import select_leader
from topokinetic.system import ParticleEnsemble, initial_condition
from topokinetic.core.utils import write_table
from .core import Simulation
from .config import SimConfig, ConfigError
from .observers import (Scheduler, DiagnosticsSeries, write_diagnostics,
                        write_snapshot, target_consensus)

__all__ = ['step_to_next_event', 'ChooseTheLeader', 'make_ensemble', 'run',
           'RunResult', 'write_trajectory', 'write_events']

_log = logging.getLogger(__name__)


def step_to_next_event(ens, table, metric=None, tau=None, follower=None, u=None,
                       method='select'):
    """
    Advance the ensemble `ens` to its next collision and perform it.

    The waiting time `tau`, the `follower` index and the uniform
    number `u` used to sample the leader rank are drawn from
    `ens.rng`, in this order, unless they are passed explicitly. If
    the ensemble has a pending collision time, it is used as the
    collision time.

    Return the ensemble, whose `last_event` attribute holds the tuple
    (t, follower, leader).
    """
    if metric is None:
        metric = ens.metric
    N = ens.N
    if tau is None:
        if ens.next_event is not None:
            t_event = ens.next_event
        else:
            t_event = ens.t + ens.rng.exponential(1.0 / N)
    else:
        t_event = ens.t + tau
    ens.next_event = None
    ens.move_to(t_event)
    if follower is None:
        follower = int(ens.rng.integers(N))
    if u is None:
        u = ens.rng.random()
    leader = select_leader(ens.position, metric, table, follower, u, method=method)
    ens.copy_velocity(follower, leader)
    ens.last_event = (t_event, follower, leader)
    return ens


class ChooseTheLeader(object):

    """Event-driven backend of the Choose the Leader dynamics."""

    def __init__(self, ensemble, kernel, metric=None, event_log=False, method='select',
                 table=None):
        """
        Ranks are measured with `metric`, by default the metric of the
        `ensemble`. A prebuilt `table` of the `kernel` for N particles
        may be passed.
        """
        self.system = ensemble
        self.kernel = kernel
        self.metric = metric if metric is not None else ensemble.metric
        if table is None:
            try:
                table = build_discrete_table(kernel, ensemble.N)
            except DegenerateKernel as exc:
                raise ConfigError(str(exc))
        elif table.N != ensemble.N:
            raise ValueError('table built for N=%d, got %d particles' % (table.N, ensemble.N))
        self.table = table
        self.method = method
        self.events = [] if event_log else None
        self.number_of_events = 0

    def __str__(self):
        return 'choose the leader'

    @property
    def current_time(self):
        return self.system.t

    def report(self):
        txt = self.kernel.report()
        txt += self.table.report()
        txt += 'metric: {}\n'.format(self.metric)
        return txt

    def run_until(self, t):
        """
        Perform all the collisions up to time `t`, then move the
        particles to `t`. The first collision after `t` is drawn and
        kept pending, so that stopping at intermediate times does not
        change the trajectory.
        """
        ens = self.system
        while True:
            if ens.next_event is None:
                ens.next_event = ens.t + ens.rng.exponential(1.0 / ens.N)
            if ens.next_event > t:
                break
            step_to_next_event(ens, self.table, self.metric, method=self.method)
            self.number_of_events += 1
            if self.events is not None:
                self.events.append(ens.last_event)
        ens.move_to(t)


def make_ensemble(config, rng, state=None):
    """Initial `ParticleEnsemble` of the `config`, sampled with `rng`."""
    try:
        position, velocity = initial_condition(config.initial, config.N, rng,
                                               metric=config.space, state=state)
        return ParticleEnsemble(position, velocity, metric=config.space, rng=rng)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError('invalid initial condition: %s' % exc)


class RunResult(object):

    """Snapshots, diagnostics and events of a particle run."""

    def __init__(self, snapshots, diagnostics, events=None, ensemble=None):
        self.snapshots = snapshots
        self.diagnostics = diagnostics
        self.events = events
        self.ensemble = ensemble

    # Unpack as (snapshots, diagnostics)
    def __iter__(self):
        return iter((self.snapshots, self.diagnostics))


def run(config, rng=None, state=None):
    """
    Run the dynamics described by `config` (a `SimConfig` or a dict).

    Return a `RunResult`, which unpacks as (snapshots, diagnostics).
    Snapshots are tuples (t, positions, velocities). If `rng` is None,
    the stream is seeded by `config.seed`.
    """
    if not isinstance(config, SimConfig):
        config = SimConfig.from_dict(config)
    if rng is None:
        rng = numpy.random.default_rng(config.seed)
    ens = make_ensemble(config, rng, state=state)
    backend = ChooseTheLeader(ens, config.rank_kernel, config.space,
                              event_log=config.event_log)
    sim = Simulation(backend, t_end=config.t_end)
    snapshots, diagnostics = [], DiagnosticsSeries()
    sim.add(write_diagnostics, Scheduler(config.interval), diagnostics)
    if config.snapshot_interval > 0:
        sim.add(write_snapshot, Scheduler(config.snapshot_interval), snapshots)
    if config.stop_at_consensus:
        sim.add(target_consensus, Scheduler(config.interval))
    sim.run()
    diagnostics.consensus_time = ens.consensus_time
    _log.info('%d collisions, consensus time %s', backend.number_of_events, ens.consensus_time)
    return RunResult(snapshots, diagnostics, backend.events, ens)


def write_trajectory(path, snapshots):
    """Write snapshots as CSV rows `t, particle_id, x..., v...`."""
    if len(snapshots) > 0:
        ndim = snapshots[0][1].shape[1]
    else:
        ndim = 1
    axes = ['x', 'y'][:ndim]
    columns = ['t', 'particle_id'] + \
        (axes if ndim > 1 else ['x']) + \
        (['v' + a for a in axes] if ndim > 1 else ['v'])
    data = [[] for _ in columns]
    for t, x, v in snapshots:
        N = len(x)
        data[0].extend([t] * N)
        data[1].extend(range(N))
        for a in range(ndim):
            data[2 + a].extend(x[:, a])
            data[2 + ndim + a].extend(v[:, a])
    fmt = ['%.17g', '%d'] + ['%.17g'] * (2 * ndim)
    write_table(path, columns, data, fmt=fmt)


def write_events(path, events):
    """Write the event log as CSV rows `t, follower, leader`."""
    events = events if events is not None else []
    data = [[e[0] for e in events], [e[1] for e in events], [e[2] for e in events]]
    write_table(path, ['t', 'follower', 'leader'], data, fmt=['%.17g', '%d', '%d'])
