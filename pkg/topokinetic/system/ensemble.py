# This file is part of topokinetic

"""
The particle ensemble.

The ensemble holds positions and velocities of N particles, the
simulation clock and the random stream of a run. Particles follow
straight trajectories between collisions, so positions are computed
from the reference positions at the last collision time as

    x_i(t) = x_i(t_ref) + (t - t_ref) v_i

and never integrated step by step.
"""

import copy
import collections

import numpy

from .metric import Euclidean

__all__ = ['ParticleEnsemble']


def _key(v):
    # Velocities are only copied, never combined, so bit equality
    # is the right notion of equality
    return numpy.ascontiguousarray(v).tobytes()


class ParticleEnsemble(object):

    """Positions, velocities and clock of N particles."""

    def __init__(self, position, velocity, metric=None, t=0.0, rng=None):
        """
        `position` and `velocity` are arrays of shape (N, ndim); 1d
        arrays are interpreted as N particles on a line. `rng` is a
        `numpy.random.Generator` that drives the dynamics.
        """
        position = numpy.array(position, dtype=float)
        velocity = numpy.array(velocity, dtype=float)
        if position.ndim == 1:
            position = position.reshape(-1, 1)
        if velocity.ndim == 1:
            velocity = velocity.reshape(-1, 1)
        if position.shape != velocity.shape:
            raise ValueError('positions %s and velocities %s do not match' %
                             (position.shape, velocity.shape))
        if metric is None:
            metric = Euclidean(position.shape[1])
        if metric.ndim != position.shape[1]:
            raise ValueError('metric %s does not fit %d-dimensional positions' %
                             (metric, position.shape[1]))
        self.metric = metric
        self.velocity = velocity
        self.position = metric.fold(position)
        self.t = float(t)
        self.rng = rng if rng is not None else numpy.random.default_rng()
        self.next_event = None
        """Absolute time of the pending collision, if already drawn."""
        self.last_event = None
        """Tuple (t, follower, leader) of the last collision."""
        self.consensus_time = None
        self._x_ref = self.position.copy()
        self._t_ref = self.t
        self._counts = collections.Counter(_key(v) for v in self.velocity)
        if len(self._counts) == 1:
            self.consensus_time = self.t

    def __copy__(self):
        cls = self.__class__
        result = cls.__new__(cls)
        result.__dict__.update(self.__dict__)
        for key in ['velocity', 'position', '_x_ref']:
            setattr(result, key, getattr(self, key).copy())
        result._counts = collections.Counter(self._counts)
        result.rng = copy.deepcopy(self.rng)
        return result

    def copy(self):
        return copy.copy(self)

    def __len__(self):
        return self.velocity.shape[0]

    @property
    def N(self):
        return self.velocity.shape[0]

    @property
    def number_of_dimensions(self):
        return self.velocity.shape[1]

    def move_to(self, t):
        """Free flight of all particles up to time `t`."""
        self.position = self.metric.fold(self._x_ref + (t - self._t_ref) * self.velocity)
        self.t = t

    def rebase(self):
        """Take current positions and time as the new flight reference."""
        self._x_ref = self.position.copy()
        self._t_ref = self.t

    def copy_velocity(self, i, j):
        """The follower `i` takes the velocity of the leader `j`."""
        self.rebase()
        old, new = _key(self.velocity[i]), _key(self.velocity[j])
        if old != new:
            self._counts[old] -= 1
            if self._counts[old] == 0:
                del self._counts[old]
            self._counts[new] += 1
        self.velocity[i] = self.velocity[j]
        if self.consensus_time is None and len(self._counts) == 1:
            self.consensus_time = self.t

    @property
    def distinct_velocities(self):
        """Number of distinct velocity values."""
        return len(self._counts)

    @property
    def velocity_variance(self):
        """Trace of the empirical covariance matrix of the velocities."""
        if len(self._counts) == 1:
            return 0.0
        return float(numpy.sum(numpy.var(self.velocity, axis=0)))

    def report(self):
        txt = 'ensemble of {} particles in {}\n'.format(self.N, self.metric)
        txt += 'distinct velocities: {}\n'.format(self.distinct_velocities)
        txt += 'velocity variance: {:.6g}\n'.format(self.velocity_variance)
        return txt
