# This file is part of topokinetic

"""
Initial conditions for particle runs.

All samplers take a `numpy.random.Generator` and return a pair of
arrays (position, velocity) of shape (N, ndim).
"""

import logging

import numpy

__all__ = ['uniform_box', 'explicit', 'from_kinetic_state', 'initial_condition']

_log = logging.getLogger(__name__)


def uniform_box(N, rng, x=(-10.0, 10.0), v=(-10.0, 10.0), ndim=1,
                velocities=None, weights=None):
    """
    Positions and velocities i.i.d. uniform in the boxes `x` and `v`,
    applied to every coordinate.

    If `velocities` is given, velocities are instead drawn from this
    finite set of classes, with probabilities `weights` (uniform by
    default).
    """
    position = rng.uniform(x[0], x[1], size=(N, ndim))
    if velocities is None:
        velocity = rng.uniform(v[0], v[1], size=(N, ndim))
    else:
        classes = numpy.array(velocities, dtype=float).reshape(len(velocities), -1)
        if classes.shape[1] != ndim:
            raise ValueError('velocity classes must have %d components' % ndim)
        if weights is not None:
            weights = numpy.asarray(weights, dtype=float)
            weights = weights / weights.sum()
        idx = rng.choice(len(classes), size=N, p=weights)
        velocity = classes[idx]
    return position, velocity


def explicit(x, v):
    """Deterministic initial condition from explicit lists."""
    position = numpy.array(x, dtype=float)
    velocity = numpy.array(v, dtype=float)
    if position.ndim == 1:
        position = position.reshape(-1, 1)
    if velocity.ndim == 1:
        velocity = velocity.reshape(-1, 1)
    return position, velocity


def _largest_remainder(mass, N):
    # Integer counts summing to N, as close as possible to N * mass
    target = mass * N
    counts = numpy.floor(target).astype(int)
    missing = N - counts.sum()
    if missing > 0:
        order = numpy.argsort(-(target - counts), kind='stable')
        counts[order[:missing]] += 1
    return counts


def from_kinetic_state(state, N, rng, stratified=False):
    """
    Sample N particles from the one-particle density of a kinetic
    state, by inverse cdf over the (cell, velocity class) pairs.
    Positions are uniform within their cell.

    With `stratified=True` the number of particles of each pair is
    fixed to the rounding of N times its mass, so that the velocity
    marginal of the particles is as close as possible to that of the
    state.
    """
    mass = (state.f * state.dx).ravel()
    mass = mass / mass.sum()
    if stratified:
        counts = _largest_remainder(mass, N)
        idx = numpy.repeat(numpy.arange(mass.size), counts)
        idx = rng.permutation(idx)
    else:
        cdf = numpy.cumsum(mass)
        cdf[-1] = 1.0
        idx = numpy.searchsorted(cdf, rng.random(N), side='right')
    cell, klass = numpy.divmod(idx, state.Nv)
    position = (cell + rng.random(N)) * state.dx
    # Keep positions in [0, L) despite rounding
    position = numpy.minimum(position, numpy.nextafter(state.L, 0))
    velocity = state.velocities[klass]
    return position.reshape(-1, 1), velocity.reshape(-1, 1)


def initial_condition(db, N, rng, metric=None, state=None):
    """
    Build an initial condition from the config dict `db`.

    Valid types are

    - `uniform`: keys `x`, `v` (boxes), `velocities`, `weights`
    - `explicit`: keys `x`, `v` (lists of length N)
    - `kinetic`: sample from the kinetic `state`; key `stratified`

    On a periodic metric the default position box is [0, L).
    """
    db = dict(db) if db is not None else {}
    kind = db.pop('type', 'uniform').lower()
    ndim = 1 if metric is None else metric.ndim
    if kind == 'uniform':
        if 'x' not in db and metric is not None and metric.periodic:
            db['x'] = (0.0, metric.L)
        position, velocity = uniform_box(N, rng, ndim=ndim, **db)
    elif kind == 'explicit':
        position, velocity = explicit(db['x'], db['v'])
        if len(position) != N:
            raise ValueError('explicit initial condition has %d particles, expected %d' %
                             (len(position), N))
    elif kind == 'kinetic':
        if state is None:
            raise ValueError('kinetic initial condition requires a kinetic state')
        position, velocity = from_kinetic_state(state, N, rng, **db)
    else:
        raise ValueError('unknown initial condition %s' % kind)
    _log.debug('initial condition %s for %d particles', kind, N)
    return position, velocity
