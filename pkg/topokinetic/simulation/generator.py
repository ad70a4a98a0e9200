# This file is part of topokinetic

"""
Short-time check of the generator of the dynamics.

For an observable phi of the configuration Z = (x, v), the
generator of the process is

    L phi(Z) = sum_i v_i . grad_{x_i} phi(Z)
             + sum_i sum_{j != i} pi_ij [phi(Z with v_i <- v_j) - phi(Z)]

since the collision (i, j) happens at rate N * (1/N) * pi_ij. We
compare it to the Monte Carlo estimate (E[phi(Z(dt))] - phi(Z(0))) / dt
over many independent restarts from the same configuration.

Observables act on arrays of positions and velocities of shape
(..., N, ndim) and return arrays of shape (...).
"""

import logging

import numpy

from topokinetic.rank import interaction_probabilities, select_leader_batch
from topokinetic.system import ParticleEnsemble
from .leader import ChooseTheLeader

__all__ = ['GeneratorReport', 'exact_generator', 'generator_check',
           'evolve_copies', 'evolve_with_backend', 'generator_observables']

_log = logging.getLogger(__name__)


# Observables of particle 0, used by the generator check

def _one(x, v):
    return numpy.ones(x.shape[:-2])


def _v0(x, v):
    return v[..., 0, 0]


def _x0v0(x, v):
    return x[..., 0, 0] * v[..., 0, 0]


def _x0sq(x, v):
    return x[..., 0, 0]**2


def _cos_v0(x, v):
    return numpy.cos(v[..., 0, 0]) * numpy.exp(-0.1 * x[..., 0, 0]**2)


generator_observables = {'one': _one, 'v0': _v0, 'x0v0': _x0v0,
                         'x0sq': _x0sq, 'cosv0': _cos_v0}


class GeneratorReport(object):

    def __init__(self, mc_rate, exact_rate, stderr, samples):
        self.mc_rate = mc_rate
        self.exact_rate = exact_rate
        self.stderr = stderr
        self.samples = samples

    @property
    def z(self):
        diff = self.mc_rate - self.exact_rate
        if self.stderr > 0:
            return diff / self.stderr
        return 0.0 if abs(diff) < 1e-12 else float('inf')

    def __str__(self):
        return 'mc_rate={:.6g} exact_rate={:.6g} z={:.3g}'.format(self.mc_rate,
                                                                   self.exact_rate, self.z)


def exact_generator(position, velocity, table, metric, phi, h=1e-5):
    """
    Evaluate L phi at the configuration (`position`, `velocity`) by
    direct enumeration of the collisions. The transport term is
    computed by central differences with relative step `h`.
    """
    x = numpy.array(position, dtype=float).reshape(len(position), -1)
    v = numpy.array(velocity, dtype=float).reshape(len(velocity), -1)
    N, ndim = x.shape
    phi0 = float(phi(x, v))

    # Transport
    transport = 0.0
    for i in range(N):
        for a in range(ndim):
            if v[i, a] == 0:
                continue
            dx = h * max(1.0, abs(x[i, a]))
            xp, xm = x.copy(), x.copy()
            xp[i, a] += dx
            xm[i, a] -= dx
            transport += v[i, a] * (float(phi(xp, v)) - float(phi(xm, v))) / (2 * dx)

    # Collisions
    collision = 0.0
    for i in range(N):
        pi = interaction_probabilities(x, metric, table, i)
        for j in range(N):
            if j == i or pi[j] == 0:
                continue
            vn = v.copy()
            vn[i] = v[j]
            collision += pi[j] * (float(phi(x, vn)) - phi0)
    return transport + collision


def evolve_copies(x, v, table, metric, dt, rng):
    """
    Evolve the S independent configurations `x`, `v` of shape
    (S, N, ndim) up to time `dt`, in place.

    Each copy consumes the random numbers in the order of
    `ChooseTheLeader`: waiting time, follower, uniform for the rank.
    A single copy evolved with a given stream follows the same
    collisions as `evolve_with_backend`.
    """
    S, N, _ = x.shape
    t = numpy.zeros(S)
    active = numpy.arange(S)
    while len(active) > 0:
        tau = rng.exponential(1.0 / N, size=len(active))
        hit = t[active] + tau <= dt
        done = active[~hit]
        # Free flight to dt for copies without further collisions
        x[done] += (dt - t[done])[:, numpy.newaxis, numpy.newaxis] * v[done]
        active, tau = active[hit], tau[hit]
        if len(active) == 0:
            break
        x[active] += tau[:, numpy.newaxis, numpy.newaxis] * v[active]
        t[active] += tau
        follower = rng.integers(N, size=len(active))
        u = rng.random(len(active))
        leader = select_leader_batch(x[active], metric, table, follower, u)
        v[active, follower] = v[active, leader]
    return x, v


def evolve_with_backend(position, velocity, table, metric, dt, rng):
    """
    Evolve one configuration up to time `dt` with the `ChooseTheLeader`
    backend and return its positions and velocities.

    The ensemble does not fold positions; ranks are measured with
    `metric`.
    """
    ens = ParticleEnsemble(position, velocity, rng=rng)
    backend = ChooseTheLeader(ens, table.kernel, metric=metric, table=table)
    backend.run_until(dt)
    return ens.position, ens.velocity


def generator_check(position, velocity, table, metric, phi, dt, samples, rng,
                    chunk=100000, vectorized=True):
    """
    Compare the Monte Carlo rate of change of E[phi] over a short
    time `dt`, estimated from `samples` restarts, with the exact
    generator. `phi` is a function or the name of one of
    `generator_observables`. Return a `GeneratorReport`.

    Restarts are evolved in batches by `evolve_copies`, or one by one
    through the `ChooseTheLeader` backend if `vectorized` is False.
    Positions are never folded during the evolution, the metric takes
    care of periodic images.
    """
    if isinstance(phi, str):
        phi = generator_observables[phi]
    x0 = numpy.array(position, dtype=float).reshape(len(position), -1)
    v0 = numpy.array(velocity, dtype=float).reshape(len(velocity), -1)
    phi0 = float(phi(x0, v0))

    total, total_sq, done = 0.0, 0.0, 0
    while done < samples:
        n = min(chunk, samples - done)
        if vectorized:
            x = numpy.repeat(x0[numpy.newaxis], n, axis=0)
            v = numpy.repeat(v0[numpy.newaxis], n, axis=0)
            x, v = evolve_copies(x, v, table, metric, dt, rng)
        else:
            runs = [evolve_with_backend(x0, v0, table, metric, dt, rng) for _ in range(n)]
            x = numpy.array([r[0] for r in runs])
            v = numpy.array([r[1] for r in runs])
        delta = (phi(x, v) - phi0) / dt
        total += numpy.sum(delta)
        total_sq += numpy.sum(delta**2)
        done += n

    mean = total / samples
    var = max(total_sq / samples - mean**2, 0.0) * samples / max(samples - 1, 1)
    report = GeneratorReport(mean, exact_generator(x0, v0, table, metric, phi),
                             (var / samples)**0.5, samples)
    _log.info('generator check: %s', report)
    return report
