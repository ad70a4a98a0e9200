# This file is part of topokinetic

"""
L1 distances between empirical and kinetic one-particle marginals.
"""

import numpy

__all__ = ['GridMismatch', 'check_grid', 'marginal_distance', 'distance_stderr',
           'noise_level']


class GridMismatch(ValueError):
    """Raised when particle and kinetic grids or velocity sets differ."""
    pass


def _kinetic_observables(f, t):
    # Accept either a KineticState or a KineticSolution
    if hasattr(f, 'times'):
        k = f.index(t)
        return f.state, f.rho[k], f.g[k]
    return f, f.rho, f.velocity_marginal()


def check_grid(grid, state):
    """Raise `GridMismatch` unless `grid` matches the cells and velocities of `state`."""
    edges = numpy.linspace(0.0, state.L, state.Nx + 1)
    if grid.velocities is None:
        raise GridMismatch('particle marginal has no velocity classes')
    if len(grid.x_edges) != len(edges) or not numpy.allclose(grid.x_edges, edges, rtol=0, atol=1e-12):
        raise GridMismatch('cells differ: %d particle bins, %d kinetic cells' %
                           (grid.nx, state.Nx))
    if len(grid.velocities) != state.Nv or numpy.any(grid.velocities != state.velocities):
        raise GridMismatch('velocity sets differ: %s and %s' %
                           (grid.velocities.tolist(), state.velocities.tolist()))


def marginal_distance(fhat, f, t):
    """
    Return the L1 distances (d_rho, d_vel) at time `t` between the
    empirical marginal `fhat` and the kinetic solution `f` (a
    `KineticSolution` or a `KineticState`)

        d_rho = sum_m |rho_hat_m - rho_m| dx
        d_vel = sum_a |g_hat_a - g_a|
    """
    state, rho, g = _kinetic_observables(f, t)
    check_grid(fhat.grid, state)
    k = fhat.index(t)
    d_rho = float(numpy.sum(numpy.abs(fhat.rho[k] - rho)) * state.dx)
    d_vel = float(numpy.sum(numpy.abs(fhat.g[k] - g)))
    return d_rho, d_vel


def distance_stderr(fhat, f, t):
    """
    Jackknife standard errors of (d_rho, d_vel), leaving out one run
    at a time.
    """
    state, rho, g = _kinetic_observables(f, t)
    check_grid(fhat.grid, state)
    k = fhat.index(t)
    M = fhat.runs
    if M < 2:
        return 0.0, 0.0
    per_run = fhat.per_run[:, k]
    total = per_run.sum(axis=0)
    # Marginals of the M samples obtained leaving out one run
    loo = (total[numpy.newaxis] - per_run) / (M - 1)
    d_rho = numpy.sum(numpy.abs(loo.sum(axis=-1) / state.dx - rho), axis=-1) * state.dx
    d_vel = numpy.sum(numpy.abs(loo.sum(axis=1) - g), axis=-1)

    def jackknife(d):
        return float(numpy.sqrt((M - 1) / float(M) * numpy.sum((d - d.mean())**2)))
    return jackknife(d_rho), jackknife(d_vel)


def noise_level(fhat, t):
    """
    Monte Carlo noise scale of the distances at time `t`: the sums of
    the per-bin standard errors of rho and g.
    """
    k = fhat.index(t)
    M = fhat.runs
    if M < 2:
        return 0.0, 0.0
    per_run = fhat.per_run[:, k]
    se_rho = per_run.sum(axis=-1).std(axis=0, ddof=1) / M**0.5
    se_g = per_run.sum(axis=1).std(axis=0, ddof=1) / M**0.5
    return float(numpy.sum(se_rho)), float(numpy.sum(se_g))
