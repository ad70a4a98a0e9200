# This file is part of topokinetic

"""
Propagation of chaos on the statistic grid.

The joint law of the states of particles 0 and 1, estimated across
independent runs, is compared with the product of its marginals on a
coarse grid of `xbins` spatial bins times `vbins` velocity bins. The
empirical L1 distance is biased upwards by sampling noise; its floor
is estimated by pairing particle 0 of a run with particle 1 of a
different run, which makes the pair independent.
"""

import numpy

__all__ = ['ChaosEstimate', 'coarse_bins', 'joint_distance', 'chaos_metric']


def coarse_bins(pairs, grid, xbins=2, vbins=None):
    """
    Map the (cell, velocity) bins in `pairs`, shape (..., 2), to the
    index of a coarse bin. Particles outside the grid map to -1.
    """
    nv = grid.nv if vbins is None else min(vbins, grid.nv)
    xbins = min(xbins, grid.nx)
    ix, iv = pairs[..., 0], pairs[..., 1]
    cx = ix * xbins // grid.nx
    cv = iv * nv // grid.nv
    out = cx * nv + cv
    return numpy.where((ix < 0) | (iv < 0), -1, out), xbins * nv


def joint_distance(a, b, nbins):
    """
    L1 distance between the empirical joint law of the samples (a, b)
    and the product of their empirical marginals. Samples with a
    negative bin are dropped.
    """
    keep = (a >= 0) & (b >= 0)
    a, b = a[keep], b[keep]
    if len(a) == 0:
        return float('nan')
    joint = numpy.zeros((nbins, nbins))
    numpy.add.at(joint, (a, b), 1.0)
    joint /= len(a)
    product = numpy.outer(joint.sum(axis=1), joint.sum(axis=0))
    return float(numpy.sum(numpy.abs(joint - product)))


class ChaosEstimate(object):

    """Chaos metric at one time and its independence floor."""

    def __init__(self, t, metric, floor, floor_stderr):
        self.t = t
        self.metric = metric
        self.floor = floor
        self.floor_stderr = floor_stderr

    @property
    def excess(self):
        """Metric in excess of the floor."""
        return self.metric - self.floor

    def compatible(self, sigmas=3.0):
        """True if the metric is within `sigmas` floor standard errors of the floor."""
        return abs(self.excess) <= sigmas * max(self.floor_stderr, 1e-300)

    def __repr__(self):
        return '<ChaosEstimate t={:g} metric={:.4g} floor={:.4g}+-{:.2g}>'.format(
            self.t, self.metric, self.floor, self.floor_stderr)


def chaos_metric(marginal, t, xbins=2, vbins=None, shuffles=20, rng=None):
    """
    Return the `ChaosEstimate` of the `EmpiricalMarginal` `marginal`
    at time `t`.

    The floor is the mean of the metric over `shuffles` random
    derangements of the runs of particle 1; its standard error is the
    spread of the shuffled values. With fewer than two runs the floor
    is not defined and is NaN.
    """
    k = marginal.index(t)
    bins, nbins = coarse_bins(marginal.pairs[:, k], marginal.grid, xbins, vbins)
    a, b = bins[:, 0], bins[:, 1]
    metric = joint_distance(a, b, nbins)
    M = len(a)
    if M < 2:
        return ChaosEstimate(t, metric, float('nan'), float('nan'))
    if rng is None:
        rng = numpy.random.default_rng(0)
    floors = []
    for _ in range(shuffles):
        # A random cyclic shift is a derangement of the runs
        shift = int(rng.integers(1, M))
        floors.append(joint_distance(a, numpy.roll(b, shift), nbins))
    floors = numpy.array(floors)
    floor_stderr = floors.std(ddof=1) if shuffles > 1 else 0.0
    return ChaosEstimate(t, metric, float(floors.mean()), float(floor_stderr))
