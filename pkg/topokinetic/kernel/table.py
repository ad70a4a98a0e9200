# This file is part of topokinetic

"""
Discrete kernel tables.

A table holds the normalized weights K^N(k/(N-1)) of the proximity
ranks k = 1, ..., N-1 of a system of N particles and is used to sample
the rank of the leader at every collision.

The arrays are indexed by the integer rank, so that `weights[0]` (the
rank of a particle with respect to itself) is always zero and
`weights[k]` is the probability to pick the k-th nearest neighbour.
"""

import math
import logging

import numpy

from .kernel import DegenerateKernel

__all__ = ['DiscreteKernelTable', 'build_discrete_table', 'sample_rank']

_log = logging.getLogger(__name__)


class DiscreteKernelTable(object):

    """Normalized rank weights of a kernel for N particles."""

    def __init__(self, kernel, N, weights, s_n):
        self.kernel = kernel
        self.N = N
        self.weights = numpy.asarray(weights, dtype=float)
        self.cdf = numpy.cumsum(self.weights)
        # Last entry must be exactly one, u < 1 then always falls in a bin
        self.cdf[-1] = 1.0
        self.s_n = s_n
        self.weights.setflags(write=False)
        self.cdf.setflags(write=False)

    def __str__(self):
        return 'table of %s for N=%d' % (self.kernel, self.N)

    def __len__(self):
        return self.N

    @property
    def ranks(self):
        """Integer ranks 1, ..., N-1."""
        return numpy.arange(1, self.N)

    def report(self):
        return 'ranks: {}\nS^N(K): {:.12g}\n'.format(self.N - 1, self.s_n)


def build_discrete_table(kernel, N):
    """
    Return the `DiscreteKernelTable` of `kernel` for `N` particles.

    The normalizer is the Riemann sum

        S^N(K) = 1/(N-1) sum_{k=1}^{N-1} K(k/(N-1))

    and the weights are K(k/(N-1)) / ((N-1) S^N(K)).
    """
    N = int(N)
    if N < 2:
        raise ValueError('need at least two particles, got N=%d' % N)
    r = numpy.arange(1, N) / float(N - 1)
    values = kernel.compute(r, 0)
    total = math.fsum(values)
    if total <= 0:
        raise DegenerateKernel('all weights of %s vanish for N=%d' % (kernel, N))
    weights = numpy.zeros(N)
    weights[1:] = values / total
    _log.debug('built table for %s with N=%d', kernel, N)
    return DiscreteKernelTable(kernel, N, weights, total / (N - 1))


def sample_rank(table, u):
    """
    Return the rank k in 1, ..., N-1 such that k is the smallest rank
    with cdf[k] > `u`.

    `u` can be a scalar uniform number in [0,1) or an array of them,
    in which case an array of ranks is returned. Ranks with zero
    weight are never returned.
    """
    k = numpy.searchsorted(table.cdf, u, side='right')
    k = numpy.minimum(k, table.N - 1)
    if numpy.ndim(k) == 0:
        return int(k)
    return k
