# This file is part of topokinetic

"""
Proximity ranks and leader selection.

The rank R(i,j) of particle j with respect to particle i is the
position of j in the list of the other particles sorted by distance
from i, starting from 1 for the nearest neighbour. Ties in distance
are broken by particle index, smaller indices first. The scaled rank
is r(i,j) = R(i,j) / (N-1).

Particle indices are 0-based.
"""

import numpy

from topokinetic.kernel import sample_rank

__all__ = ['RankView', 'rank_view', 'rank_of', 'interaction_probabilities',
           'select_leader', 'select_leader_batch']


def _as_positions(positions):
    positions = numpy.asarray(positions, dtype=float)
    if positions.ndim == 1:
        positions = positions.reshape(-1, 1)
    return positions


def _check_index(i, N):
    if not 0 <= i < N:
        raise IndexError('particle index %s out of range for N=%d' % (i, N))


def _distances_from(positions, metric, i):
    # Squared distances from particle i, with i itself placed first
    # so that it always has rank 0
    d2 = metric.distance_sq(positions, positions[i])
    d2[i] = -1.0
    return d2


class RankView(object):

    """Other particles sorted by distance from a focal particle."""

    def __init__(self, focal, order, distances):
        self.focal = focal
        self.order = order
        """Indices of the other particles, nearest first."""
        self.distances = distances

    def __len__(self):
        return len(self.order)

    def rank(self, j):
        """1-based rank of particle `j`."""
        where = numpy.flatnonzero(self.order == j)
        if len(where) == 0:
            raise IndexError('particle %s is not ranked from %s' % (j, self.focal))
        return int(where[0]) + 1


def rank_view(positions, metric, i):
    """Return the `RankView` of all particles seen from particle `i`."""
    positions = _as_positions(positions)
    _check_index(i, len(positions))
    d2 = _distances_from(positions, metric, i)
    order = numpy.argsort(d2, kind='stable')[1:]
    return RankView(i, order, numpy.sqrt(d2[order]))


def rank_of(positions, metric, i, j):
    """
    Return the rank (R, r) of particle `j` with respect to particle `i`,
    where R is an integer in 1, ..., N-1 and r = R / (N-1).

    The rank of a particle with respect to itself is (0, 0.0).
    """
    positions = _as_positions(positions)
    N = len(positions)
    _check_index(i, N)
    _check_index(j, N)
    if i == j:
        return 0, 0.0
    d2 = _distances_from(positions, metric, i)
    index = numpy.arange(N)
    # The focal particle is counted as closer than j, hence no + 1
    R = numpy.sum(d2 < d2[j]) + numpy.sum((d2 == d2[j]) & (index < j))
    return int(R), R / float(N - 1)


def interaction_probabilities(positions, metric, table, i):
    """
    Return the probabilities pi_ij = K^N(r(i,j)) that particle `i`
    follows particle j, as a vector of length N with pi_ii = 0.
    """
    positions = _as_positions(positions)
    N = len(positions)
    _check_index(i, N)
    if table.N != N:
        raise ValueError('table built for N=%d, got %d particles' % (table.N, N))
    d2 = _distances_from(positions, metric, i)
    order = numpy.argsort(d2, kind='stable')
    ranks = numpy.empty(N, dtype=int)
    ranks[order] = numpy.arange(N)
    return table.weights[ranks]


def select_leader(positions, metric, table, i, u, method='select'):
    """
    Return the index of the particle at proximity rank k from `i`,
    where k = sample_rank(table, u).

    With `method='select'` the k-th nearest neighbour is found by
    partial selection, in O(N) operations. With `method='sort'` all
    the particles are sorted. Both methods give identical results.
    """
    positions = _as_positions(positions)
    N = len(positions)
    k = sample_rank(table, u)
    d2 = _distances_from(positions, metric, i)
    if method == 'sort':
        return int(numpy.argsort(d2, kind='stable')[k])
    elif method == 'select':
        dk = numpy.partition(d2, k)[k]
        closer = numpy.count_nonzero(d2 < dk)
        tied = numpy.flatnonzero(d2 == dk)
        return int(tied[k - closer])
    else:
        raise ValueError('unknown selection method %s' % method)


def select_leader_batch(positions, metric, table, follower, u):
    """
    Vectorized leader selection over independent configurations.

    `positions` has shape (S, N, ndim), `follower` and `u` have shape
    (S,). Return the array of leader indices.
    """
    positions = numpy.asarray(positions, dtype=float)
    S = positions.shape[0]
    rows = numpy.arange(S)
    origin = positions[rows, follower][:, numpy.newaxis, :]
    d2 = metric.distance_sq(positions, origin)
    d2[rows, follower] = -1.0
    k = sample_rank(table, u)
    order = numpy.argsort(d2, axis=1, kind='stable')
    return order[rows, k]
