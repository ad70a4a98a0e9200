# This file is part of topokinetic

"""
Exact law of the rank of a particle in an i.i.d. cloud.

If the other N-2 particles are i.i.d. with density rho, the number of
them falling closer to x_1 than x_2 is binomial with parameter the
partial mass p = M_rho(x_1, |x_2 - x_1|), so that

    P(R = k) = C(N-2, k-1) p^(k-1) (1-p)^(N-1-k),   k = 1, ..., N-1
"""

import math
import logging

import numpy
from scipy import stats

from topokinetic.kernel import DomainError
from topokinetic.system import PeriodicLine
from .proximity import rank_of

__all__ = ['rank_distribution_oracle', 'rank_law_check', 'RankLawReport',
           'pool_bins']

_log = logging.getLogger(__name__)


def rank_distribution_oracle(p, N):
    """
    Return the probabilities P_R of the ranks R = 1, ..., N-1 as an
    array of length N-1.
    """
    if not 0 <= p <= 1:
        raise DomainError('partial mass must be in [0,1], got %s' % p)
    if N < 2:
        raise ValueError('need at least two particles, got N=%d' % N)
    prob = stats.binom.pmf(numpy.arange(N - 1), N - 2, p)
    return prob / math.fsum(prob)


def pool_bins(observed, expected, min_expected=5.0):
    """
    Merge adjacent bins until every bin has an expected count of at
    least `min_expected`. A leftover group at the end is merged into
    the last complete one.
    """
    obs_pooled, exp_pooled = [], []
    obs, exp = 0.0, 0.0
    for o, e in zip(observed, expected):
        obs += o
        exp += e
        if exp >= min_expected:
            obs_pooled.append(obs)
            exp_pooled.append(exp)
            obs, exp = 0.0, 0.0
    if exp > 0 or obs > 0:
        if len(exp_pooled) > 0:
            obs_pooled[-1] += obs
            exp_pooled[-1] += exp
        else:
            obs_pooled.append(obs)
            exp_pooled.append(exp)
    return numpy.array(obs_pooled), numpy.array(exp_pooled)


class RankLawReport(object):

    """Chi-square comparison of sampled ranks with the binomial law."""

    def __init__(self, N, p, trials, counts, expected, statistic, pvalue):
        self.N = N
        self.p = p
        self.trials = trials
        self.counts = counts
        self.expected = expected
        self.statistic = statistic
        self.pvalue = pvalue

    def passed(self, significance=0.001):
        return self.pvalue > significance

    def __str__(self):
        return 'rank law N=%d p=%g: chi2=%.4g pvalue=%.4g' % \
            (self.N, self.p, self.statistic, self.pvalue)


def rank_law_check(N, rng, trials=100000, s=0.2, L=1.0, chunk=20000, vectorized=True):
    """
    Sample the rank R(0,1) of particle 1 seen from particle 0 when
    the other N-2 particles are uniform on a periodic segment of
    length `L`, with particle 0 at the origin and particle 1 at
    distance `s`. The histogram of R is compared to the binomial law
    with partial mass p = min(2s/L, 1) by a chi-square test.

    Ranks are counted on whole batches, or trial by trial with
    `rank_of` if `vectorized` is False. Both consume the same random
    numbers and give the same histogram.
    """
    metric = PeriodicLine(L)
    p = min(2 * s / L, 1.0)
    counts = numpy.zeros(N - 1, dtype=int)
    done = 0
    while done < trials:
        n = min(chunk, trials - done)
        x = numpy.empty((n, N, 1))
        x[:, 0] = 0.0
        x[:, 1] = s
        x[:, 2:] = rng.uniform(0.0, L, size=(n, N - 2, 1))
        if vectorized:
            d2 = metric.distance_sq(x, x[:, :1, :])
            # Ties with particle 1 go after it, since their index is larger
            R = 1 + numpy.sum(d2[:, 2:] < d2[:, 1:2], axis=1)
        else:
            R = numpy.array([rank_of(xk, metric, 0, 1)[0] for xk in x], dtype=int)
        counts += numpy.bincount(R - 1, minlength=N - 1)
        done += n
    expected = rank_distribution_oracle(p, N) * trials
    obs, exp = pool_bins(counts, expected)
    if len(obs) < 2:
        statistic, pvalue = 0.0, 1.0
    else:
        statistic, pvalue = stats.chisquare(obs, exp)
    report = RankLawReport(N, p, trials, counts, expected, float(statistic), float(pvalue))
    _log.info('%s', report)
    return report
