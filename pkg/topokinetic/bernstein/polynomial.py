# This file is part of topokinetic

"""
Bernstein polynomials and shifted binomial expectations.

Binomial weights are computed by `scipy.stats.binom.pmf`, which stays
accurate for sizes well beyond 10^4, and sums are accumulated with
`math.fsum`.
"""

import math

import numpy
from scipy import stats

from topokinetic.kernel import DomainError

__all__ = ['binomial_weights', 'bernstein_eval', 'shifted_binomial_expectation',
           'SHIFTS']

SHIFTS = ((0, 0), (1, 1), (2, 2), (1, 2))
"""Allowed (a, b) shifts of `shifted_binomial_expectation`."""


def _check_point(x):
    if not 0 <= x <= 1:
        raise DomainError('point must be in [0,1], got %s' % x)


def _values(f, grid):
    # Vectorized call if possible, pointwise otherwise
    try:
        values = numpy.asarray(f(grid), dtype=float)
        if values.shape == grid.shape:
            return values
    except (TypeError, ValueError):
        pass
    return numpy.array([f(xi) for xi in grid], dtype=float)


def binomial_weights(n, p):
    """Binomial probabilities C(n,i) p^i (1-p)^(n-i), i = 0, ..., n."""
    _check_point(p)
    return stats.binom.pmf(numpy.arange(n + 1), n, p)


def bernstein_eval(f, n, x):
    """
    Return the n-th Bernstein polynomial of `f` at `x`

        B_n(f;x) = sum_{i=0}^n f(i/n) C(n,i) x^i (1-x)^(n-i)
    """
    if n < 1:
        raise ValueError('degree must be at least 1, got %s' % n)
    _check_point(x)
    w = binomial_weights(n, x)
    values = _values(f, numpy.arange(n + 1) / float(n))
    return math.fsum(w * values)


def shifted_binomial_expectation(K, p, M, shift=(1, 1)):
    """
    Return E[K((R+a)/(M+b))] for R binomial with M trials and
    success probability `p`, where (a, b) = `shift`.

    The shifts (1,1), (2,2) and (1,2) give the expectations of the
    kernel evaluated at the rank of a particle when M other particles
    are i.i.d. and p is the partial mass of the ball; (0,0) gives the
    Bernstein polynomial B_M(K;p).
    """
    shift = tuple(shift)
    if shift not in SHIFTS:
        raise ValueError('shift %s not in %s' % (shift, SHIFTS))
    if M < 1:
        raise ValueError('need at least one trial, got M=%s' % M)
    a, b = shift
    w = binomial_weights(M, p)
    r = (numpy.arange(M + 1) + a) / float(M + b)
    return math.fsum(w * _values(K, r))
