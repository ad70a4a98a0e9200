"""
Library of rank kernels.

`RankKernel` instances are built on top of plain functions that
return the kernel and its derivatives on [0,1]. Each function takes
an array of ranks `r` plus the family parameters and returns the
tuple (k0, k1, k2, kint) where

- k0 = K(r)
- k1 = K'(r)
- k2 = K''(r)
- kint = int_0^r K(s) ds

All kernels are normalized to unit integral on [0,1], so that
kint(0) = 0 and kint(1) = 1.

Example:
-------

The linear kernel K(r) = 2(1-r) at r = 0.25:

    k0, k1, k2, kint = power_law(0.25, alpha=1.0)
"""

import numpy

__all__ = ['constant', 'power_law', 'uniform_cutoff', 'smooth_cutoff']

# Families for which K is twice continuously differentiable on [0,1]
# regardless of the parameters. power_law depends on alpha.
_smooth = {'constant': True, 'uniform_cutoff': False, 'smooth_cutoff': True}


def is_smooth(name, params):
    """True iff the kernel family `name` with `params` is C^2 on [0,1]."""
    if name == 'power_law':
        alpha = params.get('alpha', 0.0)
        return alpha == 0 or alpha == 1 or alpha >= 2
    return _smooth[name]


def constant(r):
    """Constant kernel, K(r) = 1."""
    r = numpy.asarray(r, dtype=float)
    return numpy.ones_like(r), numpy.zeros_like(r), numpy.zeros_like(r), r.copy()


def power_law(r, alpha, mirror=False):
    """
    Power law kernel.

    K(r) = (alpha+1) * (1-r)^alpha

    If `mirror` is True, the kernel is reflected around r=1/2, i.e.
    K(r) = (alpha+1) * r^alpha.
    """
    r = numpy.asarray(r, dtype=float)
    a = float(alpha)
    s, sign = (r, 1.0) if mirror else (1.0 - r, -1.0)
    k0 = (a + 1) * s**a
    # Derivatives blow up at s=0 for non-smooth alpha: RankKernel rejects them
    with numpy.errstate(divide='ignore', invalid='ignore'):
        if a == 0:
            k1 = numpy.zeros_like(s)
        else:
            k1 = sign * (a + 1) * a * s**(a - 1)
        if a == 0 or a == 1:
            k2 = numpy.zeros_like(s)
        else:
            k2 = (a + 1) * a * (a - 1) * s**(a - 2)
    if mirror:
        kint = s**(a + 1)
    else:
        kint = 1.0 - s**(a + 1)
    return k0, k1, k2, kint


def uniform_cutoff(r, theta):
    """
    Hard cutoff kernel.

    K(r) = 1/theta if r <= theta else 0

    This is the "react to the k nearest neighbours" rule, with k of
    the order of theta * N.
    """
    r = numpy.asarray(r, dtype=float)
    inside = r <= theta * (1 + 1e-12)
    k0 = numpy.where(inside, 1.0 / theta, 0.0)
    # Derivatives are undefined at r=theta, RankKernel rejects them
    k1 = numpy.zeros_like(r)
    k2 = numpy.zeros_like(r)
    kint = numpy.minimum(r / theta, 1.0)
    return k0, k1, k2, kint


# Quintic smootherstep s(t) = 6t^5 - 15t^4 + 10t^3 clamped to [0,1]
# and its derivatives. It is C^2 on the real line.

def _step(t):
    t = numpy.clip(t, 0.0, 1.0)
    return t**3 * (t * (6 * t - 15) + 10)


def _step_d1(t):
    inside = (t > 0) & (t < 1)
    return numpy.where(inside, 30 * t**2 * (t - 1)**2, 0.0)


def _step_d2(t):
    inside = (t > 0) & (t < 1)
    return numpy.where(inside, 60 * t * (2 * t - 1) * (t - 1), 0.0)


def _step_primitive(t):
    # int_0^t s(u) du, with s = 1 for t > 1
    tc = numpy.clip(t, 0.0, 1.0)
    inner = tc**4 * (tc * (tc - 3) + 2.5)
    return numpy.where(t > 1, t - 0.5, inner)


def smooth_cutoff(r, theta, eps):
    """
    Smoothed cutoff kernel.

    K(r) = A * s((theta + eps/2 - r) / eps)

    where s is the quintic smootherstep, so that K is flat for r <
    theta - eps/2, vanishes for r > theta + eps/2 and is C^2
    everywhere. A normalizes the kernel.
    """
    r = numpy.asarray(r, dtype=float)
    c = theta + eps / 2
    norm = eps * (_step_primitive(c / eps) - _step_primitive((c - 1.0) / eps))
    t = (c - r) / eps
    k0 = _step(t) / norm
    k1 = - _step_d1(t) / (eps * norm)
    k2 = _step_d2(t) / (eps**2 * norm)
    # Same expression as norm at r=1, so that kint(1) is exactly 1
    kint = eps * (_step_primitive(c / eps) - _step_primitive(t)) / norm
    return k0, k1, k2, kint
