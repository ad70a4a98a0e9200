# This file is part of topokinetic

"""
Smooth test functions on [0,1] with closed-form second derivative.

They expose the same `compute(x, order)` interface as `RankKernel`,
so that expansion checks accept either of them.
"""

import numpy

from topokinetic.kernel import RankKernel, NonSmoothKernel

__all__ = ['SmoothFunction', 'functions', 'as_smooth']


class SmoothFunction(object):

    def __init__(self, name, f, d1, d2):
        self.name = name
        self._db = {0: f, 1: d1, 2: d2}
        self.smooth = True

    def __str__(self):
        return self.name

    def compute(self, x, order=0):
        x = numpy.asarray(x, dtype=float)
        value = self._db[order](x) + numpy.zeros_like(x)
        if value.ndim == 0:
            return float(value)
        return value

    def __call__(self, x):
        return self.compute(x, 0)


functions = {
    'const': SmoothFunction('const', lambda x: 1.0, lambda x: 0.0, lambda x: 0.0),
    'x': SmoothFunction('x', lambda x: x, lambda x: 1.0, lambda x: 0.0),
    'xsq': SmoothFunction('xsq', lambda x: x**2, lambda x: 2 * x, lambda x: 2.0),
    'xcube': SmoothFunction('xcube', lambda x: x**3, lambda x: 3 * x**2, lambda x: 6 * x),
    'exp': SmoothFunction('exp', numpy.exp, numpy.exp, numpy.exp),
    'sin': SmoothFunction('sin', lambda x: numpy.sin(numpy.pi * x),
                          lambda x: numpy.pi * numpy.cos(numpy.pi * x),
                          lambda x: -numpy.pi**2 * numpy.sin(numpy.pi * x)),
}
"""Named smooth functions, used by `verify bernstein --f name`."""


def as_smooth(f):
    """
    Return `f` as an object with a `compute(x, order)` method and a
    C^2 guarantee. `f` can be a name of `functions`, a `RankKernel`
    or a `SmoothFunction`.
    """
    if isinstance(f, str):
        if f in functions:
            return functions[f]
        raise ValueError('unknown function %s, available ones are %s' %
                         (f, sorted(functions)))
    if not hasattr(f, 'compute'):
        raise NonSmoothKernel('%s has no second derivative' % f)
    if isinstance(f, RankKernel) and not f.smooth:
        raise NonSmoothKernel('kernel %s is not twice differentiable' % f)
    return f
