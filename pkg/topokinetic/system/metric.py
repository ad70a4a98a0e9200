# This file is part of topokinetic

"""
Metrics used to rank particles by proximity.

Positions are arrays of shape (..., N, ndim). All metrics expose
squared distances, so that ranks can be computed without square roots.
"""

import numpy

__all__ = ['Euclidean', 'PeriodicLine', 'metric_from_dict']


class Euclidean(object):

    """Free space in 1 or 2 dimensions."""

    def __init__(self, ndim=1):
        if ndim not in (1, 2):
            raise ValueError('only 1 and 2 dimensions are supported, got %s' % ndim)
        self.ndim = ndim

    def __str__(self):
        return 'euclidean (ndim=%d)' % self.ndim

    def __eq__(self, other):
        return isinstance(other, Euclidean) and self.ndim == other.ndim

    def __hash__(self):
        return hash(str(self))

    @property
    def periodic(self):
        return False

    def to_dict(self):
        return {'type': 'euclidean', 'ndim': self.ndim}

    def displacement(self, position, origin):
        """Displacement vectors from `origin` to `position`."""
        return position - origin

    def distance_sq(self, position, origin):
        """Squared distances of `position` from `origin`, summed over the last axis."""
        dr = self.displacement(position, origin)
        return numpy.sum(dr * dr, axis=-1)

    def distance(self, position, origin):
        return numpy.sqrt(self.distance_sq(position, origin))

    def fold(self, position):
        return position


class PeriodicLine(object):

    """Segment [0, L) with periodic boundary conditions."""

    def __init__(self, L=1.0):
        if not L > 0:
            raise ValueError('domain length must be positive, got %s' % L)
        self.L = float(L)
        self.ndim = 1

    def __str__(self):
        return 'periodic line (L=%g)' % self.L

    def __eq__(self, other):
        return isinstance(other, PeriodicLine) and self.L == other.L

    def __hash__(self):
        return hash(str(self))

    @property
    def periodic(self):
        return True

    def to_dict(self):
        return {'type': 'periodic', 'L': self.L}

    def displacement(self, position, origin):
        # Nearest image convention, |dr| = min(|d|, L-|d|)
        dr = position - origin
        return dr - numpy.rint(dr / self.L) * self.L

    def distance_sq(self, position, origin):
        dr = self.displacement(position, origin)
        return numpy.sum(dr * dr, axis=-1)

    def distance(self, position, origin):
        return numpy.sqrt(self.distance_sq(position, origin))

    def fold(self, position):
        """Fold positions back into [0, L)."""
        folded = numpy.mod(position, self.L)
        # mod can round up to L for tiny negative values
        return numpy.where(folded >= self.L, 0.0, folded)


def metric_from_dict(db):
    """
    Return a metric from a config dict, e.g. `{type: periodic, L: 1.0}`
    or `{type: euclidean, ndim: 2}`. A bare string selects the type
    with default parameters.
    """
    if db is None:
        return Euclidean()
    if isinstance(db, str):
        db = {'type': db}
    db = dict(db)
    kind = db.pop('type', 'euclidean').lower()
    if kind in ('euclidean', 'free'):
        return Euclidean(**db)
    if kind in ('periodic', 'periodicline', 'periodic_line', 'torus'):
        return PeriodicLine(**db)
    raise ValueError('unknown metric %s' % kind)
