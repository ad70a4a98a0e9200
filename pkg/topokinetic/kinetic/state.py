# This file is part of topokinetic

"""
One-particle density on a periodic segment with a finite set of
velocities.

`f[m, a] * dx` is the mass of particles of velocity class a in cell
m, whose center is x_m = (m + 1/2) dx.
"""

import copy
import math

import numpy

__all__ = ['KineticState', 'kinetic_initial', 'EmptyDensity']


class EmptyDensity(ValueError):
    """Raised when the density has zero total mass."""
    pass


class KineticState(object):

    """Gridded density f(x, v) and time."""

    def __init__(self, L, Nx, velocities, f=None, t=0.0):
        self.L = float(L)
        self.Nx = int(Nx)
        self.velocities = numpy.array(velocities, dtype=float).ravel()
        if f is None:
            f = numpy.ones((self.Nx, self.Nv)) / (self.L * self.Nv)
        self.f = numpy.array(f, dtype=float)
        if self.f.shape != (self.Nx, self.Nv):
            raise ValueError('density has shape %s, expected %s' %
                             (self.f.shape, (self.Nx, self.Nv)))
        if numpy.any(self.f < 0):
            raise ValueError('density must be nonnegative')
        self.t = float(t)

    def __copy__(self):
        cls = self.__class__
        result = cls.__new__(cls)
        result.__dict__.update(self.__dict__)
        result.f = self.f.copy()
        result.velocities = self.velocities.copy()
        return result

    def copy(self):
        return copy.copy(self)

    @property
    def Nv(self):
        return len(self.velocities)

    @property
    def dx(self):
        return self.L / self.Nx

    @property
    def x(self):
        """Cell centers."""
        return (numpy.arange(self.Nx) + 0.5) * self.dx

    @property
    def rho(self):
        """Spatial density."""
        return self.f.sum(axis=1)

    @property
    def mass(self):
        return math.fsum(self.f.ravel()) * self.dx

    def velocity_marginal(self):
        """Mass of each velocity class."""
        return self.f.sum(axis=0) * self.dx

    def inhomogeneity(self):
        """L1 distance of the density from the uniform one of the same mass."""
        return float(numpy.sum(numpy.abs(self.rho - self.mass / self.L)) * self.dx)

    def normalize(self):
        """Rescale f to unit mass."""
        mass = self.mass
        if mass <= 0:
            raise EmptyDensity('cannot normalize a density with zero mass')
        self.f /= mass
        return self

    def report(self):
        txt = 'kinetic state on L={:g} with {} cells and {} velocities\n'.format(
            self.L, self.Nx, self.Nv)
        txt += 'velocities: {}\n'.format(self.velocities.tolist())
        txt += 'mass: {:.15g}\n'.format(self.mass)
        return txt


def kinetic_initial(db, L, Nx, velocities):
    """
    Initial kinetic state from the config dict `db`, normalized to
    unit mass. Valid types are

    - `homogeneous`: f = g_a / L, with velocity weights `weights`
    - `cosine`: f = g_a (1 + amplitude cos(2 pi (mode x / L + a / Nv))) / L,
      a spatial modulation shifted for each velocity class
    - `gaussian`: periodic gaussian of `center` and `width`, per-class
      centers shifted by `shift`
    - `explicit`: full table `f` of shape (Nx, Nv)
    """
    db = dict(db) if db is not None else {}
    kind = db.pop('type', 'homogeneous').lower()
    state = KineticState(L, Nx, velocities)
    Nv = state.Nv
    weights = numpy.asarray(db.pop('weights', numpy.ones(Nv)), dtype=float)
    if weights.shape != (Nv,) or numpy.any(weights < 0) or weights.sum() <= 0:
        raise ValueError('weights must be %d nonnegative numbers' % Nv)
    g = weights / weights.sum()
    x = state.x[:, numpy.newaxis]
    a = numpy.arange(Nv)[numpy.newaxis, :]
    if kind == 'homogeneous':
        f = numpy.ones((Nx, 1)) * g / L
    elif kind == 'cosine':
        amplitude = db.pop('amplitude', 0.5)
        mode = db.pop('mode', 1)
        if not 0 <= amplitude <= 1:
            raise ValueError('amplitude must be in [0,1], got %s' % amplitude)
        f = g * (1 + amplitude * numpy.cos(2 * numpy.pi * (mode * x / L + a / float(Nv)))) / L
    elif kind == 'gaussian':
        center = db.pop('center', L / 2)
        width = db.pop('width', L / 10)
        shift = db.pop('shift', 0.0)
        d = x - (center + shift * a)
        d = d - numpy.rint(d / L) * L
        f = g * numpy.exp(-d**2 / (2 * width**2))
    elif kind == 'explicit':
        f = numpy.array(db.pop('f'), dtype=float)
    else:
        raise ValueError('unknown kinetic initial condition %s' % kind)
    for key in db:
        raise ValueError('unknown key %s for %s initial condition' % (key, kind))
    state.f = numpy.array(f, dtype=float).reshape(Nx, Nv)
    if numpy.any(state.f < 0):
        raise ValueError('initial density must be nonnegative')
    return state.normalize()
