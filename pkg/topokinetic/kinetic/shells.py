# This file is part of topokinetic

"""
Partial masses and shell weights.

Seen from cell m, the other cells are grouped in shells of equal
periodic distance j dx, j = 0, ..., Nx // 2. The cumulative masses of
the shells sample the partial mass M(x_m, s) of the density, and the
kernel weight of shell j is the increment of the antiderivative of
the kernel between consecutive cumulative masses

    w_j = Kint(M_j) - Kint(M_{j-1})

so that the weights of a row always sum to Kint(1) - Kint(0) = 1.
"""

import math

import numpy
from scipy.integrate import quad

from .state import EmptyDensity

__all__ = ['PartialMassTable', 'build_partial_mass_table', 'partial_mass',
           'change_of_variable_check', 'cell_distance']


def cell_distance(Nx):
    """Periodic distance, in cells, between all pairs of cells."""
    m = numpy.arange(Nx)
    d = numpy.abs(m[:, numpy.newaxis] - m[numpy.newaxis, :])
    return numpy.minimum(d, Nx - d)


class PartialMassTable(object):

    """Distance-ordered mass shells around every cell."""

    def __init__(self, shell_mass, cumulative, weights, total_mass):
        self.shell_mass = shell_mass
        """Normalized mass of shell j around cell m, shape (Nx, Nx//2 + 1)."""
        self.cumulative = cumulative
        """Cumulative masses M_j, the last one is exactly 1."""
        self.weights = weights
        """Kernel weights w_j of the shells."""
        self.total_mass = total_mass
        self.Nx = shell_mass.shape[0]

    @property
    def kbar(self):
        """Kernel weight per unit mass of each shell, zero for empty shells."""
        out = numpy.zeros_like(self.weights)
        full = self.shell_mass > 0
        out[full] = self.weights[full] / self.shell_mass[full]
        return out

    def kernel_matrix(self):
        """Matrix Kbar[m, m'] of the kernel weight per unit mass of cell m' seen from m."""
        return self.kbar[numpy.arange(self.Nx)[:, numpy.newaxis], cell_distance(self.Nx)]


def build_partial_mass_table(state, kernel):
    """Build the `PartialMassTable` of the density of `state` for `kernel`."""
    rho = state.rho
    total = math.fsum(rho) * state.dx
    if total <= 0:
        raise EmptyDensity('total mass is zero')
    mass = rho * state.dx / total
    Nx = state.Nx
    J = Nx // 2
    shell = numpy.empty((Nx, J + 1))
    shell[:, 0] = mass
    for j in range(1, J + 1):
        if 2 * j == Nx:
            # The two cells at distance L/2 coincide
            shell[:, j] = numpy.roll(mass, -j)
        else:
            shell[:, j] = numpy.roll(mass, -j) + numpy.roll(mass, j)
    cumulative = numpy.minimum(numpy.cumsum(shell, axis=1), 1.0)
    cumulative[:, -1] = 1.0
    kint = kernel.compute(cumulative, 'antiderivative')
    weights = numpy.diff(kint, axis=1, prepend=0.0)
    return PartialMassTable(shell, cumulative, weights, total)


def partial_mass(state, m, s, table=None):
    """
    Mass of the density in the cells whose center lies within periodic
    distance `s` of the center of cell `m`, relative to the total
    mass. It is 1 when 2s >= L.
    """
    if s < 0:
        raise ValueError('radius must be nonnegative, got %s' % s)
    if 2 * s >= state.L:
        return 1.0
    if table is None:
        from topokinetic.kernel import RankKernel
        table = build_partial_mass_table(state, RankKernel('constant'))
    j = int(math.floor(s / state.dx * (1 + 1e-12)))
    j = min(j, table.cumulative.shape[1] - 1)
    return float(table.cumulative[m, j])


def change_of_variable_check(state, H, m, r, kernel=None, primitive=None, points=None,
                             table=None):
    """
    Compare the two sides of the change of variable p = M(x_m, s):

        lhs = sum over shells within r of int_{M_{j-1}}^{M_j} H(p) dp
        rhs = int_0^{M(x_m, r)} H(p) dp

    The integrals use the exact `primitive` of H if given, adaptive
    quadrature otherwise (`points` are passed to `scipy.integrate.quad`).
    A prebuilt `PartialMassTable` of the state can be passed as `table`.
    Return the tuple (lhs, rhs).
    """
    if kernel is None:
        from topokinetic.kernel import RankKernel
        kernel = RankKernel('constant')
    if table is None:
        table = build_partial_mass_table(state, kernel)
    if 2 * r >= state.L:
        jmax = table.cumulative.shape[1] - 1
    else:
        jmax = min(int(math.floor(r / state.dx * (1 + 1e-12))), table.cumulative.shape[1] - 1)
    levels = numpy.concatenate([[0.0], table.cumulative[m, :jmax + 1]])

    if primitive is not None:
        def integral(a, b):
            return primitive(b) - primitive(a)
    else:
        def integral(a, b):
            if b <= a:
                return 0.0
            inner = None
            if points is not None:
                inner = [p for p in points if a < p < b] or None
            return quad(H, a, b, points=inner, limit=200, epsabs=1e-13, epsrel=1e-13)[0]

    lhs = math.fsum(integral(a, b) for a, b in zip(levels[:-1], levels[1:]))
    rhs = integral(0.0, levels[-1])
    return lhs, rhs
