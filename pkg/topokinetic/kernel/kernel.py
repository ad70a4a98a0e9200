# This file is part of topokinetic

"""Rank kernel class and factory."""

import numpy

from topokinetic.kernel import library

__all__ = ['RankKernel', 'eval_kernel', 'DomainError', 'NonSmoothKernel',
           'DegenerateKernel', 'ORDERS']

ORDERS = (0, 1, 2, 'antiderivative')
"""Valid values of the `order` argument of `RankKernel.compute`."""

# Family names as they appear in config files, mapped to library functions
_aliases = {'constant': 'constant',
            'powerlaw': 'power_law',
            'power_law': 'power_law',
            'uniformcutoff': 'uniform_cutoff',
            'uniform_cutoff': 'uniform_cutoff',
            'smoothcutoff': 'smooth_cutoff',
            'smooth_cutoff': 'smooth_cutoff'}

# Default parameters of each family, used when a config file or a
# command line flag only gives the family name
_defaults = {'constant': {},
             'power_law': {'alpha': 2.0},
             'uniform_cutoff': {'theta': 0.1},
             'smooth_cutoff': {'theta': 0.5, 'eps': 0.8}}


class DomainError(ValueError):
    """Raised when an argument lies outside its mathematical domain."""
    pass

class NonSmoothKernel(ValueError):
    """Raised when a derivative is requested where it is undefined."""
    pass

class DegenerateKernel(ValueError):
    """Raised when the discrete kernel weights are all zero."""
    pass


class RankKernel(object):

    """Interaction kernel K on the ranks [0,1]."""

    def __init__(self, family='constant', params=None):
        """
        `family` is looked up into the library of kernels (the
        `library` module). Config-file spellings without underscores,
        such as `smoothcutoff`, are accepted. `params` is a dict of
        parameters passed to the library function; missing entries
        are taken from the family defaults.

        Examples:
        --------
        The biologically motivated hard top-k kernel:

        `RankKernel('uniform_cutoff', {'theta': 0.1})`

        The linear kernel K(r) = 2r:

        `RankKernel('power_law', {'alpha': 1.0, 'mirror': True})`
        """
        key = family.lower().replace('-', '_')
        if key not in _aliases:
            raise DomainError('unknown kernel family %s' % family)
        self.family = _aliases[key]
        self.params = dict(_defaults[self.family])
        if params is not None:
            self.params.update(params)
        self.func = getattr(library, self.family)
        self._validate()

    @classmethod
    def from_dict(cls, db):
        """
        Build a kernel from a config dict such as
        `{family: smoothcutoff, theta: 0.5, eps: 0.8}`.
        """
        if isinstance(db, str):
            return cls(db)
        db = dict(db)
        family = db.pop('family', 'constant')
        return cls(family, db)

    def to_dict(self):
        db = {'family': self.family}
        db.update(self.params)
        return db

    def _validate(self):
        p = self.params
        if self.family == 'uniform_cutoff':
            if not 0 < p['theta'] <= 1:
                raise DomainError('theta must be in (0,1], got %s' % p['theta'])
        elif self.family == 'smooth_cutoff':
            if not 0 < p['theta'] <= 1:
                raise DomainError('theta must be in (0,1], got %s' % p['theta'])
            if not p['eps'] > 0:
                raise DomainError('eps must be positive, got %s' % p['eps'])
        elif self.family == 'power_law':
            if not p['alpha'] >= 0:
                raise DomainError('alpha must be nonnegative, got %s' % p['alpha'])

    def __str__(self):
        if len(self.params) == 0:
            return self.family
        args = ';'.join(['%s=%s' % (key, self.params[key]) for key in sorted(self.params)])
        return '%s(%s)' % (self.family, args)

    def __repr__(self):
        return 'RankKernel(%r, %r)' % (self.family, self.params)

    def __eq__(self, other):
        return isinstance(other, RankKernel) and self.family == other.family and \
            self.params == other.params

    def __hash__(self):
        return hash(str(self))

    def report(self):
        return 'kernel: {}\nsmooth: {}\n'.format(self, self.smooth)

    @property
    def smooth(self):
        """True iff the kernel is twice continuously differentiable on [0,1]."""
        return library.is_smooth(self.family, self.params)

    @property
    def breakpoints(self):
        """Points in (0,1) where the kernel or its derivatives jump."""
        p = self.params
        if self.family == 'uniform_cutoff':
            return [p['theta']] if p['theta'] < 1 else []
        if self.family == 'smooth_cutoff':
            pts = [p['theta'] - p['eps'] / 2, p['theta'] + p['eps'] / 2]
            return [x for x in pts if 0 < x < 1]
        return []

    def compute(self, r, order=0):
        """
        Return K(r), K'(r), K''(r) or the antiderivative int_0^r K,
        depending on `order` (0, 1, 2 or 'antiderivative').

        `r` can be a scalar or an array; a scalar input gives a float.
        """
        if order not in ORDERS:
            raise ValueError('invalid order %s, valid ones are %s' % (order, ORDERS))
        scalar = numpy.ndim(r) == 0
        r = numpy.asarray(r, dtype=float)
        if numpy.any(r < 0) or numpy.any(r > 1) or numpy.any(numpy.isnan(r)):
            raise DomainError('rank outside [0,1]: %s' % r)
        if order in (1, 2) and self.family == 'uniform_cutoff':
            raise NonSmoothKernel('derivatives of %s are undefined at the cutoff' % self)

        k0, k1, k2, kint = self.func(r, **self.params)
        if order == 'antiderivative':
            value = kint
        else:
            value = (k0, k1, k2)[order]
        if order in (1, 2) and not numpy.all(numpy.isfinite(value)):
            raise NonSmoothKernel('derivative of order %d of %s undefined at %s' % (order, self, r))
        if scalar:
            return float(value)
        return value

    def __call__(self, r):
        return self.compute(r, 0)

    def derivative(self, r, order=1):
        return self.compute(r, order)

    def antiderivative(self, r):
        return self.compute(r, 'antiderivative')

    def tabulate(self, npoints=1001, what='uwh'):
        """
        Tabulate the kernel on a regular grid of [0,1].

        The `what` parameter can be 'u' (K), 'uw' (K, K') or 'uwh'
        (K, K', K''). Derivatives of non-smooth kernels are skipped.
        """
        r = numpy.linspace(0.0, 1.0, npoints)
        out = [r, self.compute(r, 0)]
        if not self.smooth:
            return tuple(out)
        if 'w' in what:
            out.append(self.compute(r, 1))
        if 'h' in what:
            out.append(self.compute(r, 2))
        return tuple(out)

    def normalization_error(self):
        """Return |int_0^1 K - 1| computed by adaptive quadrature."""
        from scipy.integrate import quad
        value, _ = quad(lambda r: self.compute(r, 0), 0.0, 1.0,
                        points=self.breakpoints or None, limit=200,
                        epsabs=1e-14, epsrel=1e-14)
        return abs(value - 1.0)


def eval_kernel(kernel, r, order=0):
    """Evaluate `kernel` (or its derivatives, or antiderivative) at `r`."""
    return kernel.compute(r, order)
