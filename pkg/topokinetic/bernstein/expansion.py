# This file is part of topokinetic

"""
First-order expansions of binomial averages.

Each check compares an exact finite sum (lhs) with its limit
(leading) and with the limit plus the first-order correction
(corrected). The residual of the corrected value is o(1/n), which we
measure with residual ladders: the scaled residual n * |lhs - corrected|
must shrink by a given factor when n is multiplied by 4.
"""

import logging

import numpy

from topokinetic.kernel import build_discrete_table
from .functions import as_smooth
from .polynomial import bernstein_eval, shifted_binomial_expectation

__all__ = ['ExpansionReport', 'lorentz_expansion_check', 'lemma_expansion_check',
           'sn_expansion_check', 'residual_ladder', 'LadderResult', 'CASES',
           'write_reports']

_log = logging.getLogger(__name__)

CASES = {'insideball': ((2, 2), 3),
         'outsideball': ((1, 2), 3),
         'pair': ((1, 1), 2)}
"""Shift and number of excluded particles of each case of the rank expansions."""


class ExpansionReport(object):

    """Exact value of a finite sum and its first-order expansion."""

    columns = ['check', 'kernel', 'p_or_x', 'size', 'lhs', 'leading', 'corrected',
               'residual_leading', 'residual_corrected']

    def __init__(self, check, kernel, point, size, lhs, leading, corrected):
        self.check = check
        self.kernel = str(kernel)
        self.point = point
        self.size = size
        self.lhs = lhs
        self.leading = leading
        self.corrected = corrected

    @property
    def residual_leading(self):
        return abs(self.lhs - self.leading)

    @property
    def residual_corrected(self):
        return abs(self.lhs - self.corrected)

    def row(self):
        return [self.check, self.kernel, self.point, self.size, self.lhs, self.leading,
                self.corrected, self.residual_leading, self.residual_corrected]

    def __repr__(self):
        return '<ExpansionReport {} {} at {} size={}: residual={:.3e}>'.format(
            self.check, self.kernel, self.point, self.size, self.residual_corrected)


def lorentz_expansion_check(f, x, n):
    """
    Compare B_n(f;x) with f(x) + x(1-x) f''(x) / (2n).

    `f` is a smooth `RankKernel`, a `SmoothFunction` or the name of
    one of the functions in `topokinetic.bernstein.functions`.
    """
    f = as_smooth(f)
    lhs = bernstein_eval(f, n, x)
    leading = f.compute(x, 0)
    corrected = leading + x * (1 - x) * f.compute(x, 2) / (2.0 * n)
    return ExpansionReport('bernstein', f, x, n, lhs, leading, corrected)


def lemma_expansion_check(K, p, N, case='insideball'):
    """
    Expansion of the average of the kernel at the rank of a particle,
    when the other particles are i.i.d. and p is the mass of the
    ball.

    - `insideball`: shift (2,2) over N-3 particles,
      K(p) + 2(1-p) K'(p)/N + p(1-p) K''(p)/(2N)
    - `outsideball`: shift (1,2) over N-3 particles, the same minus K'(p)/N
    - `pair`: shift (1,1) over N-2 particles,
      K(p) + (1-p) K'(p)/N + p(1-p) K''(p)/(2N)
    """
    K = as_smooth(K)
    key = case.lower().replace('_', '')
    if key not in CASES:
        raise ValueError('unknown case %s, available ones are %s' % (case, sorted(CASES)))
    shift, excluded = CASES[key]
    M = N - excluded
    lhs = shifted_binomial_expectation(K, p, M, shift)
    k0, k1, k2 = K.compute(p, 0), K.compute(p, 1), K.compute(p, 2)
    leading = k0
    if key == 'pair':
        corrected = k0 + (1 - p) * k1 / N + p * (1 - p) * k2 / (2.0 * N)
    else:
        corrected = k0 + 2 * (1 - p) * k1 / N + p * (1 - p) * k2 / (2.0 * N)
        if key == 'outsideball':
            corrected -= k1 / N
    return ExpansionReport('lemma_' + key, K, p, N, lhs, leading, corrected)


def sn_expansion_check(K, N):
    """
    Compare the normalizer S^N(K) of the smooth `RankKernel` `K` with
    1 + (K(1) - K(0)) / (2N).
    """
    K = as_smooth(K)
    lhs = build_discrete_table(K, N).s_n
    corrected = 1.0 + (K.compute(1.0, 0) - K.compute(0.0, 0)) / (2.0 * N)
    return ExpansionReport('sn', K, float('nan'), N, lhs, 1.0, corrected)


class LadderResult(object):

    def __init__(self, sizes, scaled, ratios, passed):
        self.sizes = sizes
        self.scaled = scaled
        self.ratios = ratios
        self.passed = passed

    def __bool__(self):
        return self.passed

    __nonzero__ = __bool__

    def __str__(self):
        return 'ladder sizes={} ratios={} passed={}'.format(
            self.sizes, ['%.3g' % r for r in self.ratios], self.passed)


def residual_ladder(reports, factor=2.0, floor=1e-14):
    """
    Check that size * residual_corrected shrinks at least by `factor`
    between consecutive reports, sorted by size.

    Residuals below `floor` are at round-off level and pass.
    """
    reports = sorted(reports, key=lambda r: r.size)
    sizes = [r.size for r in reports]
    scaled = [r.size * r.residual_corrected for r in reports]
    ratios, passed = [], True
    for lo, hi, rlo, rhi in zip(scaled[:-1], scaled[1:], reports[:-1], reports[1:]):
        ratio = lo / hi if hi > 0 else float('inf')
        ratios.append(ratio)
        if rhi.residual_corrected <= floor:
            continue
        if hi > lo / factor:
            passed = False
    result = LadderResult(sizes, scaled, ratios, passed)
    _log.info('%s', result)
    return result


def write_reports(path, reports):
    """Write expansion reports as CSV."""
    from topokinetic.core.utils import write_table
    data = list(zip(*[r.row() for r in reports])) if len(reports) > 0 else \
        [[] for _ in ExpansionReport.columns]
    fmt = ['%s', '%s', '%.17g', '%d', '%.17g', '%.17g', '%.17g', '%.17g', '%.17g']
    write_table(path, ExpansionReport.columns, data, fmt=fmt)
