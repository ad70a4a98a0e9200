"""
Progress bars for simulation clocks and run ensembles.

Bars are drawn with tqdm when it is installed and `active` is set,
which the command line does with `--verbose`. Otherwise a silent bar
with the same interface is returned.
"""

import sys

# These module level variables can be tweaked at run time
active = False
ncols = 80
bar_format = '# {l_bar} {bar} | {n_fmt}/{total_fmt} [{elapsed}<{remaining}]'

try:
    import tqdm as _tqdm
except ImportError:
    _tqdm = None


class SilentBar(object):

    """Progress bar that draws nothing."""

    def __init__(self, iterable=None, total=None, desc=None):
        self.iterable = iterable
        self.total = total
        self.n = 0

    def update(self, value):
        self.n = value

    def close(self):
        pass

    def __iter__(self):
        for obj in self.iterable:
            yield obj


if _tqdm is not None:

    class ClockBar(_tqdm.tqdm):

        """tqdm bar updated with the absolute simulation time."""

        def update(self, t):
            if not self.disable:
                _tqdm.tqdm.update(self, min(t, self.total) - self.n)


def _enabled():
    return active and _tqdm is not None


def progress(iterable=None, total=None, desc=None):
    """Bar over the `iterable` of ensemble runs, or over `total` items."""
    if not _enabled():
        return SilentBar(iterable, total, desc)
    return _tqdm.tqdm(iterable, total=total, desc=desc, bar_format=bar_format,
                      ncols=ncols, file=sys.stdout)


def clock_bar(t_end, desc='t'):
    """Bar over simulation time, whose `update` takes the current time."""
    if not _enabled() or not t_end > 0:
        return SilentBar(total=t_end, desc=desc)
    return ClockBar(total=t_end, desc=desc, bar_format=bar_format, ncols=ncols,
                    file=sys.stdout)
