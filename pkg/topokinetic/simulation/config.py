# This file is part of topokinetic

"""
Configuration of particle runs.

A config is a plain dict, typically read from a YAML file:

    N: 10
    t_end: 20.0
    kernel: {family: uniformcutoff, theta: 0.2}
    metric: {type: euclidean, ndim: 1}
    initial: {type: uniform, x: [-10, 10], v: [-10, 10]}
    interval: 0.1
    snapshot_interval: 1.0
    seed: 7
"""

import copy
import logging

from topokinetic.kernel import RankKernel, DomainError
from topokinetic.system import metric_from_dict

__all__ = ['ConfigError', 'SimConfig', 'check_keys']

_log = logging.getLogger(__name__)


class ConfigError(ValueError):
    """Raised when a configuration field is invalid."""
    pass


def check_keys(db, known, where='config'):
    """Warn about keys of `db` that are not in `known`."""
    for key in db:
        if key not in known:
            _log.warning('unknown key %s in %s', key, where)


class SimConfig(object):

    """Parameters of a particle run."""

    _defaults = {'N': 10,
                 't_end': 10.0,
                 'kernel': {'family': 'constant'},
                 'metric': {'type': 'euclidean', 'ndim': 1},
                 'initial': {'type': 'uniform', 'x': [-10.0, 10.0], 'v': [-10.0, 10.0]},
                 'seed': None,
                 'interval': 0.1,
                 'snapshot_interval': 1.0,
                 'event_log': False,
                 'stop_at_consensus': False}

    def __init__(self, **kwargs):
        check_keys(kwargs, self._defaults, 'particle config')
        db = copy.deepcopy(self._defaults)
        db.update(kwargs)
        for key in self._defaults:
            setattr(self, key, db[key])
        self._parse()

    @classmethod
    def from_dict(cls, db):
        return cls(**db)

    def _parse(self):
        try:
            self.N = int(self.N)
            self.t_end = float(self.t_end)
            self.interval = float(self.interval) if self.interval is not None else 0.0
            self.snapshot_interval = float(self.snapshot_interval) \
                if self.snapshot_interval is not None else 0.0
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc))
        if self.N < 2:
            raise ConfigError('N must be at least 2, got %d' % self.N)
        if self.t_end < 0:
            raise ConfigError('t_end must be nonnegative, got %g' % self.t_end)
        try:
            self.rank_kernel = RankKernel.from_dict(self.kernel)
            self.space = metric_from_dict(self.metric)
        except (DomainError, ValueError, TypeError) as exc:
            raise ConfigError(str(exc))
        if self.seed is not None:
            self.seed = int(self.seed)

    def to_dict(self):
        """Plain dict of the config, as stored in run manifests."""
        db = {}
        for key in self._defaults:
            db[key] = copy.deepcopy(getattr(self, key))
        db['kernel'] = self.rank_kernel.to_dict()
        db['metric'] = self.space.to_dict()
        return db

    def __str__(self):
        return 'N={} kernel={} metric={} t_end={:g}'.format(self.N, self.rank_kernel,
                                                             self.space, self.t_end)
