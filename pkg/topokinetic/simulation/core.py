# This file is part of topokinetic

"""
Clock driver shared by the particle and kinetic backends.

A backend owns the state and knows how to advance it. It exposes

- `system`: the state handed to observers
- `current_time`: its clock
- `run_until(t)`: advance the clock exactly to `t`

`Simulation` asks every observer's `Scheduler` for its next time,
moves the backend to the earliest of them and notifies the observers
due at that time. Backends with a pending random event (the particle
system) keep it across `run_until` calls, so sampling does not change
the trajectory.
"""

import time
import logging

from topokinetic.core import __version__
from topokinetic.core.progress import clock_bar
from .observers import target_time, Scheduler, SimulationEnd

_log = logging.getLogger(__name__)


def _name(observer):
    name = getattr(observer, '__name__', None)
    if name is None:
        name = type(observer).__name__
    return name.lower()


def _is_target(observer):
    return 'target' in _name(observer)


def _log_lines(text):
    if text:
        for line in text.strip().split('\n'):
            _log.info(line.strip())


class Simulation(object):

    """Advance a backend up to `t_end` and notify observers on schedule."""

    version = __version__

    def __init__(self, backend, t_end=0.0):
        self.backend = backend
        self.t_end = t_end
        self.wall_time = 0.0
        self._observers = []
        self._schedule = {}
        self._seen_initial_state = False

    @property
    def system(self):
        return self.backend.system

    @system.setter
    def system(self, value):
        self.backend.system = value

    @property
    def current_time(self):
        return self.backend.current_time

    def __str__(self):
        return 'simulation of %s' % self.backend

    def add(self, observer, scheduler, *args, **kwargs):
        """
        Call `observer(sim, *args, **kwargs)` at the times returned by
        `scheduler`. A number is taken as a fixed interval.

        Observers whose name contains "target" are notified after all
        the others.
        """
        if not callable(scheduler):
            scheduler = Scheduler(scheduler)
        self._schedule[observer] = (scheduler, args, kwargs)
        if _is_target(observer):
            self._observers.append(observer)
        else:
            self._observers.insert(0, observer)

    def remove(self, observer):
        if observer in self._schedule:
            self._observers.remove(observer)
            del self._schedule[observer]

    def _notify(self, observers):
        for observer in observers:
            _, args, kwargs = self._schedule[observer]
            observer(self, *args, **kwargs)

    def run_until(self, t):
        self.backend.run_until(t)

    def run(self, t_end=None):
        """Run up to `t_end`, or until a target raises `SimulationEnd`."""
        if t_end is not None:
            self.t_end = t_end
        self.remove(target_time)
        self.add(target_time, Scheduler(times=[self.t_end]), self.t_end)

        _log.info('%s (version %s) from t=%g to t=%g', self, self.version,
                  self.current_time, self.t_end)
        for observer in self._observers:
            scheduler = self._schedule[observer][0]
            _log.debug('observer %s every %s', _name(observer),
                       getattr(scheduler, 'interval', None) or getattr(scheduler, 'times', None))
        for obj in [self.system, self.backend]:
            if hasattr(obj, 'report'):
                _log_lines(obj.report())

        start = time.time()
        bar = clock_bar(self.t_end)
        try:
            if not self._seen_initial_state:
                self._seen_initial_state = True
                self._notify([o for o in self._observers if not _is_target(o)])
            self._notify([o for o in self._observers if _is_target(o)])
            while True:
                due = [self._schedule[o][0](self) for o in self._observers]
                t_next = min(due)
                self.run_until(t_next)
                self._notify([o for o, t in zip(self._observers, due) if t == t_next])
                bar.update(self.current_time)
        except SimulationEnd as end:
            bar.update(self.current_time)
            bar.close()
            self.wall_time = time.time() - start
            _log.info('stopped at t=%g after %.2f s: %s', self.current_time,
                      self.wall_time, end)
        except Exception:
            bar.close()
            _log.error('simulation failed at t=%g', self.current_time)
            raise
