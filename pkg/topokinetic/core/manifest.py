"""Run manifests written alongside the outputs of every command."""

import os
import datetime

import yaml

from ._version import __version__

__all__ = ['RunManifest', 'is_manifest']

# Keys that identify a manifest among config files
_keys = ('command', 'config', 'seed', 'version')


def is_manifest(db):
    """True if the dict `db` loaded from YAML is a run manifest."""
    return isinstance(db, dict) and all(key in db for key in _keys)


class RunManifest(object):

    """
    Config snapshot, master seed, version, output files and wall time
    of a run. Passing a manifest back as config file replays the run.
    """

    def __init__(self, command, config, seed, outputs=None, wall_time=None,
                 version=__version__, params=None):
        self.command = command
        self.config = config
        self.seed = seed
        self.outputs = [] if outputs is None else list(outputs)
        self.wall_time = wall_time
        self.version = version
        self.params = {} if params is None else dict(params)
        """Command line parameters other than the config, e.g. the verify suite."""
        self.date = datetime.datetime.now().isoformat(timespec='seconds')

    def to_dict(self):
        return {'command': self.command,
                'version': self.version,
                'seed': self.seed,
                'config': self.config,
                'params': self.params,
                'outputs': [os.path.basename(path) for path in self.outputs],
                'wall_time': self.wall_time,
                'date': self.date}

    @classmethod
    def from_dict(cls, db):
        manifest = cls(db['command'], db['config'], db['seed'], db.get('outputs'),
                       db.get('wall_time'), db['version'], db.get('params'))
        manifest.date = db.get('date', manifest.date)
        return manifest

    def write(self, path):
        with open(path, 'w', newline='\n', encoding='utf-8') as fh:
            yaml.safe_dump(self.to_dict(), fh, default_flow_style=None, sort_keys=True)
        return path

    @classmethod
    def read(cls, path):
        with open(path, encoding='utf-8') as fh:
            return cls.from_dict(yaml.safe_load(fh))
