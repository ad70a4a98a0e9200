"""Logging setup, config overrides, file handling and CSV tables."""

import os
import sys
import copy
import shutil
import logging
from logging import NullHandler

import numpy

LOGGER_NAME = 'topokinetic'


class _CommentFormatter(logging.Formatter):

    """Prefix log lines with `#` so they can sit next to CSV output."""

    def format(self, record):
        text = record.getMessage()
        if record.levelno >= logging.WARNING:
            return '# %s %s' % (record.levelname, text)
        return '# ' + text


def setup_logging(name=None, level=40, filename=None, update=False):
    """
    Attach a `#`-prefixed handler to logger `name` (the root logger by
    default), writing to stdout or to `filename`.

    With `update=True` no handler is added and only the levels of the
    logger and of its existing handlers are set to `level`.
    """
    log = logging.getLogger(name)
    if update:
        log.setLevel(level)
        for handler in log.handlers:
            handler.setLevel(level)
        return log

    # Never raise the threshold set by other handlers
    log.setLevel(min(level, log.getEffectiveLevel()))
    if filename is None:
        handler = logging.StreamHandler(sys.stdout)
    else:
        handler = logging.FileHandler(filename)
    handler.setFormatter(_CommentFormatter())
    handler.setLevel(level)
    log.addHandler(handler)
    return log


def mkdir(dirname):
    """Create `dirname` (a path or a list of paths) with its parents."""
    if dirname is None:
        return
    for path in [dirname] if isinstance(dirname, str) else dirname:
        if path:
            os.makedirs(path, exist_ok=True)


def rmd(path):
    """Remove the directory tree `path`, ignoring errors."""
    shutil.rmtree(path, ignore_errors=True)


def tipify(s):
    """Convert the string `s` to bool, int or float when it looks like one."""
    if s.lower() in ('true', 'false'):
        return s.lower() == 'true'
    for cast in (int, float):
        try:
            return cast(s)
        except ValueError:
            pass
    return s


def set_nested(params, key, value):
    """
    Set `value` in the nested dict `params` at the dotted `key`,
    e.g. `kernel.theta`. Intermediate dicts are created as needed.
    """
    keys = key.split('.')
    db = params
    for k in keys[:-1]:
        if not isinstance(db.get(k), dict):
            db[k] = {}
        db = db[k]
    db[keys[-1]] = value
    return params


def parse_overrides(items):
    """Turn `key=value` strings into a nested dict with typed values."""
    params = {}
    for item in items:
        if '=' not in item:
            raise ValueError('override %s is not of the form key=value' % item)
        key, value = item.split('=', 1)
        set_nested(params, key.strip(), tipify(value.strip()))
    return params


def merge(base, other):
    """Return a copy of dict `base` recursively updated with `other`."""
    result = copy.deepcopy(base)
    for key, value in other.items():
        if isinstance(value, dict) and isinstance(result.get(key), dict):
            result[key] = merge(result[key], value)
        else:
            result[key] = copy.deepcopy(value)
    return result


def write_table(path, columns, data, fmt=None):
    """
    Write a CSV table with a header row to `path`.

    `data` is a sequence of equally long columns. Floats are written
    with 17 significant digits so that repeated runs are byte
    identical. A `path` of None or '-' writes to stdout.
    """
    if fmt is None:
        fmt = ['%.17g'] * len(columns)
    if len(data) > 0 and len(data[0]) > 0:
        rows = numpy.column_stack([numpy.asarray(col, dtype=object) for col in data])
    else:
        rows = numpy.empty((0, len(columns)), dtype=object)
    kwargs = dict(fmt=fmt, delimiter=',', header=','.join(columns), comments='')
    if path is None or path == '-':
        numpy.savetxt(sys.stdout, rows, **kwargs)
    else:
        with open(path, 'w', newline='\n', encoding='utf-8') as fh:
            numpy.savetxt(fh, rows, **kwargs)
