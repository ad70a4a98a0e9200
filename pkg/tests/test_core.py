#!/usr/bin/env python

import os
import io
import unittest
import tempfile
import contextlib
import numpy
from topokinetic.core import __version__
from topokinetic.core import progress
from topokinetic.core.utils import setup_logging, tipify, set_nested, parse_overrides, merge, \
    write_table, mkdir, rmd
from topokinetic.core.manifest import RunManifest, is_manifest


setup_logging(level=40)

class Test(unittest.TestCase):

    def setUp(self):
        self.tmpdir = tempfile.mkdtemp()

    def tearDown(self):
        rmd(self.tmpdir)

    def test_tipify(self):
        self.assertEqual(tipify('2'), 2)
        self.assertEqual(tipify('2.5'), 2.5)
        self.assertEqual(tipify('True'), True)
        self.assertEqual(tipify('smoothcutoff'), 'smoothcutoff')

    def test_overrides(self):
        db = parse_overrides(['N=100', 'kernel.family=smoothcutoff', 'kernel.eps=0.2'])
        self.assertEqual(db, {'N': 100, 'kernel': {'family': 'smoothcutoff', 'eps': 0.2}})
        with self.assertRaises(ValueError):
            parse_overrides(['N'])
        # Overrides replace a non dict entry with a dict
        self.assertEqual(set_nested({'kernel': 'constant'}, 'kernel.family', 'powerlaw'),
                         {'kernel': {'family': 'powerlaw'}})

    def test_merge(self):
        base = {'N': 10, 'kernel': {'family': 'smoothcutoff', 'theta': 0.5}}
        new = merge(base, {'kernel': {'theta': 0.3}, 't_end': 2.0})
        self.assertEqual(new, {'N': 10, 't_end': 2.0,
                               'kernel': {'family': 'smoothcutoff', 'theta': 0.3}})
        self.assertEqual(base['kernel']['theta'], 0.5)

    def test_write_table(self):
        path = os.path.join(self.tmpdir, 'table.csv')
        write_table(path, ['N', 'x'], [[1, 2], [0.1, 1 / 3.]], fmt=['%d', '%.17g'])
        with open(path, 'rb') as fh:
            self.assertEqual(fh.read(), b'N,x\n1,0.10000000000000001\n2,0.33333333333333331\n')
        data = numpy.loadtxt(path, delimiter=',', skiprows=1)
        self.assertEqual(data[1, 1], 1 / 3.)
        # Empty tables keep their header
        write_table(path, ['t', 'follower', 'leader'], [[], [], []])
        with open(path) as fh:
            self.assertEqual(fh.read(), 't,follower,leader\n')
        out = io.StringIO()
        with contextlib.redirect_stdout(out):
            write_table('-', ['a'], [[1.5]])
        self.assertEqual(out.getvalue(), 'a\n1.5\n')

    def test_mkdir(self):
        path = os.path.join(self.tmpdir, 'a', 'b')
        mkdir(path)
        mkdir(path)
        self.assertTrue(os.path.isdir(path))

    def test_manifest(self):
        path = os.path.join(self.tmpdir, 'manifest.yaml')
        manifest = RunManifest('solve', {'Nx': 8, 'kernel': {'family': 'constant'}}, 3,
                               [os.path.join(self.tmpdir, 'rho.csv')], 0.5)
        manifest.write(path)
        other = RunManifest.read(path)
        self.assertEqual(other.command, 'solve')
        self.assertEqual(other.seed, 3)
        self.assertEqual(other.config, manifest.config)
        self.assertEqual(other.outputs, ['rho.csv'])
        self.assertEqual(other.version, __version__)
        self.assertEqual(other.date, manifest.date)
        self.assertTrue(is_manifest(other.to_dict()))
        self.assertFalse(is_manifest({'N': 10, 'seed': 1}))

    def test_progress(self):
        self.assertFalse(progress.active)
        self.assertEqual(list(progress.progress([1, 2, 3])), [1, 2, 3])
        bar = progress.clock_bar(10.0)
        bar.update(2.5)
        bar.close()
        self.assertIsInstance(bar, progress.SilentBar)


if __name__ == '__main__':
    unittest.main()
