#!/usr/bin/env python

try:
    from setuptools import setup
except ImportError:
    from distutils.core import setup

try:
    readme = open('README.md', 'r').read()
except IOError:
    readme = ''

with open('topokinetic/core/_version.py') as f:
    exec(f.read())

setup(name='topokinetic',
      version=__version__,
      description='Particle simulations and kinetic limit of rank-based "Choose the Leader" dynamics',
      long_description=readme,
      long_description_content_type="text/markdown",
      packages=['topokinetic', 'topokinetic/core', 'topokinetic/kernel', 'topokinetic/rank',
                'topokinetic/system', 'topokinetic/simulation', 'topokinetic/bernstein',
                'topokinetic/kinetic', 'topokinetic/compare'],
      scripts=['bin/topokinetic.py'],
      entry_points={'console_scripts': ['topokinetic = topokinetic.cli:main']},
      install_requires=['numpy', 'scipy', 'pyyaml'],
      extras_require={'progress': ['tqdm']},
      license='GPLv3',
      classifiers=[
          'License :: OSI Approved :: GNU General Public License v3 (GPLv3)',
          'Development Status :: 4 - Beta',
          'Intended Audience :: Science/Research',
          'Programming Language :: Python :: 3',
          'Topic :: Scientific/Engineering :: Physics',
          'Topic :: Scientific/Engineering :: Mathematics',
      ]
)
