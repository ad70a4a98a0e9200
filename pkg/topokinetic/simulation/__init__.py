# This file is part of topokinetic

"""
Simulation framework for the "Choose the Leader" dynamics.

`Simulation` drives a backend in time and calls observers on the fly
to record diagnostics and snapshots. The `ChooseTheLeader` backend
realizes the particle dynamics event by event; the kinetic solver of
`topokinetic.kinetic` plugs into the same framework.
"""

import logging
from .core import Simulation
from .observers import *
from .config import ConfigError, SimConfig
from .leader import *
from .marginal import *
from .generator import GeneratorReport, exact_generator, generator_check, \
    generator_observables, evolve_copies, evolve_with_backend
from topokinetic.core.utils import NullHandler
logging.getLogger(__name__).addHandler(NullHandler())
