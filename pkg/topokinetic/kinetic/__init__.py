# This file is part of topokinetic

"""
Kinetic limit of the "Choose the Leader" dynamics on a periodic
segment with a finite set of velocities.
"""

import logging
from .state import *
from .shells import *
from .solver import *
from topokinetic.core.utils import NullHandler
logging.getLogger(__name__).addHandler(NullHandler())
