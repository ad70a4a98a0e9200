# This file is part of topokinetic

"""
Interaction kernels on the proximity ranks.

A `RankKernel` is a probability density K on [0,1]: the particle at
scaled rank r from a follower is chosen as leader with a weight
proportional to K(r). `build_discrete_table` normalizes it for a
finite number of particles.
"""

import logging
from .kernel import *
from .table import *
from topokinetic.core.utils import NullHandler
logging.getLogger(__name__).addHandler(NullHandler())
