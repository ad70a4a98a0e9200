# This file is part of topokinetic

"""
Comparison of the particle dynamics with its kinetic limit: distances
between one-particle marginals and a propagation of chaos metric.
"""

import logging
from .distance import *
from .chaos import *
from .convergence import *
from topokinetic.core.utils import NullHandler
logging.getLogger(__name__).addHandler(NullHandler())
