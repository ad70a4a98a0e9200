# This file is part of topokinetic

"""
Proximity ranks, interaction probabilities and leader selection.
"""

import logging
from .proximity import *
from .oracle import *
from topokinetic.core.utils import NullHandler
logging.getLogger(__name__).addHandler(NullHandler())
