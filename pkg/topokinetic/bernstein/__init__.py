# This file is part of topokinetic

"""
Bernstein polynomials and the binomial expansions behind the
kinetic limit of rank-based interactions.
"""

from .functions import *
from .polynomial import *
from .expansion import *
