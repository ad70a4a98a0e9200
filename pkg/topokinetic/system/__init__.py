# This file is part of topokinetic

"""
Particles on a line, in the plane or on a periodic segment.

A `ParticleEnsemble` holds positions and velocities of N particles
together with the metric used to rank them by proximity.
"""

from .metric import Euclidean, PeriodicLine, metric_from_dict
from .ensemble import ParticleEnsemble
from .initial import uniform_box, explicit, from_kinetic_state, initial_condition
