# This file is part of topokinetic

"""
Version, logging helpers, run manifests and progress bars.
"""

from ._version import __version__
