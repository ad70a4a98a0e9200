# This file is part of topokinetic

"""
Rank-based "Choose the Leader" particle dynamics and its kinetic limit.

Blank namespace package.
"""

from pkgutil import extend_path
__path__ = extend_path(__path__, __name__)
