"""Finite-volume simulator for a doubly degenerate nutrient-taxis system."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
