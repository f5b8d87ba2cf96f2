"""Spectral bounds and treatment effects for pairwise outcome matrices."""

from ._core import *  # noqa: F401,F403
from ._core import Error, Interval, __version__  # noqa: F401
