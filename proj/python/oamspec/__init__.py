"""Rotating-interferometer OAM spectrometer: simulation and spectrum reconstruction."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
