"""Multicopter morphology evaluation and multi-objective evolution."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__, GENOTYPE_LENGTH  # noqa: F401

__version__ = "0.1.0"
