"""Fuzzy workflow scheduling on cloud-edge platforms."""

from ._core import *  # noqa: F401,F403
from ._core import FuzzySchedError, Tfn, run_algorithm, run_experiment

__all__ = [name for name in dir() if not name.startswith("_")]
