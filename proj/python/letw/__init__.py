"""Latency-elastic trust window toolkit (Python bindings)."""

from ._letw import *  # noqa: F401,F403
from ._letw import __doc__  # noqa: F401

__version__ = "0.1.0"
