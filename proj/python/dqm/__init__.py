"""Python bindings for the dqm library."""

from ._dqm import *  # noqa: F401,F403
from ._dqm import __doc__  # noqa: F401

__version__ = "0.1.0"
