"""Wireless queue simulator: mobile interferer fields, SINR service, analytics."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc  # noqa: F401

__version__ = "0.1.0"
