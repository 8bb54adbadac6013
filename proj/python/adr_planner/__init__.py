"""Python bindings for the debris removal mission planner."""

from ._adr import *  # noqa: F401,F403
from ._adr import __doc__  # noqa: F401

__all__ = [name for name in dir() if not name.startswith("_")]
