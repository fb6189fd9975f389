"""Minimum-representation-fair k-means clustering (MiniReL).

The heavy lifting lives in the compiled `_core` extension; this package
re-exports its public surface.
"""

from minirel._core import *  # noqa: F401,F403
from minirel._core import milp, oracle  # noqa: F401

__all__ = [name for name in dir() if not name.startswith("_")]
