"""Group presentations, word problems and torsion orders."""

from ._core import *  # noqa: F401,F403
from ._core import BudgetExhausted, ParseError, Presentation

__all__ = [name for name in dir() if not name.startswith("_")]
