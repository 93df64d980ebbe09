"""Simulator for language generation in the limit.

The main entry points are :func:`run_game` for playing one game,
:mod:`genlimit.scenario` for JSON scenarios, and the ``genlimit`` CLI.
"""

from .collection import LanguageCollection
from .game import GameTrace, run_game
from .generators import LimitGenerator, SubsetQueryGenerator
from .universe import INTEGERS, Universe, strings

__all__ = ["INTEGERS", "GameTrace", "LanguageCollection", "LimitGenerator",
           "SubsetQueryGenerator", "Universe", "run_game", "strings"]
__version__ = "0.1.0"
