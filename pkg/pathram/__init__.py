"""
pathram: exact solver and analysis toolkit for the online path-avoidance colouring game
"""

from .asymptotics import bootstrap_rate, certify_symmetric_lb, delta_family, period_analysis
from .exceptions import PathRamseyError, RecursionOverflowError, WalkValidationError
from .game import GreedyPainter, RandomPainter, StrategyPainter, run_game
from .models import RecursionTrace, SearchReport, StrategyWalk
from .recursion import delta_of_walk, evaluate, k_of_walk
from .solver import kstar_branch_and_bound, kstar_exhaustive, mstar_of_kstar
from .walks import make_walk, parse_walk

__version__ = "0.1.0"
__all__ = [
    "StrategyWalk",
    "RecursionTrace",
    "SearchReport",
    "make_walk",
    "parse_walk",
    "evaluate",
    "k_of_walk",
    "delta_of_walk",
    "kstar_exhaustive",
    "kstar_branch_and_bound",
    "mstar_of_kstar",
    "period_analysis",
    "delta_family",
    "bootstrap_rate",
    "certify_symmetric_lb",
    "StrategyPainter",
    "GreedyPainter",
    "RandomPainter",
    "run_game",
    "PathRamseyError",
    "WalkValidationError",
    "RecursionOverflowError",
]
