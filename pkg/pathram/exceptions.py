"""
Custom exceptions for pathram
"""

from typing import Iterable


class PathRamseyError(Exception):
    """Base exception for pathram errors"""
    pass


class WalkValidationError(PathRamseyError):
    """Invalid strategy walk, walk text, targets or colour vector"""
    pass


class UnsupportedArityError(PathRamseyError):
    """Operation is only defined for a different number of colours"""
    pass


class TerminalPositionError(PathRamseyError):
    """Every colour would complete its forbidden path; the game is over"""

    def __init__(self, targets: Iterable[int]):
        self.targets = tuple(targets)
        super().__init__(f"Position {self.targets} is terminal: every colour completes its path")


class RecursionOverflowError(PathRamseyError):
    """A recursion value left the signed 128-bit range"""

    def __init__(self, step: int, value_bits: int, message: str = ""):
        self.step = step
        self.value_bits = value_bits
        super().__init__(
            message or f"Integer overflow at step {step}: value needs {value_bits} bits (limit 127)"
        )


class SearchCapExceededError(PathRamseyError):
    """Exhaustive search refused because the walk set is too large"""

    def __init__(self, count: int, cap: int):
        self.count = count
        self.cap = cap
        super().__init__(f"Refusing exhaustive search over {count} walks (cap {cap})")


class CycleViolationError(PathRamseyError):
    """A board move would close a cycle"""
    pass


class InconclusiveComparisonError(PathRamseyError):
    """An extended-precision comparison landed inside its guard band"""
    pass


class InvariantViolationError(PathRamseyError):
    """Internal invariant breach"""
    pass


class InvalidConfigurationError(PathRamseyError):
    """Invalid configuration error"""
    pass
