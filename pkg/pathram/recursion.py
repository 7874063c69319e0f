"""
Walk-indexed recursion: k_i = 1 + sum_s min-split(x_s, nu_(i,s)), with x_(alpha_(i+1)) growing by k_i
"""

import logging
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from .algebraic import power_ceiling_holds
from .exceptions import (
    InvariantViolationError,
    RecursionOverflowError,
    UnsupportedArityError,
    WalkValidationError,
)
from .models import GrowthRate, RecursionTrace, StrategyWalk

logger = logging.getLogger(__name__)

INT128_MAX = 2**127 - 1
# Largest magnitude whose pairwise sums still fit int64.
INT64_SAFE = 2**62


def min_split(values: Sequence[int], nu: int) -> int:
    """min over j1 + j2 = nu - 1 of values[j1] + values[j2], scanning j1 <= j2 only"""
    if not 1 <= nu <= len(values):
        raise InvariantViolationError(f"Min-split index {nu} outside 1..{len(values)}")
    last = nu - 1
    return min(values[j] + values[last - j] for j in range((nu + 1) // 2))


class SplitSequence:
    """Growable integer sequence x_0, x_1, ... answering min-split queries

    Short sequences are scanned in Python. Long ones are scanned with numpy as
    long as every value stays within INT64_SAFE in magnitude; larger values fall back to
    Python integers.
    """

    NUMPY_THRESHOLD = 48

    def __init__(self, values: Iterable[int] = (0,)):
        self._values: List[int] = []
        self._buffer = np.zeros(64, dtype=np.int64)
        self._wide_count = 0
        for value in values:
            self.append(value)

    def __len__(self) -> int:
        return len(self._values)

    def __getitem__(self, index: int) -> int:
        return self._values[index]

    def to_list(self) -> List[int]:
        return list(self._values)

    @property
    def last(self) -> int:
        return self._values[-1]

    def append(self, value: int) -> None:
        index = len(self._values)
        self._values.append(value)
        if index >= len(self._buffer):
            grown = np.zeros(2 * len(self._buffer), dtype=np.int64)
            grown[:index] = self._buffer[:index]
            self._buffer = grown
        if abs(value) > INT64_SAFE:
            self._wide_count += 1
            self._buffer[index] = 0
        else:
            self._buffer[index] = value

    def pop(self) -> int:
        value = self._values.pop()
        if abs(value) > INT64_SAFE:
            self._wide_count -= 1
        return value

    def min_split(self, nu: int) -> int:
        if nu <= self.NUMPY_THRESHOLD or self._wide_count:
            return min_split(self._values, nu)
        if nu > len(self._values):
            raise InvariantViolationError(f"Min-split index {nu} outside 1..{len(self._values)}")
        half = (nu + 1) // 2
        head = self._buffer[:half]
        tail = self._buffer[nu - half:nu][::-1]
        return int((head + tail).min())


class RecursionCursor:
    """
    Incremental evaluation of the recursion along a walk prefix

    The cursor always holds k_i for its current position nu_i. push(color) appends
    k_i to x_color and moves one step; pop() undoes the last push. Evaluating a full
    walk leaves the final k_d unappended, so x_s ends with length l_s.
    """

    def __init__(self, colors: int):
        if colors < 1:
            raise WalkValidationError(f"Number of colours must be at least 1, got {colors}")
        self.colors = colors
        self._x = [SplitSequence() for _ in range(colors)]
        self._nu = [1] * colors
        self._entries: List[int] = []
        self._k: List[int] = [self._next_k()]

    @property
    def k(self) -> int:
        """k_i at the current position"""
        return self._k[-1]

    @property
    def step(self) -> int:
        return len(self._entries)

    @property
    def nu(self) -> Tuple[int, ...]:
        return tuple(self._nu)

    @property
    def entries(self) -> Tuple[int, ...]:
        return tuple(self._entries)

    @property
    def k_values(self) -> List[int]:
        return list(self._k)

    def x(self, color: int) -> List[int]:
        return self._x[color - 1].to_list()

    def _next_k(self) -> int:
        value = 1 + sum(seq.min_split(nu) for seq, nu in zip(self._x, self._nu))
        if value > INT128_MAX:
            raise RecursionOverflowError(len(self._entries), value.bit_length())
        return value

    def push(self, color: int) -> int:
        """Take one step in direction color; returns the new k"""
        if not 1 <= color <= self.colors:
            raise WalkValidationError(f"Colour {color} outside 1..{self.colors}")
        self._x[color - 1].append(self._k[-1])
        self._nu[color - 1] += 1
        self._entries.append(color)
        try:
            self._k.append(self._next_k())
        except RecursionOverflowError:
            self._entries.pop()
            self._nu[color - 1] -= 1
            self._x[color - 1].pop()
            raise
        return self._k[-1]

    def pop(self) -> int:
        """Undo the last step; returns its colour"""
        if not self._entries:
            raise InvariantViolationError("Cannot step back from the start position")
        color = self._entries.pop()
        self._k.pop()
        self._nu[color - 1] -= 1
        self._x[color - 1].pop()
        return color


def evaluate(walk: StrategyWalk) -> RecursionTrace:
    """
    Evaluate the recursion along a walk

    Args:
        walk: Strategy walk

    Returns:
        RecursionTrace with k_0..k_d and x_s = (x_(s,0), ..., x_(s,l_s - 1))

    Raises:
        RecursionOverflowError: a value leaves the signed 128-bit range
    """
    cursor = RecursionCursor(walk.colors)
    for color in walk.entries:
        cursor.push(color)
    logger.debug(f"Evaluated walk of length {walk.d}: k={cursor.k}")
    return RecursionTrace.model_construct(
        walk=walk,
        k_values=cursor.k_values,
        x_sequences=[cursor.x(color) for color in range(1, walk.colors + 1)],
    )


def k_of_walk(walk: StrategyWalk) -> int:
    """k(alpha) = k_d"""
    cursor = RecursionCursor(walk.colors)
    for color in walk.entries:
        cursor.push(color)
    return cursor.k


def _require_two_colors(walk: StrategyWalk, operation: str) -> None:
    if walk.colors != 2:
        raise UnsupportedArityError(f"{operation} is defined for r=2 only, walk has r={walk.colors}")


def beta_from_trace(trace: RecursionTrace) -> int:
    """beta = 1 + min-split(x_2, c) for a walk in W(l, c)"""
    _require_two_colors(trace.walk, "beta")
    x2 = trace.x(2)
    return 1 + min_split(x2, len(x2))


def smallest_argmin_rate(values: Sequence[int], beta: int) -> Tuple[int, GrowthRate]:
    """Smallest j minimising (values[j] + beta)/(j + 1), with the minimum as a Fraction"""
    if not values:
        raise WalkValidationError("Cannot take a growth rate of an empty sequence")
    best = 0
    for j in range(1, len(values)):
        # (x_j + beta)/(j + 1) < (x_best + beta)/(best + 1)
        if (values[j] + beta) * (best + 1) < (values[best] + beta) * (j + 1):
            best = j
    return best, Fraction(values[best] + beta, best + 1)


def beta_of_walk(walk: StrategyWalk) -> int:
    _require_two_colors(walk, "beta")
    return beta_from_trace(evaluate(walk))


def delta_of_walk(walk: StrategyWalk) -> GrowthRate:
    """delta = min over j <= l - 1 of (x_(1,j) + beta)/(j + 1), exact"""
    _require_two_colors(walk, "delta")
    trace = evaluate(walk)
    _, rate = smallest_argmin_rate(trace.x(1), beta_from_trace(trace))
    return rate


def extended_x1(trace: RecursionTrace) -> List[int]:
    """x_1 with the terminal value x_(1,l_1) := k_d appended"""
    return trace.x(1) + [trace.k_final]


def within_power_ceiling(walk: StrategyWalk) -> bool:
    """Check k(alpha) <= c**log2(3) * l for alpha in W(l, c)"""
    _require_two_colors(walk, "Power ceiling")
    ell, c = walk.targets
    return power_ceiling_holds(k_of_walk(walk), ell, c)
