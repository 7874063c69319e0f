"""
Strategy walks: construction, run-length text format, enumeration and the colour-choice rule
"""

import logging
import re
from itertools import groupby
from math import comb
from typing import Iterator, List, Optional, Sequence, Tuple

from .exceptions import (
    InvariantViolationError,
    TerminalPositionError,
    UnsupportedArityError,
    WalkValidationError,
)
from .models import StrategyWalk, Targets, WalkPosition, targets_from_entries

logger = logging.getLogger(__name__)

_RUN_TOKEN = re.compile(r"^(\d+)(?:\^(\d+))?$")


def make_walk(colors: int, entries: Sequence[int]) -> StrategyWalk:
    """
    Build a validated walk; targets are derived from the colour counts

    Args:
        colors: Number of colours r
        entries: Colour of each step, 1-based

    Returns:
        StrategyWalk in W(l_1, ..., l_r) with l_s = 1 + (count of s)
    """
    entries = tuple(int(color) for color in entries)
    targets = targets_from_entries(colors, entries)
    return StrategyWalk(colors=colors, entries=entries, targets=targets)


def walk_from_runs(colors: int, runs: Sequence[Tuple[int, int]]) -> StrategyWalk:
    """Build a walk from (colour, repetitions) pairs, e.g. (1)^6 o (2,2) -> [(1, 6), (2, 2)]"""
    entries: List[int] = []
    for color, length in runs:
        if length < 0:
            raise WalkValidationError(f"Run of colour {color} has negative length {length}")
        entries.extend([color] * length)
    return make_walk(colors, entries)


def parse_walk(text: str, colors: Optional[int] = None) -> StrategyWalk:
    """
    Parse the run-length walk format, e.g. '1^6,2^2,1^7,2,1^14,2^24'

    Args:
        text: Comma-separated tokens 'c^n' or 'c'; whitespace is ignored
        colors: Number of colours (defaults to the largest colour present, at least 2)

    Returns:
        Parsed StrategyWalk
    """
    compact = "".join(text.split())
    runs: List[Tuple[int, int]] = []
    if compact:
        for position, token in enumerate(compact.split(",")):
            match = _RUN_TOKEN.match(token)
            if not match:
                raise WalkValidationError(f"Malformed walk token {token!r} at position {position}")
            length = int(match.group(2)) if match.group(2) is not None else 1
            runs.append((int(match.group(1)), length))
    if colors is None:
        colors = max([2] + [color for color, _ in runs])
    return walk_from_runs(colors, runs)


def format_walk(walk: StrategyWalk) -> str:
    """Render a walk in the run-length format (inverse of parse_walk)"""
    tokens = []
    for color, run in groupby(walk.entries):
        length = sum(1 for _ in run)
        tokens.append(f"{color}^{length}" if length > 1 else f"{color}")
    return ",".join(tokens)


def _check_targets(targets: Sequence[int]) -> Targets:
    targets = tuple(int(ell) for ell in targets)
    if not targets:
        return (1,)
    for color, ell in enumerate(targets, start=1):
        if ell < 1:
            raise WalkValidationError(f"Target l_{color}={ell} must be at least 1")
    return targets


def walk_count(targets: Sequence[int]) -> int:
    """|W(l_1, ..., l_r)|, the multinomial of d over (l_1 - 1, ..., l_r - 1)"""
    total = 0
    count = 1
    for ell in _check_targets(targets):
        total += ell - 1
        count *= comb(total, ell - 1)
    return count


def positions(walk: StrategyWalk) -> List[WalkPosition]:
    """Positions nu_0, ..., nu_d of the walk, starting at (1, ..., 1)"""
    coords = [1] * walk.colors
    result = [WalkPosition(step=0, coords=tuple(coords))]
    for step, color in enumerate(walk.entries, start=1):
        coords[color - 1] += 1
        result.append(WalkPosition(step=step, coords=tuple(coords)))
    return result


def enumerate_walks(targets: Sequence[int]) -> Iterator[StrategyWalk]:
    """Yield every walk of W(l_1, ..., l_r) once, in lexicographic order of entries"""
    targets = _check_targets(targets)
    colors = len(targets)
    remaining = [ell - 1 for ell in targets]
    d = sum(remaining)
    prefix: List[int] = []

    def extend() -> Iterator[StrategyWalk]:
        if len(prefix) == d:
            # entries are valid by construction
            yield StrategyWalk.model_construct(colors=colors, entries=tuple(prefix), targets=targets)
            return
        for color in range(1, colors + 1):
            if remaining[color - 1]:
                remaining[color - 1] -= 1
                prefix.append(color)
                yield from extend()
                prefix.pop()
                remaining[color - 1] += 1

    yield from extend()


def greedy_walk(targets: Sequence[int]) -> StrategyWalk:
    """The greedy strategy (r)^(l_r - 1) o ... o (1)^(l_1 - 1)"""
    targets = _check_targets(targets)
    entries: List[int] = []
    for color in range(len(targets), 0, -1):
        entries.extend([color] * (targets[color - 1] - 1))
    return make_walk(len(targets), entries)


def swap_colors(walk: StrategyWalk) -> StrategyWalk:
    """Exchange colours 1 and 2; maps W(l_1, l_2) onto W(l_2, l_1)"""
    if walk.colors != 2:
        raise UnsupportedArityError(f"Colour swap needs r=2, walk has r={walk.colors}")
    return StrategyWalk(
        colors=2,
        entries=tuple(3 - color for color in walk.entries),
        targets=(walk.targets[1], walk.targets[0]),
    )


def choose_color(walk: StrategyWalk, lam: Sequence[int]) -> Tuple[int, int]:
    """
    Find the step where the walk first leaves the box [1, lambda_1] x ... x [1, lambda_r]

    Args:
        walk: Strategy walk alpha
        lam: Clamped path lengths (lambda_1, ..., lambda_r), 1 <= lambda_s <= l_s

    Returns:
        (i, sigma) with sigma = alpha_(i+1), nu_(i,sigma) = lambda_sigma and
        nu_(i,s) <= lambda_s for every other colour s

    Raises:
        TerminalPositionError: lambda equals the targets
    """
    lam = tuple(lam)
    if len(lam) != walk.colors:
        raise WalkValidationError(f"Expected {walk.colors} path lengths, got {len(lam)}")
    for color, (value, ell) in enumerate(zip(lam, walk.targets), start=1):
        if not 1 <= value <= ell:
            raise WalkValidationError(f"lambda_{color}={value} outside 1..{ell}")
    if lam == walk.targets:
        raise TerminalPositionError(walk.targets)

    nu = [1] * walk.colors
    for index, sigma in enumerate(walk.entries):
        if nu[sigma - 1] == lam[sigma - 1]:
            return index, sigma
        nu[sigma - 1] += 1
    raise InvariantViolationError(f"Walk never left the box {lam}")
