"""
Data models for strategy walks, recursion traces, search reports and game records
"""

from collections import Counter
from fractions import Fraction
from typing import Any, List, Literal, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator, model_validator
from typing_extensions import TypeAlias

from .algebraic import BOOTSTRAP_RATIO_LIMIT
from .exceptions import InvalidConfigurationError, InvariantViolationError, WalkValidationError

# Exact rational growth rate; Fraction keeps it in lowest terms.
GrowthRate: TypeAlias = Fraction
Targets: TypeAlias = Tuple[int, ...]


def format_rate(rate: Fraction) -> str:
    """Render a rational as 'num/den' with decimal integers"""
    return f"{rate.numerator}/{rate.denominator}"


def targets_from_entries(colors: int, entries: Sequence[int]) -> Targets:
    """Check entries against the colour set and derive (l_1, ..., l_r)"""
    if colors < 1:
        raise WalkValidationError(f"Number of colours must be at least 1, got {colors}")
    for index, color in enumerate(entries):
        if not 1 <= color <= colors:
            raise WalkValidationError(
                f"Walk entry at index {index} is {color}, expected a colour in 1..{colors}"
            )
    counts = Counter(entries)
    return tuple(1 + counts.get(color, 0) for color in range(1, colors + 1))


class FrozenModel(BaseModel):
    """Immutable base for all pathram records"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)


class StrategyWalk(FrozenModel):
    """Monotone lattice walk from (1,...,1) to targets; a Painter strategy sequence"""
    colors: int = Field(..., ge=1, description="Number of colours r")
    entries: Tuple[int, ...] = Field(default_factory=tuple, description="Colour of each step")
    targets: Targets = Field(..., description="Endpoint (l_1, ..., l_r) of the walk")

    @model_validator(mode="after")
    def _check_membership(self) -> "StrategyWalk":
        derived = targets_from_entries(self.colors, self.entries)
        if tuple(self.targets) != derived:
            raise WalkValidationError(
                f"Walk entries end at {derived}, not at the declared targets {tuple(self.targets)}"
            )
        return self

    @property
    def d(self) -> int:
        """Walk length, sum of (l_s - 1)"""
        return len(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


class WalkPosition(FrozenModel):
    """Position nu_i of a walk after i steps"""
    step: int = Field(..., ge=0)
    coords: Tuple[int, ...]


class RecursionTrace(FrozenModel):
    """Values k_0..k_d and x_1..x_r computed along one walk"""
    walk: StrategyWalk
    k_values: List[int]
    x_sequences: List[List[int]]

    @property
    def k_final(self) -> int:
        return self.k_values[-1]

    def x(self, color: int) -> List[int]:
        return self.x_sequences[color - 1]


class PeriodAnalysis(FrozenModel):
    """Eventual periodicity of x_nu = beta + min-split(x) after a finite prefix"""
    prefix: List[int]
    beta: int
    p: int = Field(..., ge=0, description="Smallest argmin of (x_j + beta)/(j + 1)")
    period_length: int
    increment: int
    rate: Fraction
    onset: int = Field(..., ge=0, description="First index from which the differences repeat")
    checked_until: int = Field(..., description="Last index of the verified extension")

    @field_serializer("rate")
    def _serialize_rate(self, rate: Fraction) -> str:
        return format_rate(rate)


class BootstrapParams(FrozenModel):
    """Parameters (q, s, t) of the nested P_l/P_4 construction"""
    q: Fraction
    s: int = Field(..., ge=1)
    t: int = Field(..., ge=0)

    @field_validator("q", mode="before")
    @classmethod
    def _parse_q(cls, value: Any) -> Fraction:
        if isinstance(value, Fraction):
            return value
        try:
            return Fraction(str(value))
        except (ValueError, ZeroDivisionError) as e:
            raise WalkValidationError(f"Cannot read q={value!r} as a rational: {e}")

    @model_validator(mode="after")
    def _check_params(self) -> "BootstrapParams":
        if (self.s * self.q).denominator != 1:
            raise WalkValidationError(f"s*q must be an integer, got s={self.s}, q={self.q}")
        if self.q < Fraction(13, 10) or BOOTSTRAP_RATIO_LIMIT.compare(self.q) >= 0:
            raise WalkValidationError(
                f"q={self.q} outside [13/10, {BOOTSTRAP_RATIO_LIMIT.expression})"
            )
        return self

    def schedule(self) -> List[Tuple[int, int, int]]:
        """(l_1, l_2, c) for generations 0..t"""
        rows = [(1, 1, 1)]
        for _ in range(self.t):
            _, l2_prev, c_prev = rows[-1]
            l1 = self.s * l2_prev
            rows.append((l1, int(self.q * l1), 4 * c_prev))
        return rows

    @field_serializer("q")
    def _serialize_q(self, q: Fraction) -> str:
        return format_rate(q)


class CeilingReport(FrozenModel):
    """Exhaustive check of delta(alpha) against the closed-form ceiling for one c"""
    c: int
    max_ell: int
    walks_checked: int
    max_delta: Fraction
    argmax: Optional[StrategyWalk] = None
    violations: List[StrategyWalk] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    @field_serializer("max_delta")
    def _serialize_delta(self, delta: Fraction) -> str:
        return format_rate(delta)


class InequalityReport(FrozenModel):
    """Exhaustive check of one closed-form inequality over W(l, c), l <= max_ell"""
    inequality: str
    c: int
    max_ell: int
    walks_checked: int
    violations: List[StrategyWalk] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


class LowerBoundCertificate(FrozenModel):
    """Exact check of k(alpha_hat) >= coeff * l_hat**exponent for the symmetric walk"""
    t: int
    ell_hat: int
    k: int
    coeff: Fraction
    exponent: Fraction
    holds: bool

    @field_serializer("coeff", "exponent")
    def _serialize_rational(self, value: Fraction) -> str:
        return format_rate(value)


class SearchCounters(BaseModel):
    """Node counters of one search run"""
    nodes_expanded: int = 0
    nodes_pruned_bound: int = 0
    nodes_pruned_dominance: int = 0
    leaves: int = 0

    def merge(self, other: "SearchCounters") -> None:
        self.nodes_expanded += other.nodes_expanded
        self.nodes_pruned_bound += other.nodes_pruned_bound
        self.nodes_pruned_dominance += other.nodes_pruned_dominance
        self.leaves += other.leaves


class SearchReport(FrozenModel):
    """Result of computing k*(P_l1, P_l2)"""
    targets: Targets
    kstar: int = Field(..., ge=1)
    witnesses: List[StrategyWalk] = Field(default_factory=list)
    counters: SearchCounters = Field(default_factory=SearchCounters)
    method: Literal["exhaustive", "branch_and_bound"]
    workers: int = 1
    wall_time: float = 0.0

    @model_validator(mode="after")
    def _check_greedy_floor(self) -> "SearchReport":
        floor = 1
        for ell in self.targets:
            floor *= ell
        if self.kstar < floor:
            raise InvariantViolationError(
                f"k*={self.kstar} below the greedy value {floor} for targets {self.targets}"
            )
        return self


class TableRow(FrozenModel):
    """One line of the k*(P_l, 2) comparison"""
    ell: int
    kstar: int
    table_value: int
    diff: int
    status: Literal["pass", "fail"]


class TableReport(FrozenModel):
    rows: List[TableRow]

    @property
    def passed(self) -> bool:
        return all(row.status == "pass" for row in self.rows)


class PainterView(FrozenModel):
    """Longest monochromatic paths each colour would complete at the new vertex"""
    raw: Tuple[int, ...] = Field(..., description="lambda'_s per colour")
    clamped: Tuple[int, ...] = Field(..., description="min(lambda'_s, l_s) per colour")

    @model_validator(mode="after")
    def _check_positive(self) -> "PainterView":
        if any(value < 1 for value in self.raw):
            raise InvariantViolationError(f"Path lengths must be at least 1, got {self.raw}")
        return self


class TranscriptEntry(FrozenModel):
    """One vertex placement on the board"""
    new_vertex: int
    edges: List[Tuple[int, int]]
    color: int
    component_size: int
    copy_of_tree: bool = Field(False, description="Vertex placed while copying a listed tree")


class GameResult(FrozenModel):
    """Outcome of one Builder-versus-Painter run"""
    targets: Targets
    decisions: List[int] = Field(default_factory=list, description="Extracted sequence alpha'")
    tree_sizes: List[int] = Field(default_factory=list)
    outcome: Literal["builder_wins", "cap_respected"]
    losing_color: Optional[int] = None
    final_path_length: Optional[int] = None
    largest_component: int = 0
    steps: int = 0
    cap: Optional[int] = None
    transcript: List[TranscriptEntry] = Field(default_factory=list)


class GameSnapshot(FrozenModel):
    """Board state right after one Builder step (the board object is live, not a copy)"""
    step: int
    position: Tuple[int, ...] = Field(..., description="Builder's list lengths nu_s before the step")
    view: Optional[PainterView] = None
    color: Optional[int] = None
    vertex: Optional[int] = None
    tree_size: int = 0
    final: bool = False
    halted: bool = Field(False, description="Step skipped because it would exceed the cap")
    board: Any = None


class InvariantVerdict(FrozenModel):
    """First violation of the component-size invariant, if any"""
    passed: bool
    steps_checked: int
    step: Optional[int] = None
    color: Optional[int] = None
    path_length: Optional[int] = None
    component_size: Optional[int] = None
    required: Optional[int] = None


class CommandConfig(BaseModel):
    """Validated options of one CLI invocation"""
    subcommand: Literal[
        "kstar", "eval-walk", "verify-table", "delta-family",
        "bootstrap", "symmetric-lb", "simulate", "period",
    ]
    targets: Optional[Tuple[int, ...]] = None
    walk: Optional[str] = None
    c: Optional[int] = None
    t: Optional[int] = Field(None, ge=0)
    q: Optional[Fraction] = None
    s: Optional[int] = Field(None, ge=1)
    method: Literal["exhaustive", "bb"] = "bb"
    output_format: Literal["json", "csv", "text"] = "text"
    workers: int = Field(1, ge=1)
    witness_cap: int = Field(16, ge=1)
    seed: int = 0
    painter: Literal["strategy", "greedy", "random"] = "greedy"
    cap: Optional[int] = Field(None, ge=1)
    colors: Optional[int] = Field(None, ge=1)

    model_config = ConfigDict(arbitrary_types_allowed=True)

    @model_validator(mode="after")
    def _check_combinations(self) -> "CommandConfig":
        if self.method == "exhaustive" and self.workers > 1:
            raise InvalidConfigurationError("--workers applies to --method bb only")
        if self.subcommand == "simulate":
            if self.painter == "strategy" and self.walk is None:
                raise InvalidConfigurationError("--painter strategy needs --walk")
            if self.painter != "strategy" and self.walk is not None:
                raise InvalidConfigurationError(f"--walk cannot be combined with --painter {self.painter}")
            if self.walk is None and self.targets is None:
                raise InvalidConfigurationError("simulate needs --l1/--l2 or --walk")
        return self
