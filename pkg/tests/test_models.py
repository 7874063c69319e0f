"""
Tests for data models
"""

from fractions import Fraction

import pytest
from pydantic import ValidationError

from pathram.exceptions import InvalidConfigurationError, InvariantViolationError, WalkValidationError
from pathram.models import (
    BootstrapParams,
    CommandConfig,
    PainterView,
    PeriodAnalysis,
    SearchCounters,
    StrategyWalk,
    format_rate,
    targets_from_entries,
)


class TestStrategyWalk:
    def test_declared_targets_checked(self):
        with pytest.raises(WalkValidationError):
            StrategyWalk(colors=2, entries=(1, 2), targets=(3, 2))

    def test_frozen(self):
        walk = StrategyWalk(colors=2, entries=(1,), targets=(2, 1))
        with pytest.raises(ValidationError):
            walk.entries = (2,)

    def test_targets_from_entries(self):
        assert targets_from_entries(3, [1, 3, 3]) == (2, 1, 3)
        with pytest.raises(WalkValidationError):
            targets_from_entries(0, [])


class TestBootstrapParams:
    def test_parses_decimal_text(self):
        params = BootstrapParams(q="1.3", s=320, t=2)
        assert params.q == Fraction(13, 10)
        assert params.schedule()[-1] == (133120, 173056, 16)

    def test_integral_product(self):
        with pytest.raises(WalkValidationError):
            BootstrapParams(q=Fraction(13, 10), s=3, t=1)

    @pytest.mark.parametrize("q", [Fraction(1), Fraction(131, 100)])
    def test_ratio_window(self, q):
        with pytest.raises(WalkValidationError):
            BootstrapParams(q=q, s=100, t=1)

    def test_bad_q_text(self):
        with pytest.raises(WalkValidationError):
            BootstrapParams(q="thirteen", s=10, t=1)

    def test_serialises_q(self):
        assert BootstrapParams(q="13/10", s=10, t=1).model_dump(mode="json")["q"] == "13/10"


class TestRecords:
    def test_period_rate_serialised(self):
        analysis = PeriodAnalysis(
            prefix=[0, 1], beta=2, p=1, period_length=2, increment=3,
            rate=Fraction(3, 2), onset=0, checked_until=8,
        )
        assert analysis.model_dump(mode="json")["rate"] == "3/2"

    def test_format_rate(self):
        assert format_rate(Fraction(790, 791)) == "790/791"
        assert format_rate(Fraction(4)) == "4/1"

    def test_counters_merge(self):
        total = SearchCounters(nodes_expanded=2, leaves=1)
        total.merge(SearchCounters(nodes_expanded=3, nodes_pruned_bound=4))
        assert total.nodes_expanded == 5
        assert total.nodes_pruned_bound == 4
        assert total.leaves == 1

    def test_painter_view_positive(self):
        with pytest.raises(InvariantViolationError):
            PainterView(raw=(0, 1), clamped=(0, 1))


class TestCommandConfig:
    def test_defaults(self):
        command = CommandConfig(subcommand="kstar", targets=(3, 3))
        assert command.method == "bb"
        assert command.output_format == "text"
        assert command.witness_cap == 16

    def test_exhaustive_is_serial(self):
        with pytest.raises(InvalidConfigurationError):
            CommandConfig(subcommand="kstar", targets=(3, 3), method="exhaustive", workers=2)

    def test_strategy_painter_needs_walk(self):
        with pytest.raises(InvalidConfigurationError):
            CommandConfig(subcommand="simulate", targets=(2, 2), painter="strategy")

    def test_walk_needs_strategy_painter(self):
        with pytest.raises(InvalidConfigurationError):
            CommandConfig(subcommand="simulate", walk="1,2", painter="greedy")

    def test_simulate_needs_targets(self):
        with pytest.raises(InvalidConfigurationError):
            CommandConfig(subcommand="simulate", painter="greedy")

    def test_field_bounds(self):
        with pytest.raises(ValidationError):
            CommandConfig(subcommand="kstar", workers=0)
        with pytest.raises(ValidationError):
            CommandConfig(subcommand="eval-tree")
