"""
Tests for periodicity, delta ceilings and the explicit walk families
"""

import logging
from decimal import Decimal
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pathram.algebraic import (
    BOOTSTRAP_RATIO_LIMIT,
    DELTA_LIMITS,
    at_least_power,
    power_ceiling_holds,
    to_significant,
)
from pathram.asymptotics import (
    bootstrap_rate,
    bootstrap_walk,
    certify_symmetric_lb,
    check_delta_ceiling,
    check_delta_monotonicity,
    check_kstar_ceiling,
    delta_ceiling,
    delta_family,
    extend_recurrence,
    family_lengths,
    kstar_ceiling,
    period_analysis,
    symmetric_lb_walk,
)
from pathram.exceptions import (
    InvariantViolationError,
    RecursionOverflowError,
    WalkValidationError,
)
from pathram.models import BootstrapParams
from pathram.recursion import beta_of_walk, delta_of_walk, evaluate, k_of_walk
from pathram.solver import kstar_exhaustive


prefixes = st.lists(st.integers(min_value=0, max_value=10**4), min_size=1, max_size=12)
offsets = st.integers(min_value=1, max_value=10**4)


def check_periodic_regime(prefix, beta):
    analysis = period_analysis(prefix, beta)
    period = analysis.period_length
    assert period == analysis.p + 1
    values = extend_recurrence(prefix, beta, analysis.checked_until + 3 * period)
    for nu in range(len(prefix), len(values)):
        if nu >= period:
            assert values[nu] - values[nu - period] <= analysis.increment
    p = analysis.p
    for m in range((len(values) - 1 - p) // period + 1):
        assert values[p + m * period] - values[p] >= m * (values[p] + beta)
    for nu in range(analysis.onset, len(values) - period):
        assert values[nu + period] - values[nu] == analysis.increment
    if analysis.onset > 0:
        nu = analysis.onset - 1
        assert values[nu + period] - values[nu] != analysis.increment
    assert analysis.rate == Fraction(analysis.increment, period)


class TestRecurrence:
    def test_extend(self):
        assert extend_recurrence([0, 1], 2, 5) == [0, 1, 3, 4, 6, 7]

    @pytest.mark.parametrize("c", [1, 3, 7])
    def test_single_value_prefix(self, c):
        assert extend_recurrence([0], c, 6) == [c * j for j in range(7)]

    def test_prefix_longer_than_n(self):
        with pytest.raises(WalkValidationError):
            extend_recurrence([0, 1, 2], 1, 1)

    def test_overflow_names_index(self):
        with pytest.raises(RecursionOverflowError) as excinfo:
            extend_recurrence([0, 2**126], 2**126, 4)
        assert excinfo.value.step == 2


class TestPeriodAnalysis:
    def test_small_prefix(self):
        analysis = period_analysis([0, 1], 2)
        assert (analysis.p, analysis.period_length, analysis.increment) == (1, 2, 3)
        assert analysis.rate == Fraction(3, 2)
        assert analysis.onset == 0

    def test_arithmetic(self):
        analysis = period_analysis([0], 1)
        assert (analysis.p, analysis.period_length, analysis.increment) == (0, 1, 1)
        assert analysis.rate == Fraction(1)

    def test_family_prefix(self):
        walk = delta_family(4, 1)
        trace = evaluate(walk)
        analysis = period_analysis(trace.x(1), beta_of_walk(walk))
        assert analysis.rate == Fraction(43, 10) == delta_of_walk(walk)
        assert analysis.period_length == 10
        assert analysis.increment == 43

    def test_empty_prefix(self):
        with pytest.raises(WalkValidationError):
            period_analysis([], 1)

    def test_extension_cap(self):
        with pytest.raises(InvariantViolationError):
            period_analysis([0, 1], 2, max_extensions=2)

    @given(prefixes, offsets)
    def test_periodic_after_onset(self, prefix, beta):
        check_periodic_regime(prefix, beta)

    @pytest.mark.slow
    @settings(max_examples=1000)
    @given(prefixes, offsets)
    def test_periodic_after_onset_wide(self, prefix, beta):
        check_periodic_regime(prefix, beta)


class TestFamilies:
    def test_lengths(self):
        assert family_lengths(4, 1) == (10, 13)
        assert family_lengths(5, 1) == (10, 12, 14)
        assert family_lengths(6, 1) == (10, 11, 13)

    def test_four_generation_one(self):
        walk = delta_family(4, 1)
        assert walk.targets == (13, 4)
        assert walk.entries == (1,) * 9 + (2,) + (1,) * 3 + (2, 2)
        assert delta_of_walk(walk) == Fraction(43, 10)

    @pytest.mark.parametrize("c", [5, 6])
    def test_other_families(self, c):
        walk = delta_family(c, 1)
        assert walk.targets == (family_lengths(c, 1)[-1], c)
        assert walk.entries[-1] == 2
        assert delta_ceiling(c).compare(delta_of_walk(walk)) <= 0

    def test_unsupported_c(self):
        with pytest.raises(WalkValidationError):
            delta_family(3, 1)
        with pytest.raises(WalkValidationError):
            delta_ceiling(7)

    def test_convergence(self):
        deltas = [delta_of_walk(delta_family(4, t)) for t in range(1, 4)]
        assert deltas == sorted(deltas)
        assert all(DELTA_LIMITS[4].compare(delta) < 0 for delta in deltas)
        assert DELTA_LIMITS[4].to_decimal(20) - Decimal(deltas[-1].numerator) / deltas[-1].denominator < Decimal("0.001")

    @pytest.mark.slow
    def test_convergence_four(self):
        deltas = [delta_of_walk(delta_family(4, t)) for t in range(1, 5)]
        assert deltas == sorted(deltas)
        limit = DELTA_LIMITS[4].to_decimal(20)
        assert abs(Decimal(deltas[-1].numerator) / deltas[-1].denominator - limit) < Decimal("0.0001")

    @pytest.mark.slow
    @pytest.mark.parametrize("c", [5, 6])
    def test_convergence_wider(self, c):
        delta = delta_of_walk(delta_family(c, 4))
        limit = DELTA_LIMITS[c].to_decimal(20)
        assert abs(Decimal(delta.numerator) / delta.denominator - limit) < Decimal("0.001")

    @pytest.mark.slow
    @pytest.mark.parametrize("c, max_ell", [(4, 12), (5, 10), (6, 10)])
    def test_ceiling_check_wide(self, c, max_ell):
        report = check_delta_ceiling(c, max_ell)
        assert report.passed
        assert report.violations == []

    def test_ceiling_check(self):
        report = check_delta_ceiling(4, 8)
        assert report.passed
        assert report.walks_checked == 120
        assert DELTA_LIMITS[4].compare(report.max_delta) < 0
        assert report.argmax is not None

    def test_ceiling_check_five(self):
        assert check_delta_ceiling(5, 6).passed


class TestKStarCeilings:
    @pytest.mark.parametrize(
        "l1, l2, expected",
        [(7, 3, 21), (3, 7, 21), (10, 4, 43), (10, 5, 54), (10, 6, 65), (8, 8, 216), (9, 7, 243)],
    )
    def test_closed_form(self, l1, l2, expected):
        assert kstar_ceiling(l1, l2) == expected

    def test_bounds_exhaustive_values(self):
        for l1 in range(1, 9):
            for l2 in range(1, 9):
                assert kstar_exhaustive((l1, l2)).kstar <= kstar_ceiling(l1, l2)

    def test_rejects_empty_targets(self):
        with pytest.raises(WalkValidationError):
            kstar_ceiling(0, 3)

    @pytest.mark.parametrize("c, max_ell", [(1, 12), (2, 12), (3, 12), (4, 12), (5, 10), (6, 9)])
    def test_walks_stay_below_ceiling(self, c, max_ell):
        report = check_kstar_ceiling(c, max_ell)
        assert report.passed
        assert report.walks_checked == sum(comb(ell + c - 2, c - 1) for ell in range(1, max_ell + 1))

    @pytest.mark.parametrize("c, max_ell", [(3, 12), (4, 12), (5, 10), (6, 9)])
    def test_delta_grows_with_c(self, c, max_ell):
        report = check_delta_monotonicity(c, max_ell)
        assert report.passed
        assert report.walks_checked == sum(comb(ell + c - 4, c - 3) for ell in range(1, max_ell + 1))

    def test_out_of_range(self):
        with pytest.raises(WalkValidationError):
            check_kstar_ceiling(7, 3)
        with pytest.raises(WalkValidationError):
            check_delta_monotonicity(2, 3)


class TestBootstrap:
    def test_matches_family(self, caplog):
        params = BootstrapParams(q=Fraction(13, 10), s=10, t=1)
        with caplog.at_level(logging.WARNING):
            walk = bootstrap_walk(params)
        assert walk == delta_family(4, 1)
        assert "s=10" in caplog.text

    def test_generation_zero(self):
        assert bootstrap_walk(BootstrapParams(q="1.3", s=320, t=0)).targets == (1, 1)

    def test_first_generation(self):
        params = BootstrapParams(q=Fraction(13, 10), s=320, t=1)
        assert params.schedule() == [(1, 1, 1), (320, 416, 4)]
        assert bootstrap_walk(params).targets == (416, 4)

    def test_rate_bound(self):
        rate = bootstrap_rate(Fraction(13, 10), 320)
        assert rate == Fraction(681, 160)
        assert rate >= Fraction(17, 4)

    def test_rate_large_s(self):
        assert abs(bootstrap_rate("13/10", 10**9) - Fraction(43, 10)) < Fraction(1, 10**6)
        q = Fraction(1302775, 10**6)
        assert BOOTSTRAP_RATIO_LIMIT.compare(q) < 0
        rate = bootstrap_rate(q, 10**9)
        assert abs(Decimal(rate.numerator) / rate.denominator - DELTA_LIMITS[4].to_decimal(20)) < Decimal("0.000001")

    def test_degenerate_rate(self):
        assert bootstrap_rate(1, 1) == -15

    def test_rate_rejects_nonpositive_q(self):
        with pytest.raises(WalkValidationError):
            bootstrap_rate(0, 10)

    def test_delta_meets_rate(self):
        walk = bootstrap_walk(BootstrapParams(q=Fraction(13, 10), s=320, t=1))
        assert delta_of_walk(walk) >= bootstrap_rate(Fraction(13, 10), 320)


    @pytest.mark.slow
    def test_second_generation(self):
        params = BootstrapParams(q=Fraction(13, 10), s=320, t=2)
        walk = bootstrap_walk(params)
        assert walk.targets == (173056, 16)
        assert delta_of_walk(walk) >= Fraction(17, 4) ** 2

class TestSymmetricBound:
    def test_generation_zero(self):
        walk = symmetric_lb_walk(0)
        assert walk.entries == (1,) * 9 + (2,) * 9
        assert k_of_walk(walk) == 100

    def test_generation_one(self):
        certificate = certify_symmetric_lb(1)
        assert certificate.ell_hat == 4160
        assert certificate.holds
        assert symmetric_lb_walk(1).targets == (4160, 4160)

    def test_refuses_large_generations(self):
        with pytest.raises(RecursionOverflowError):
            symmetric_lb_walk(3)


class TestAlgebraic:
    def test_constants(self):
        assert to_significant(DELTA_LIMITS[4].to_decimal(30)) == "4.30277564"
        assert to_significant(DELTA_LIMITS[5].to_decimal(30)) == "5.44948974"
        assert to_significant(DELTA_LIMITS[6].to_decimal(30)) == "6.54138127"

    def test_compare(self):
        assert DELTA_LIMITS[4].compare(Fraction(43, 10)) == -1
        assert DELTA_LIMITS[4].compare(Fraction(431, 100)) == 1
        assert BOOTSTRAP_RATIO_LIMIT.compare(Fraction(13, 10)) == -1

    def test_at_least_power(self):
        assert at_least_power(100, Fraction(1, 2), 10, Fraction(201, 100))
        assert not at_least_power(51, Fraction(1, 2), 10, Fraction(201, 100))

    def test_power_ceiling(self):
        assert power_ceiling_holds(36, 4, 4)
        assert not power_ceiling_holds(37, 4, 4)
        assert power_ceiling_holds(28, 5, 3)
        assert not power_ceiling_holds(29, 5, 3)

    @given(st.sampled_from([4, 5, 6]), st.integers(min_value=1, max_value=10**6))
    def test_floor_times(self, c, ell):
        surd = DELTA_LIMITS[c]
        m = surd.floor_times(ell)
        assert surd.compare(Fraction(m, ell)) <= 0
        assert surd.compare(Fraction(m + 1, ell)) > 0

    def test_floor_times_rejects_zero(self):
        with pytest.raises(WalkValidationError):
            DELTA_LIMITS[4].floor_times(0)
