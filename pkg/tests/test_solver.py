"""
Tests for k* computation
"""

import random
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import List, Sequence

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pathram.exceptions import (
    InvariantViolationError,
    SearchCapExceededError,
    UnsupportedArityError,
    WalkValidationError,
)
from pathram.models import SearchReport
from pathram.recursion import RecursionCursor, k_of_walk, min_split
from pathram.solver import (
    TABLE_KSTAR,
    BranchAndBound,
    completion_ceiling,
    kstar_branch_and_bound,
    kstar_exhaustive,
    mstar_of_kstar,
    verify_table,
)
from pathram.walks import enumerate_walks, format_walk, make_walk, swap_colors, walk_count

from .conftest import OPTIMAL_28, OPTIMAL_28_ALT


@lru_cache(maxsize=None)
def exhaustive(l1: int, l2: int) -> SearchReport:
    return kstar_exhaustive((l1, l2))


pairs = st.tuples(st.integers(min_value=1, max_value=8), st.integers(min_value=1, max_value=8))


def complete(x1: List[int], x2: List[int], suffix: Sequence[int]) -> int:
    """Final k when the recursion resumes from the given x-sequences and takes `suffix`"""
    x = [list(x1), list(x2)]
    k = 1 + min_split(x[0], len(x[0])) + min_split(x[1], len(x[1]))
    for color in suffix:
        x[color - 1].append(k)
        k = 1 + min_split(x[0], len(x[0])) + min_split(x[1], len(x[1]))
    return k


def shuffled_walk(rng: random.Random, counts: Sequence[int]) -> List[int]:
    entries = [1] * counts[0] + [2] * counts[1]
    rng.shuffle(entries)
    return entries


@st.composite
def prefixes(draw):
    targets = draw(st.tuples(st.integers(min_value=2, max_value=7), st.integers(min_value=2, max_value=7)))
    remaining = [targets[0] - 1, targets[1] - 1]
    prefix = []
    for color in draw(st.lists(st.sampled_from([1, 2]), max_size=sum(remaining))):
        if remaining[color - 1]:
            remaining[color - 1] -= 1
            prefix.append(color)
    return targets, tuple(prefix)


class TestPruningRules:
    @given(prefixes(), st.booleans())
    def test_completion_ceiling_is_admissible(self, case, capped):
        targets, prefix = case
        cursor = RecursionCursor(2)
        for color in prefix:
            cursor.push(color)
        table = BranchAndBound(targets).ceiling if capped else None
        bound = completion_ceiling(cursor.x(1), cursor.x(2), cursor.k, targets, table)
        values = [
            k_of_walk(walk) for walk in enumerate_walks(targets) if walk.entries[:len(prefix)] == prefix
        ]
        assert bound >= max(values)

    @given(prefixes())
    def test_completion_ceiling_exact_on_forced_completion(self, case):
        targets, prefix = case
        cursor = RecursionCursor(2)
        for color in prefix:
            cursor.push(color)
        while cursor.nu[0] < targets[0] and cursor.nu[1] < targets[1]:
            cursor.push(1)
        a, b = cursor.nu
        suffix = [1] * (targets[0] - a) + [2] * (targets[1] - b)
        expected = complete(cursor.x(1), cursor.x(2), suffix)
        assert completion_ceiling(cursor.x(1), cursor.x(2), cursor.k, targets) == expected

    def test_ceiling_table(self):
        search = BranchAndBound((8, 8))
        assert search.ceiling[3][8] == 24
        assert search.ceiling[4][4] == 17
        assert search.ceiling[8][8] == 27 * 8

    def test_dominated_states_never_complete_higher(self):
        rng = random.Random(2024)
        for _ in range(10_000):
            l1 = rng.randint(2, 10)
            l2 = rng.randint(2, 20 - l1)
            a, b = rng.randint(1, l1), rng.randint(1, l2)
            prefix = shuffled_walk(rng, (a - 1, b - 1))
            cursor = RecursionCursor(2)
            for color in prefix:
                cursor.push(color)
            x1, x2 = cursor.x(1), cursor.x(2)
            y1 = [0] + [value + rng.randint(0, 5) for value in x1[1:]]
            y2 = [0] + [value + rng.randint(0, 5) for value in x2[1:]]
            suffix = shuffled_walk(rng, (l1 - a, l2 - b))
            low = complete(x1, x2, suffix)
            assert low == k_of_walk(make_walk(2, prefix + suffix))
            assert low <= complete(y1, y2, suffix)


class TestExhaustive:
    def test_two_by_two(self):
        report = kstar_exhaustive((2, 2))
        assert report.kstar == 4
        assert [w.entries for w in report.witnesses] == [(1, 2), (2, 1)]
        assert report.method == "exhaustive"

    @pytest.mark.parametrize("ell", [1, 2, 7])
    def test_single_colour_two(self, ell):
        report = kstar_exhaustive((ell, 1))
        assert report.kstar == ell
        assert len(report.witnesses) == 1

    def test_forty_by_four_bounds(self):
        report = kstar_exhaustive((40, 4))
        assert report.counters.leaves == comb(42, 3)
        assert 4 * 40 <= report.kstar <= 172

    def test_cap_refusal_reports_count(self):
        with pytest.raises(SearchCapExceededError) as excinfo:
            kstar_exhaustive((20, 20), node_cap=1000)
        assert excinfo.value.count == comb(38, 19)
        assert excinfo.value.cap == 1000

    def test_witnesses_are_maximal(self):
        report = exhaustive(5, 6)
        values = {w.entries: k_of_walk(w) for w in enumerate_walks((5, 6))}
        assert report.kstar == max(values.values())
        assert sorted(w.entries for w in report.witnesses) == sorted(
            entries for entries, value in values.items() if value == report.kstar
        )

    def test_pair_only(self):
        with pytest.raises(UnsupportedArityError):
            kstar_exhaustive((2, 2, 2))
        with pytest.raises(WalkValidationError):
            kstar_exhaustive((0, 2))


class TestBranchAndBound:
    @given(pairs)
    def test_matches_exhaustive(self, targets):
        expected = exhaustive(*targets)
        report = kstar_branch_and_bound(targets)
        assert report.kstar == expected.kstar
        assert [w.entries for w in report.witnesses] == [w.entries for w in expected.witnesses][:16]

    @given(pairs, st.integers(min_value=1, max_value=3))
    def test_witness_cap(self, targets, cap):
        expected = [w.entries for w in exhaustive(*targets).witnesses]
        report = kstar_branch_and_bound(targets, witness_cap=cap)
        assert [w.entries for w in report.witnesses] == expected[:cap]

    @given(pairs)
    def test_tiny_frontier_is_sound(self, targets):
        report = kstar_branch_and_bound(targets, frontier_cap=1)
        assert report.kstar == exhaustive(*targets).kstar

    def test_symmetric_witnesses_closed_under_swap(self):
        full = exhaustive(7, 7).witnesses
        assert {swap_colors(w).entries for w in full} == {w.entries for w in full}
        report = kstar_branch_and_bound((7, 7))
        assert [w.entries for w in report.witnesses] == sorted(w.entries for w in full)[:16]
        assert all(w.targets == (7, 7) for w in report.witnesses)

    def test_prunes(self):
        search = BranchAndBound((9, 9))
        search.run()
        assert search.best == 81
        pruned = search.counters.nodes_pruned_bound + search.counters.nodes_pruned_dominance
        assert pruned > 0
        assert search.counters.leaves < comb(16, 8)

    def test_prunes_most_of_the_tree(self):
        report = kstar_branch_and_bound((10, 10))
        assert report.kstar == 100
        assert report.counters.leaves * 20 < walk_count((10, 10))
        assert report.counters.nodes_expanded * 4 < exhaustive(10, 10).counters.nodes_expanded

    @given(pairs)
    def test_symmetric_in_targets(self, targets):
        l1, l2 = targets
        assert exhaustive(l1, l2).kstar == exhaustive(l2, l1).kstar
        assert kstar_branch_and_bound((l1, l2)).kstar == kstar_branch_and_bound((l2, l1)).kstar

    def test_parallel_agrees(self):
        serial = kstar_branch_and_bound((6, 7))
        parallel = kstar_branch_and_bound((6, 7), workers=2, split_depth=3)
        assert parallel.kstar == serial.kstar
        assert parallel.witnesses == serial.witnesses
        assert parallel.workers == 2

    @pytest.mark.parametrize("c", [1, 2, 3])
    def test_short_second_path(self, c):
        for ell in range(1, 31):
            assert kstar_branch_and_bound((ell, c)).kstar == c * ell

    def test_greedy_floor_enforced(self):
        with pytest.raises(InvariantViolationError):
            SearchReport(targets=(3, 3), kstar=8, method="exhaustive")

    def test_witness_cap_positive(self):
        with pytest.raises(WalkValidationError):
            kstar_branch_and_bound((3, 3), witness_cap=0)

    def test_frontier_cap_positive(self):
        with pytest.raises(WalkValidationError):
            kstar_branch_and_bound((3, 3), frontier_cap=0)

    @pytest.mark.slow
    def test_optimal_28(self):
        report = kstar_branch_and_bound((28, 28))
        assert report.kstar == 791
        texts = {format_walk(w) for w in report.witnesses}
        assert texts == {
            OPTIMAL_28,
            OPTIMAL_28_ALT,
            "2^6,1^2,2^7,1,2^14,1^24",
            "2,2,1,2,1,1,2^24,1^24",
        }

    @pytest.mark.slow
    @pytest.mark.parametrize("ell", [29, 30, 31, 32])
    def test_table_band(self, ell):
        assert kstar_branch_and_bound((ell, ell), workers=4).kstar == TABLE_KSTAR[ell]

    @pytest.mark.slow
    def test_small_pairs_oracle(self):
        for l1 in range(1, 26):
            for l2 in range(1, 27 - l1):
                assert kstar_branch_and_bound((l1, l2)).kstar == exhaustive(l1, l2).kstar


class TestTable:
    def test_small_table(self):
        report = verify_table(8)
        assert report.passed
        assert [row.ell for row in report.rows] == list(range(2, 9))
        assert all(row.kstar == row.ell ** 2 and row.diff == 0 for row in report.rows)

    def test_table_values(self):
        assert TABLE_KSTAR[28] == 791
        assert TABLE_KSTAR[30] == 902
        assert TABLE_KSTAR[32] == 32 ** 2 + 16
        assert all(TABLE_KSTAR[ell] == ell * ell for ell in range(2, 28))

    @pytest.mark.parametrize("max_ell", [1, 46])
    def test_range(self, max_ell):
        with pytest.raises(WalkValidationError):
            verify_table(max_ell)

    @pytest.mark.slow
    def test_up_to_27(self):
        assert verify_table(27, workers=4).passed


class TestMStar:
    @pytest.mark.parametrize("k, expected", [(4, Fraction(3, 4)), (1, Fraction(0)), (791, Fraction(790, 791))])
    def test_values(self, k, expected):
        assert mstar_of_kstar(k) == expected

    def test_zero(self):
        with pytest.raises(WalkValidationError):
            mstar_of_kstar(0)
