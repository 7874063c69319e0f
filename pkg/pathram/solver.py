"""
Exact computation of k*(P_l1, P_l2) as the maximum of k(alpha) over W(l1, l2)
"""

import logging
import time
from fractions import Fraction
from multiprocessing import Pool
from multiprocessing.sharedctypes import Value
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .asymptotics import kstar_ceiling
from .exceptions import SearchCapExceededError, UnsupportedArityError, WalkValidationError
from .models import GrowthRate, SearchCounters, SearchReport, StrategyWalk, TableReport, TableRow
from .recursion import INT64_SAFE, RecursionCursor, min_split
from .walks import walk_count

logger = logging.getLogger(__name__)

DEFAULT_NODE_CAP = 10**8
DEFAULT_WITNESS_CAP = 16
DEFAULT_FRONTIER_CAP = 64
DEFAULT_SPLIT_DEPTH = 6

# k*(P_l, P_l) for 2 <= l <= 45; every l <= 27 gives l**2.
TABLE_KSTAR: Dict[int, int] = {ell: ell * ell for ell in range(2, 28)}
TABLE_KSTAR.update({
    28: 791, 29: 841, 30: 902, 31: 961, 32: 1040, 33: 1089, 34: 1156, 35: 1225,
    36: 1323, 37: 1376, 38: 1449, 39: 1521, 40: 1641, 41: 1699, 42: 1796, 43: 1856,
    44: 1991, 45: 2057,
})

# How often a worker re-reads the shared incumbent.
_SYNC_INTERVAL = 1024


def _check_pair(targets: Sequence[int]) -> Tuple[int, int]:
    targets = tuple(int(ell) for ell in targets)
    if len(targets) != 2:
        raise UnsupportedArityError(f"Search supports two colours, got targets {targets}")
    for color, ell in enumerate(targets, start=1):
        if ell < 1:
            raise WalkValidationError(f"Target l_{color}={ell} must be at least 1")
    return targets  # type: ignore[return-value]


def _witness(entries: Sequence[int], targets: Tuple[int, int]) -> StrategyWalk:
    return StrategyWalk.model_construct(colors=2, entries=tuple(entries), targets=targets)


def _merge_witnesses(
    entry_lists: Sequence[Sequence[int]], targets: Tuple[int, int], cap: Optional[int], symmetric: bool
) -> List[StrategyWalk]:
    pool = {tuple(entries) for entries in entry_lists}
    if symmetric:
        pool |= {tuple(3 - color for color in entries) for entries in pool}
    ordered = sorted(pool)
    if cap is not None:
        ordered = ordered[:cap]
    return [_witness(entries, targets) for entries in ordered]


def kstar_exhaustive(targets: Sequence[int], node_cap: Optional[int] = None) -> SearchReport:
    """
    Maximum of k(alpha) over every walk of W(l1, l2)

    Args:
        targets: (l1, l2)
        node_cap: Largest |W(l1, l2)| accepted (default 10**8)

    Returns:
        SearchReport with the complete witness list

    Raises:
        SearchCapExceededError: |W(l1, l2)| exceeds node_cap
    """
    targets = _check_pair(targets)
    cap = DEFAULT_NODE_CAP if node_cap is None else node_cap
    count = walk_count(targets)
    if count > cap:
        logger.warning(f"Refusing exhaustive search over {count} walks for {targets} (cap {cap})")
        raise SearchCapExceededError(count, cap)

    logger.info(f"Exhaustive search over {count} walks for targets {targets}")
    started = time.perf_counter()
    counters = SearchCounters()
    cursor = RecursionCursor(2)
    remaining = [targets[0] - 1, targets[1] - 1]
    best = 0
    witnesses: List[Tuple[int, ...]] = []

    def visit() -> None:
        nonlocal best, witnesses
        if not remaining[0] and not remaining[1]:
            counters.leaves += 1
            if cursor.k > best:
                best, witnesses = cursor.k, [cursor.entries]
            elif cursor.k == best:
                witnesses.append(cursor.entries)
            return
        counters.nodes_expanded += 1
        for color in (1, 2):
            if remaining[color - 1]:
                remaining[color - 1] -= 1
                cursor.push(color)
                visit()
                cursor.pop()
                remaining[color - 1] += 1

    visit()
    elapsed = time.perf_counter() - started
    logger.info(f"Exhaustive k*{targets} = {best} with {len(witnesses)} witnesses in {elapsed:.2f}s")
    return SearchReport(
        targets=targets,
        kstar=best,
        witnesses=[_witness(entries, targets) for entries in witnesses],
        counters=counters,
        method="exhaustive",
        wall_time=elapsed,
    )


def completion_ceiling(
    x1: Sequence[int],
    x2: Sequence[int],
    k: int,
    targets: Tuple[int, int],
    ceiling: Optional[Sequence[Sequence[int]]] = None,
) -> int:
    """
    Upper bound on k(alpha) over every walk in W(l1, l2) extending a prefix

    The prefix sits at lattice point (a, b) = (len(x1), len(x2)) with value k.
    Every cell (i, j) of the remaining box gets a bound U(i, j) from the
    recursion itself, with each unknown entry x_(1,t) (t >= a) replaced by the
    largest U on column t up to row j, and each unknown x_(2,m) by the largest
    U on row m up to column i. Min-split is monotone in every entry, so U
    dominates the true k at each cell along every completion. When one colour
    is exhausted the bound is exact.

    Args:
        x1, x2: x-sequences of the prefix
        k: k at the prefix end
        targets: (l1, l2)
        ceiling: Optional table with ceiling[i][j] >= k*(P_i, P_j), used to cap U

    Returns:
        U(l1, l2)
    """
    l1, l2 = targets
    a, b = len(x1), len(x2)
    x1, x2 = list(x1), list(x2)
    column_max = [0] * (l1 - a + 1)
    # row_max[m - b][i - a] = max of U(t, m) over a <= t <= i
    row_max: List[List[int]] = []
    value = k
    for j in range(b, l2 + 1):
        running = 0
        row: List[int] = []
        for i in range(a, l1 + 1):
            if i > a or j > b:
                seq1 = x1 + column_max[:i - a]
                seq2 = x2 + [prior[i - a] for prior in row_max]
                value = 1 + min_split(seq1, i) + min_split(seq2, j)
                if ceiling is not None:
                    value = min(value, ceiling[i][j])
            column_max[i - a] = max(column_max[i - a], value)
            running = max(running, value)
            row.append(running)
        row_max.append(row)
    return value


class _Frontier:
    """Expanded states at one lattice point with their subtree bounds; the oldest entry is evicted first"""

    def __init__(self, width: int, cap: int):
        self.states = np.empty((cap, width), dtype=np.int64)
        self.bounds: List[int] = []
        self._next = 0

    def dominating(self, state: np.ndarray, beaten: Callable[[int], bool]) -> Optional[int]:
        """Bound of a stored state that pointwise dominates `state` and cannot add a result"""
        if not self.bounds:
            return None
        covered = np.all(self.states[:len(self.bounds)] >= state, axis=1)
        for index in np.flatnonzero(covered):
            if beaten(self.bounds[index]):
                return self.bounds[index]
        return None

    def add(self, state: np.ndarray, bound: int) -> None:
        self.states[self._next] = state
        if len(self.bounds) < len(self.states):
            self.bounds.append(bound)
        else:
            self.bounds[self._next] = bound
        self._next = (self._next + 1) % len(self.states)


class BranchAndBound:
    """
    Depth-first search over walk prefixes in lexicographic order

    A prefix is cut when k_i * 2**(remaining steps) or the completion ceiling
    cannot beat the incumbent, or when its x-sequences are pointwise dominated
    by an already expanded prefix at the same lattice point whose subtree bound
    cannot beat it. Ties with the incumbent are kept until the witness list is
    full. Once one colour is exhausted the single completion is evaluated
    directly.
    """

    def __init__(
        self,
        targets: Tuple[int, int],
        witness_cap: int = DEFAULT_WITNESS_CAP,
        frontier_cap: int = DEFAULT_FRONTIER_CAP,
        incumbent: Optional[int] = None,
        shared: Optional[Any] = None,
    ):
        """
        Initialize a search over W(l1, l2)

        Args:
            targets: (l1, l2)
            witness_cap: Number of maximizing walks retained
            frontier_cap: Dominance entries kept per lattice point
            incumbent: Starting lower bound (defaults to the greedy value l1*l2)
            shared: Optional multiprocessing Value holding the global incumbent
        """
        self.targets = targets
        self.witness_cap = witness_cap
        self.frontier_cap = frontier_cap
        self.shared = shared
        self.best = targets[0] * targets[1] if incumbent is None else incumbent
        self.found = 0
        self.witnesses: List[Tuple[int, ...]] = []
        self.counters = SearchCounters()
        self.frontier: Dict[Tuple[int, ...], _Frontier] = {}
        self.ceiling = [
            [kstar_ceiling(i, j) if i and j else 0 for j in range(targets[1] + 1)]
            for i in range(targets[0] + 1)
        ]
        self._cursor = RecursionCursor(2)
        self._remaining = [targets[0] - 1, targets[1] - 1]
        self._ticks = 0

    def _collecting(self) -> bool:
        return len(self.witnesses) < self.witness_cap or self.found < self.best

    def _beaten_by(self, bound: int) -> bool:
        """True when no completion bounded by `bound` can add a result"""
        if bound < self.best:
            return True
        return bound == self.best and not self._collecting()

    def _sync(self) -> None:
        if self.shared is None:
            return
        self._ticks += 1
        if self._ticks % _SYNC_INTERVAL == 0 and self.shared.value > self.best:
            self.best = self.shared.value

    def _publish(self, value: int) -> None:
        if self.shared is None:
            return
        with self.shared.get_lock():
            if value > self.shared.value:
                self.shared.value = value

    def _record_leaf(self, value: int) -> None:
        self.counters.leaves += 1
        if value > self.best or (value == self.best and self.found < value):
            if value > self.best:
                logger.debug(f"Incumbent for {self.targets} improved to {value}")
            self.best = value
            self.found = value
            self.witnesses = [self._cursor.entries]
            self._publish(value)
        elif value == self.best and len(self.witnesses) < self.witness_cap:
            self.witnesses.append(self._cursor.entries)

    def _state(self) -> Optional[np.ndarray]:
        if self._cursor.k > INT64_SAFE:
            return None
        return np.array(self._cursor.x(1) + self._cursor.x(2), dtype=np.int64)

    def _completion_bound(self) -> int:
        return completion_ceiling(
            self._cursor.x(1), self._cursor.x(2), self._cursor.k, self.targets, self.ceiling
        )

    def _finish(self, color: int) -> int:
        """Walk the only completion (all remaining steps in `color`) and record it"""
        steps = self._remaining[color - 1]
        for _ in range(steps):
            self._cursor.push(color)
        try:
            value = self._cursor.k
            self._record_leaf(value)
            return value
        finally:
            for _ in range(steps):
                self._cursor.pop()

    def _descend(self) -> int:
        """Explore the subtree below the cursor; returns an upper bound on its leaves"""
        self._sync()
        depth_left = self._remaining[0] + self._remaining[1]
        if not depth_left:
            value = self._cursor.k
            self._record_leaf(value)
            return value

        bound = self._cursor.k << depth_left
        if not self._beaten_by(bound):
            bound = min(bound, self._completion_bound())
        if self._beaten_by(bound):
            self.counters.nodes_pruned_bound += 1
            return bound
        if not self._remaining[0] or not self._remaining[1]:
            return self._finish(1 if self._remaining[0] else 2)

        point = self._cursor.nu
        state = self._state()
        if state is not None:
            frontier = self.frontier.get(point)
            dominated = frontier.dominating(state, self._beaten_by) if frontier else None
            if dominated is not None:
                self.counters.nodes_pruned_dominance += 1
                return dominated

        self.counters.nodes_expanded += 1
        subtree = 0
        for color in (1, 2):
            subtree = max(subtree, self._step(color))
        if state is not None:
            if point not in self.frontier:
                self.frontier[point] = _Frontier(len(state), self.frontier_cap)
            self.frontier[point].add(state, subtree)
        return subtree

    def _step(self, color: int) -> int:
        self._remaining[color - 1] -= 1
        self._cursor.push(color)
        try:
            return self._descend()
        finally:
            self._cursor.pop()
            self._remaining[color - 1] += 1

    def run(self, prefix: Sequence[int] = ()) -> int:
        """Search all completions of prefix; returns the subtree bound"""
        for color in prefix:
            self._remaining[color - 1] -= 1
            self._cursor.push(color)
        try:
            return self._descend()
        finally:
            for color in reversed(prefix):
                self._cursor.pop()
                self._remaining[color - 1] += 1


def _prefixes(targets: Tuple[int, int], depth: int, symmetric: bool) -> Iterator[Tuple[int, ...]]:
    remaining = [targets[0] - 1, targets[1] - 1]
    depth = min(depth, sum(remaining))
    prefix: List[int] = []

    def extend() -> Iterator[Tuple[int, ...]]:
        if len(prefix) == depth:
            yield tuple(prefix)
            return
        for color in (1, 2):
            if symmetric and not prefix and color == 2:
                continue
            if remaining[color - 1]:
                remaining[color - 1] -= 1
                prefix.append(color)
                yield from extend()
                prefix.pop()
                remaining[color - 1] += 1

    yield from extend()


_worker_state: Dict[str, Any] = {}


def _init_worker(shared: Any, targets: Tuple[int, int], witness_cap: int, frontier_cap: int) -> None:
    _worker_state["shared"] = shared
    _worker_state["targets"] = targets
    _worker_state["witness_cap"] = witness_cap
    _worker_state["frontier_cap"] = frontier_cap
    _worker_state["frontier"] = {}


def _search_prefix(prefix: Tuple[int, ...]) -> Tuple[int, int, List[Tuple[int, ...]], Dict[str, int]]:
    shared = _worker_state["shared"]
    search = BranchAndBound(
        _worker_state["targets"],
        witness_cap=_worker_state["witness_cap"],
        frontier_cap=_worker_state["frontier_cap"],
        incumbent=shared.value,
        shared=shared,
    )
    # frontier entries stay valid across prefixes of the same search
    search.frontier = _worker_state["frontier"]
    search.run(prefix)
    return search.best, search.found, search.witnesses, search.counters.model_dump()


def kstar_branch_and_bound(
    targets: Sequence[int],
    witness_cap: int = DEFAULT_WITNESS_CAP,
    frontier_cap: int = DEFAULT_FRONTIER_CAP,
    workers: int = 1,
    split_depth: int = DEFAULT_SPLIT_DEPTH,
) -> SearchReport:
    """
    k*(P_l1, P_l2) by pruned search

    Args:
        targets: (l1, l2)
        witness_cap: Number of maximizing walks reported, lexicographically smallest first
        frontier_cap: Dominance entries kept per lattice point
        workers: Worker processes; 1 runs in-process with reproducible counters
        split_depth: Prefix length used to split work between processes

    Returns:
        SearchReport
    """
    targets = _check_pair(targets)
    if witness_cap < 1:
        raise WalkValidationError(f"Witness cap must be at least 1, got {witness_cap}")
    if frontier_cap < 1:
        raise WalkValidationError(f"Frontier cap must be at least 1, got {frontier_cap}")
    symmetric = targets[0] == targets[1] and targets[0] > 1
    logger.info(f"Branch-and-bound for targets {targets} with {workers} worker(s)")
    started = time.perf_counter()

    if workers <= 1:
        search = BranchAndBound(targets, witness_cap=witness_cap, frontier_cap=frontier_cap)
        search.run((1,) if symmetric else ())
        best, counters = search.best, search.counters
        found = [(search.found, search.witnesses)]
    else:
        shared = Value("q", targets[0] * targets[1])
        tasks = list(_prefixes(targets, split_depth, symmetric))
        with Pool(
            processes=workers,
            initializer=_init_worker,
            initargs=(shared, targets, witness_cap, frontier_cap),
        ) as pool:
            results = pool.map(_search_prefix, tasks, chunksize=1)
        best = max(result[0] for result in results)
        counters = SearchCounters()
        found = []
        for _, value, entries, counts in results:
            counters.merge(SearchCounters(**counts))
            found.append((value, entries))

    winning = [entries for value, group in found if value == best for entries in group]
    elapsed = time.perf_counter() - started
    report = SearchReport(
        targets=targets,
        kstar=best,
        witnesses=_merge_witnesses(winning, targets, witness_cap, symmetric),
        counters=counters,
        method="branch_and_bound",
        workers=max(1, workers),
        wall_time=elapsed,
    )
    logger.info(
        f"k*{targets} = {best}: expanded {counters.nodes_expanded}, "
        f"bound-pruned {counters.nodes_pruned_bound}, "
        f"dominance-pruned {counters.nodes_pruned_dominance} in {elapsed:.2f}s"
    )
    return report


def verify_table(max_ell: int, **search_options: Any) -> TableReport:
    """Compare computed k*(P_l, P_l) with the embedded table for 2 <= l <= max_ell"""
    if not 2 <= max_ell <= 45:
        raise WalkValidationError(f"max_ell must lie in 2..45, got {max_ell}")
    rows = []
    for ell in range(2, max_ell + 1):
        kstar = kstar_branch_and_bound((ell, ell), **search_options).kstar
        expected = TABLE_KSTAR[ell]
        rows.append(TableRow(
            ell=ell,
            kstar=kstar,
            table_value=expected,
            diff=kstar - expected,
            status="pass" if kstar == expected else "fail",
        ))
        if kstar != expected:
            logger.warning(f"Table mismatch at l={ell}: computed {kstar}, expected {expected}")
    return TableReport(rows=rows)


def mstar_of_kstar(k: int) -> GrowthRate:
    """Online vertex-Ramsey density (k - 1)/k"""
    if k < 1:
        raise WalkValidationError(f"k must be a positive integer, got {k}")
    return Fraction(k - 1, k)
