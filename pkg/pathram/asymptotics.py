"""
Growth-rate analysis: periodicity of x_nu = beta + min-split(x), delta ceilings and explicit walk families
"""

import logging
from fractions import Fraction
from math import isqrt
from typing import List, Optional, Sequence, Tuple, Union

from .algebraic import DELTA_LIMITS, QuadraticSurd, at_least_power
from .exceptions import (
    InvariantViolationError,
    RecursionOverflowError,
    WalkValidationError,
)
from .models import (
    BootstrapParams,
    CeilingReport,
    GrowthRate,
    InequalityReport,
    LowerBoundCertificate,
    PeriodAnalysis,
    StrategyWalk,
)
from .recursion import INT128_MAX, SplitSequence, delta_of_walk, k_of_walk, smallest_argmin_rate
from .walks import enumerate_walks, make_walk, walk_from_runs

logger = logging.getLogger(__name__)

DEFAULT_MAX_EXTENSIONS = 10**6
# Longest walk the family generators will materialise.
MAX_WALK_LENGTH = 10**7

SYMMETRIC_Q = Fraction(13, 10)
SYMMETRIC_S = 320
SYMMETRIC_COEFF = Fraction(1, 2)
SYMMETRIC_EXPONENT = Fraction(201, 100)


def _next_value(seq: SplitSequence, beta: int, nu: int) -> int:
    value = beta + seq.min_split(nu)
    if abs(value) > INT128_MAX:
        raise RecursionOverflowError(nu, abs(value).bit_length())
    return value


def extend_recurrence(prefix: Sequence[int], beta: int, n: int) -> List[int]:
    """
    Extend x_0..x_t to x_0..x_n by x_nu = beta + min over j1 + j2 = nu - 1 of x_j1 + x_j2

    Args:
        prefix: Initial values x_0..x_t (non-empty)
        beta: Offset
        n: Last index to compute, n >= t

    Returns:
        List of n + 1 integers starting with prefix
    """
    if not prefix:
        raise WalkValidationError("Recurrence prefix must be non-empty")
    if n < len(prefix) - 1:
        raise WalkValidationError(f"n={n} is shorter than the prefix (t={len(prefix) - 1})")
    seq = SplitSequence(prefix)
    for nu in range(len(prefix), n + 1):
        seq.append(_next_value(seq, beta, nu))
    return seq.to_list()


def period_analysis(
    prefix: Sequence[int], beta: int, max_extensions: int = DEFAULT_MAX_EXTENSIONS
) -> PeriodAnalysis:
    """
    Locate the eventual periodic regime of the recurrence

    With p the smallest argmin of (x_j + beta)/(j + 1), every extension index nu
    satisfies x_nu - x_(nu-p-1) <= x_p + beta. Equality holding on a window [N, M]
    with M >= 2(N + p + 1) propagates to every later index, so the run stops there.

    Args:
        prefix: x_0..x_t
        beta: Offset
        max_extensions: Extension budget before reporting an internal error

    Returns:
        PeriodAnalysis; onset is the smallest index from which x_(nu+p+1) - x_nu stays constant
    """
    if not prefix:
        raise WalkValidationError("Recurrence prefix must be non-empty")
    prefix = [int(value) for value in prefix]
    t = len(prefix) - 1
    p, rate = smallest_argmin_rate(prefix, beta)
    period = p + 1
    increment = prefix[p] + beta

    seq = SplitSequence(prefix)
    run_start: Optional[int] = None
    for nu in range(t + 1, t + 1 + max_extensions):
        value = _next_value(seq, beta, nu)
        seq.append(value)
        gap = value - seq[nu - period]
        if gap > increment:
            raise InvariantViolationError(
                f"Growth bound broken at nu={nu}: x_nu - x_(nu-{period}) = {gap} > {increment}"
            )
        steps, offset = divmod(nu - p, period)
        if offset == 0 and value - prefix[p] < steps * increment:
            raise InvariantViolationError(
                f"Lower bound broken at nu={nu}: x_nu - x_p = {value - prefix[p]} < {steps * increment}"
            )
        if gap < increment:
            run_start = None
            continue
        if run_start is None:
            run_start = nu
        if nu >= 2 * (run_start + period):
            first = run_start
            while first - 1 - period >= 0 and seq[first - 1] - seq[first - 1 - period] == increment:
                first -= 1
            logger.debug(f"Periodic from {first - period} with period {period}, verified to {nu}")
            return PeriodAnalysis(
                prefix=prefix,
                beta=beta,
                p=p,
                period_length=period,
                increment=increment,
                rate=rate,
                onset=first - period,
                checked_until=nu,
            )
    raise InvariantViolationError(
        f"No periodic regime within {max_extensions} extensions (p={p}, beta={beta})"
    )


def family_lengths(c: int, t: int) -> Tuple[int, ...]:
    """
    Turning points (l_1, l_2[, l_3]) of the explicit delta(c) family at generation t

    c=4: l_1 = 10**t, l_2 = floor((sqrt(13) - 1)/2 * 10**t)
    c=5: l_2 = floor(sqrt(6)/2 * 10**t), l_3 = floor((sqrt(6) - 1) * 10**t)
    c=6: l_2 = floor((sqrt(37) + 1)/6 * 10**t), l_3 = floor((sqrt(37) - 2)/3 * 10**t)
    """
    if t < 0:
        raise WalkValidationError(f"Generation t must be non-negative, got {t}")
    scale = 10**t
    square = scale * scale
    if c == 4:
        return scale, (isqrt(13 * square) - scale) // 2
    if c == 5:
        root = isqrt(6 * square)
        return scale, root // 2, root - scale
    if c == 6:
        root = isqrt(37 * square)
        return scale, (root + scale) // 6, (root - 2 * scale) // 3
    raise WalkValidationError(f"No explicit family for c={c}; expected 4, 5 or 6")


def delta_family(c: int, t: int) -> StrategyWalk:
    """Explicit walk in W(l_last, c) whose delta approaches the closed-form ceiling as t grows"""
    lengths = family_lengths(c, t)
    if lengths[-1] > MAX_WALK_LENGTH:
        raise WalkValidationError(f"Family walk for c={c}, t={t} has length above {MAX_WALK_LENGTH}")
    if c == 4:
        l1, l2 = lengths
        runs = [(1, l1 - 1), (2, 1), (1, l2 - l1), (2, 2)]
    else:
        l1, l2, l3 = lengths
        runs = [(1, l1 - 1), (2, 1), (1, l2 - l1), (2, 1), (1, l3 - l2), (2, c - 3)]
    return walk_from_runs(2, runs)


def delta_ceiling(c: int) -> QuadraticSurd:
    """delta(c) as an exact surd for c in {4, 5, 6}"""
    if c not in DELTA_LIMITS:
        raise WalkValidationError(f"No closed-form delta ceiling for c={c}; expected 4, 5 or 6")
    return DELTA_LIMITS[c]


def check_delta_ceiling(c: int, max_ell: int) -> CeilingReport:
    """
    Compare delta(alpha) with delta(c) for every alpha in W(l, c) ending in colour 2, l <= max_ell

    Args:
        c: 4, 5 or 6
        max_ell: Largest l checked

    Returns:
        CeilingReport listing any walk whose delta exceeds the ceiling
    """
    ceiling = delta_ceiling(c)
    if max_ell < 1:
        raise WalkValidationError(f"max_ell must be at least 1, got {max_ell}")
    checked = 0
    best: Optional[GrowthRate] = None
    argmax: Optional[StrategyWalk] = None
    violations: List[StrategyWalk] = []
    for ell in range(1, max_ell + 1):
        for walk in enumerate_walks((ell, c)):
            if walk.entries[-1] != 2:
                continue
            checked += 1
            delta = delta_of_walk(walk)
            if best is None or delta > best:
                best, argmax = delta, walk
            if ceiling.compare(delta) > 0:
                violations.append(walk)
    if violations:
        logger.warning(f"{len(violations)} walks exceed delta({c}) = {ceiling.expression}")
    logger.info(f"Checked {checked} walks against delta({c}); largest delta {best}")
    return CeilingReport(
        c=c,
        max_ell=max_ell,
        walks_checked=checked,
        max_delta=best,
        argmax=argmax,
        violations=violations,
    )


def kstar_ceiling(l1: int, l2: int) -> int:
    """
    Closed-form integer upper bound on k*(P_l1, P_l2)

    With c = min(l1, l2) and l = max(l1, l2): exactly c*l for c <= 3,
    floor(delta(c)*l) for c in {4, 5, 6}, and 3**ceil(log2 c) * l otherwise
    (c**log2(3) never exceeds 3**ceil(log2 c)).
    """
    if l1 < 1 or l2 < 1:
        raise WalkValidationError(f"Targets must be positive, got ({l1}, {l2})")
    c, ell = min(l1, l2), max(l1, l2)
    if c <= 3:
        return c * ell
    if c in DELTA_LIMITS:
        return DELTA_LIMITS[c].floor_times(ell)
    return 3 ** (c - 1).bit_length() * ell


def check_delta_monotonicity(c: int, max_ell: int) -> InequalityReport:
    """
    Check delta(alpha) < delta(alpha o (2)) for every alpha in W(l, c - 1) ending in colour 2

    Appending a colour-2 step raises beta and leaves x_1 unchanged, so delta
    grows strictly; this is the step behind delta(c - 1) <= delta(c).
    """
    if c < 3:
        raise WalkValidationError(f"Monotonicity step needs c >= 3, got {c}")
    if max_ell < 1:
        raise WalkValidationError(f"max_ell must be at least 1, got {max_ell}")
    checked = 0
    violations: List[StrategyWalk] = []
    for ell in range(1, max_ell + 1):
        for walk in enumerate_walks((ell, c - 1)):
            if walk.entries[-1] != 2:
                continue
            checked += 1
            extended = make_walk(2, walk.entries + (2,))
            if not delta_of_walk(walk) < delta_of_walk(extended):
                violations.append(walk)
    if violations:
        logger.warning(f"{len(violations)} walks in W(l, {c - 1}) break delta monotonicity")
    return InequalityReport(
        inequality=f"delta(alpha) < delta(alpha o (2)), alpha in W(l, {c - 1})",
        c=c,
        max_ell=max_ell,
        walks_checked=checked,
        violations=violations,
    )


def check_kstar_ceiling(c: int, max_ell: int) -> InequalityReport:
    """
    Check k(alpha) <= c*l (c <= 3) or k(alpha) <= delta(c)*l (c in 4..6) for every alpha in W(l, c)

    Args:
        c: 1..6
        max_ell: Largest l checked

    Returns:
        InequalityReport listing every walk above the ceiling
    """
    if not 1 <= c <= 6:
        raise WalkValidationError(f"No closed-form k* ceiling for c={c}; expected 1..6")
    if max_ell < 1:
        raise WalkValidationError(f"max_ell must be at least 1, got {max_ell}")
    limit = DELTA_LIMITS.get(c)
    checked = 0
    violations: List[StrategyWalk] = []
    for ell in range(1, max_ell + 1):
        for walk in enumerate_walks((ell, c)):
            checked += 1
            k = k_of_walk(walk)
            above = k > c * ell if limit is None else limit.compare(Fraction(k, ell)) > 0
            if above:
                violations.append(walk)
    if violations:
        logger.warning(f"{len(violations)} walks in W(l, {c}) exceed the k* ceiling")
    logger.info(f"Checked {checked} walks in W(l, {c}) for l <= {max_ell} against the k* ceiling")
    return InequalityReport(
        inequality=f"k(alpha) <= {limit.expression if limit else c} * l, alpha in W(l, {c})",
        c=c,
        max_ell=max_ell,
        walks_checked=checked,
        violations=violations,
    )


def bootstrap_walk(params: BootstrapParams) -> StrategyWalk:
    """
    Nested walk alpha^(t) in W(l_(2,t), 4**t)

    alpha^(t) = alpha^(t-1) o (1)^(l_(1,t) - l_(2,t-1)) o (2)^(c_(t-1)) o (1)^(l_(2,t) - l_(1,t)) o (2)^(2 c_(t-1)),
    starting from the empty walk.
    """
    if params.s < 100:
        logger.warning(f"Bootstrap with s={params.s} < 100; the rate bound f(q, s) assumes s >= 100")
    schedule = params.schedule()
    if schedule[-1][1] + schedule[-1][2] > MAX_WALK_LENGTH:
        raise WalkValidationError(
            f"Bootstrap walk for t={params.t} needs length {schedule[-1][1] + schedule[-1][2] - 2}"
        )
    runs: List[Tuple[int, int]] = []
    for (_, l2_prev, c_prev), (l1, l2, _) in zip(schedule, schedule[1:]):
        runs.extend([(1, l1 - l2_prev), (2, c_prev), (1, l2 - l1), (2, 2 * c_prev)])
    return walk_from_runs(2, runs)


def bootstrap_rate(q: Union[Fraction, int, str], s: int) -> GrowthRate:
    """f(q, s) = min(3 + q - 14/s, 2 + 3/q - 20/(q s))"""
    q = Fraction(q)
    if q <= 0 or s < 1:
        raise WalkValidationError(f"Need q > 0 and s >= 1, got q={q}, s={s}")
    return min(3 + q - Fraction(14, s), 2 + 3 / q - Fraction(20) / (q * s))


def _symmetric_lengths(t: int) -> Tuple[BootstrapParams, int, int]:
    params = BootstrapParams(q=SYMMETRIC_Q, s=SYMMETRIC_S, t=t)
    _, l2, c = params.schedule()[-1]
    return params, 10 * l2, c


def symmetric_lb_walk(t: int) -> StrategyWalk:
    """alpha_hat^(t) = alpha^(t) o (1)^(l_hat - l_(2,t)) o (2)^(l_hat - c_t) in W(l_hat, l_hat), l_hat = 10 l_(2,t)"""
    params, ell_hat, c = _symmetric_lengths(t)
    # k <= 3**ceil(log2 l_hat) * l_hat bounds every walk in W(l_hat, l_hat)
    bound = 3 ** (ell_hat - 1).bit_length() * ell_hat
    if bound > INT128_MAX or 2 * ell_hat > MAX_WALK_LENGTH:
        raise RecursionOverflowError(
            2 * ell_hat - 2,
            bound.bit_length(),
            f"Symmetric walk for t={t} refused: l_hat={ell_hat} exceeds the supported size",
        )
    base = bootstrap_walk(params)
    _, l2, _ = params.schedule()[-1]
    entries = list(base.entries) + [1] * (ell_hat - l2) + [2] * (ell_hat - c)
    return make_walk(2, entries)


def certify_symmetric_lb(t: int) -> LowerBoundCertificate:
    """Evaluate alpha_hat^(t) and decide k >= l_hat**2.01 / 2 exactly"""
    _, ell_hat, _ = _symmetric_lengths(t)
    k = k_of_walk(symmetric_lb_walk(t))
    holds = at_least_power(k, SYMMETRIC_COEFF, ell_hat, SYMMETRIC_EXPONENT)
    logger.info(f"Symmetric walk t={t}: l_hat={ell_hat}, k={k}, certificate {'holds' if holds else 'fails'}")
    return LowerBoundCertificate(
        t=t,
        ell_hat=ell_hat,
        k=k,
        coeff=SYMMETRIC_COEFF,
        exponent=SYMMETRIC_EXPONENT,
        holds=holds,
    )
