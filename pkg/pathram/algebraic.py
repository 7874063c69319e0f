"""
Exact comparisons between rationals and the irrational constants of the growth-rate analysis
"""

import logging
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Dict, Union

from pydantic import BaseModel, ConfigDict

from .exceptions import InconclusiveComparisonError, WalkValidationError

logger = logging.getLogger(__name__)

Rational = Union[int, Fraction]

# Working precision and guard band for comparisons that have no algebraic form.
DECIMAL_PRECISION = 60
GUARD_DIGITS = 45


class QuadraticSurd(BaseModel):
    """The real number a + b*sqrt(n) with rational a, b and non-square n > 0"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    a: Fraction
    b: Fraction
    n: int
    expression: str

    def compare(self, value: Rational) -> int:
        """Sign of (value - self), decided by squaring"""
        u = (Fraction(value) - self.a) / self.b
        if u < 0:
            sign = -1
        else:
            square = u * u
            sign = (square > self.n) - (square < self.n)
        return sign if self.b > 0 else -sign

    def to_decimal(self, digits: int = 30) -> Decimal:
        with localcontext() as ctx:
            ctx.prec = digits + 10
            root = Decimal(self.n).sqrt()
            return Decimal(self.a.numerator) / self.a.denominator + (
                Decimal(self.b.numerator) / self.b.denominator
            ) * root

    def floor_times(self, ell: int) -> int:
        """Largest integer m with m <= ell * self"""
        if ell < 1:
            raise WalkValidationError(f"ell must be positive, got {ell}")
        m = int(self.to_decimal(20) * ell)
        while self.compare(Fraction(m + 1, ell)) <= 0:
            m += 1
        while self.compare(Fraction(m, ell)) > 0:
            m -= 1
        return m


DELTA_LIMITS: Dict[int, QuadraticSurd] = {
    4: QuadraticSurd(a=Fraction(5, 2), b=Fraction(1, 2), n=13, expression="(sqrt(13)+5)/2"),
    5: QuadraticSurd(a=Fraction(3), b=Fraction(1), n=6, expression="sqrt(6)+3"),
    6: QuadraticSurd(a=Fraction(7, 2), b=Fraction(1, 2), n=37, expression="(sqrt(37)+7)/2"),
}

# Supremum of the admissible ratio q = l_2/l_1 for the nested construction.
BOOTSTRAP_RATIO_LIMIT = QuadraticSurd(
    a=Fraction(-1, 2), b=Fraction(1, 2), n=13, expression="(sqrt(13)-1)/2"
)


def to_significant(value: Union[Decimal, Fraction, float], digits: int = 9) -> str:
    """Render a number with the given count of significant digits"""
    if isinstance(value, Fraction):
        with localcontext() as ctx:
            ctx.prec = digits + 10
            value = Decimal(value.numerator) / Decimal(value.denominator)
    elif not isinstance(value, Decimal):
        value = Decimal(repr(value))
    return f"{value:.{digits}g}"


def at_least_power(value: Rational, coeff: Rational, base: int, exponent: Fraction) -> bool:
    """Decide value >= coeff * base**exponent exactly (base > 0, coeff > 0)"""
    ratio = Fraction(value) / Fraction(coeff)
    if ratio <= 0:
        return False
    exponent = Fraction(exponent)
    return ratio ** exponent.denominator >= Fraction(base) ** exponent.numerator


def power_ceiling_holds(k: int, ell: int, c: int) -> bool:
    """Decide k <= c**log2(3) * ell

    Powers of two are compared exactly (c = 2**a gives 3**a). For other c the
    bound is transcendental and is compared in extended precision; a result
    inside the guard band raises instead of guessing.
    """
    if c >= 1 and c & (c - 1) == 0:
        return k <= 3 ** (c.bit_length() - 1) * ell
    with localcontext() as ctx:
        ctx.prec = DECIMAL_PRECISION
        bound = (Decimal(c).ln() * Decimal(3).ln() / Decimal(2).ln()).exp() * ell
        diff = bound - Decimal(k)
        if abs(diff) <= bound.scaleb(-GUARD_DIGITS):
            raise InconclusiveComparisonError(
                f"Cannot separate k={k} from {c}^log2(3)*{ell} at {DECIMAL_PRECISION} digits"
            )
        return diff > 0
