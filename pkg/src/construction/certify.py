"""Certified comparisons of products of rational powers.

A Monomial is coeff * prod(base_i ** exp_i) with rational coeff, bases and exponents. Two monomials
are compared exactly by raising their ratio to the lcm of the exponent denominators. Sums of
monomials are compared exactly when every term is itself rational; otherwise both sides are
enclosed with mpmath interval arithmetic and the comparison only counts as decided when the
intervals do not overlap.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import mpmath
from mpmath import iv, mpf

logger = logging.getLogger(__name__)

MAX_PRECISION_FACTOR = 8


def integer_root(n: int, k: int) -> Optional[int]:
    """The exact k-th root of n >= 0 when n is a perfect k-th power, else None."""
    if n < 0:
        raise ValueError("integer_root needs n >= 0")
    if n < 2 or k == 1:
        return n
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    return x if x ** k == n else None


def rational_power(base: Fraction, exponent: Fraction) -> Optional[Fraction]:
    """base ** exponent as an exact Fraction, or None when it is irrational."""
    a, b = exponent.numerator, exponent.denominator
    num, den = integer_root(base.numerator, b), integer_root(base.denominator, b)
    if num is None or den is None:
        return None
    return Fraction(num, den) ** a


@dataclass(frozen=True)
class Monomial:
    coeff: Fraction
    factors: Tuple[Tuple[Fraction, Fraction], ...] = ()

    @classmethod
    def of(cls, coeff=1, factors: Sequence = ()):
        merged = {}
        for base, exponent in factors:
            base, exponent = Fraction(base), Fraction(exponent)
            if base <= 0:
                raise ValueError(f"monomial bases must be positive, got {base}")
            if base == 1 or exponent == 0:
                continue
            merged[base] = merged.get(base, Fraction(0)) + exponent
        canonical = tuple(sorted((b, e) for b, e in merged.items() if e != 0))
        return cls(Fraction(coeff), canonical)

    def __mul__(self, other: 'Monomial'):
        return Monomial.of(self.coeff * other.coeff, self.factors + other.factors)

    def power(self, e):
        e = Fraction(e)
        if e.denominator != 1:
            lifted = rational_power(abs(self.coeff), e) if self.coeff > 0 else None
            if lifted is None:
                return Monomial.of(1, ((self.coeff, e),) + tuple((b, x * e) for b, x in self.factors))
            return Monomial.of(lifted, tuple((b, x * e) for b, x in self.factors))
        return Monomial.of(self.coeff ** int(e), tuple((b, x * e) for b, x in self.factors))

    def inverse(self):
        return Monomial.of(1 / self.coeff, tuple((b, -e) for b, e in self.factors))

    def exact(self) -> Optional[Fraction]:
        value = self.coeff
        for base, exponent in self.factors:
            part = rational_power(base, exponent)
            if part is None:
                return None
            value *= part
        return value

    def denominator_lcm(self):
        d = 1
        for _, exponent in self.factors:
            d = d * exponent.denominator // math.gcd(d, exponent.denominator)
        return d

    def to_mpf(self):
        value = mpf(self.coeff.numerator) / self.coeff.denominator
        for base, exponent in self.factors:
            value *= mpmath.power(mpf(base.numerator) / base.denominator,
                                  mpf(exponent.numerator) / exponent.denominator)
        return value

    def to_interval(self):
        value = iv.mpf(self.coeff.numerator) / self.coeff.denominator
        for base, exponent in self.factors:
            b = iv.mpf(base.numerator) / base.denominator
            value *= iv.exp(iv.ln(b) * (iv.mpf(exponent.numerator) / exponent.denominator))
        return value


def compare_monomials(left: Monomial, right: Monomial) -> int:
    """sign(left - right) exactly, for positive coefficients."""
    if left.coeff <= 0 or right.coeff <= 0:
        raise ValueError("exact monomial comparison needs positive coefficients")
    ratio = left * right.inverse()
    d = ratio.denominator_lcm()
    num, den = ratio.coeff.numerator ** d, ratio.coeff.denominator ** d
    for base, exponent in ratio.factors:
        e = int(exponent * d)
        if e > 0:
            num *= base.numerator ** e
            den *= base.denominator ** e
        else:
            num *= base.denominator ** -e
            den *= base.numerator ** -e
    return (num > den) - (num < den)


def _reduce(terms: Sequence[Monomial]) -> Optional[Monomial]:
    """A sum of monomials as one monomial when that is exact."""
    terms = [t for t in terms if t.coeff != 0]
    if not terms:
        return Monomial.of(0)
    if len(terms) == 1:
        return terms[0]
    total = Fraction(0)
    for t in terms:
        value = t.exact()
        if value is None:
            return None
        total += value
    return Monomial.of(total)


def multiply(terms: Sequence[Monomial], factor: Monomial):
    """(sum of terms) * factor, collapsed to one monomial when the sum is exact."""
    reduced = _reduce(terms)
    if reduced is not None:
        return [reduced * factor]
    return [t * factor for t in terms]


@dataclass(frozen=True)
class Comparison:
    """Outcome of lhs <= rhs. `holds` is None when interval arithmetic could not decide."""
    holds: Optional[bool]
    equal: bool
    exact: bool
    lhs: mpf
    rhs: mpf
    margin: mpf

    def to_dict(self):
        return {'holds': self.holds, 'equal': self.equal, 'exact': self.exact,
                'lhs': self.lhs, 'rhs': self.rhs, 'margin': self.margin}


def _numeric(terms):
    return mpmath.fsum(t.to_mpf() for t in terms)


def _interval_sum(terms):
    total = iv.mpf(0)
    for t in terms:
        total += t.to_interval()
    return total


def certified_leq(lhs: Sequence[Monomial], rhs: Sequence[Monomial], bits=None) -> Comparison:
    """lhs <= rhs for sums of nonnegative monomials; margin is rhs - lhs (exactly 0 on equality)."""
    bits = bits or mpmath.mp.prec
    left_value, right_value = _numeric(lhs), _numeric(rhs)
    left, right = _reduce(lhs), _reduce(rhs)
    if left is not None and right is not None:
        if left.coeff == 0 or right.coeff == 0:
            sign = (left.coeff > 0) - (right.coeff > 0)
        else:
            sign = compare_monomials(left, right)
        margin = mpf(0) if sign == 0 else right_value - left_value
        return Comparison(sign <= 0, sign == 0, True, left_value, right_value, margin)

    saved = iv.prec
    try:
        prec = bits
        while prec <= bits * MAX_PRECISION_FACTOR:
            iv.prec = prec
            decided = _interval_sum(lhs) <= _interval_sum(rhs)
            if decided is not None:
                return Comparison(decided, False, False, left_value, right_value, right_value - left_value)
            prec *= 2
    finally:
        iv.prec = saved
    logger.warning(f"interval comparison undecided up to {bits * MAX_PRECISION_FACTOR} bits: "
                   f"{left_value} <= {right_value}")
    return Comparison(None, False, False, left_value, right_value, right_value - left_value)
