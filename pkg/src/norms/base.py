"""Base norms over CoeffVec: l^p, Lorentz d(w, p) and the block t-norm.

Every norm here is a 1-unconditional lattice norm; the zero vector returns 0 without entering any
optimization path.
"""
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

import mpmath
from mpmath import mpf

from src.norms.params import ConstructionParams, _fraction_str
from src.seqcore.vectors import CoeffVec, CountVec, decreasing_rearrangement
from src.utils.errors import ConfigError, LabError

logger = logging.getLogger(__name__)


def as_exponent(p) -> Fraction:
    """Exponents are kept as exact rationals ('3/2', 2, Fraction(3, 2), 1.5)."""
    if isinstance(p, Fraction):
        return p
    if isinstance(p, float):
        return Fraction(str(p))
    return Fraction(p)


def pow_abs(x, e: Fraction):
    """|x|^e with an exact integer power when e is integral."""
    x = abs(x)
    if x == 0:
        return mpf(0)
    if e.denominator == 1:
        return x ** int(e.numerator)
    return mpmath.power(x, mpf(e.numerator) / e.denominator)


def root(s, e: Fraction):
    """s^(1/e) for s >= 0."""
    if s == 0:
        return mpf(0)
    if e == 1:
        return s
    if e == 2:
        return mpmath.sqrt(s)
    if e.denominator == 1:
        return mpmath.root(s, int(e.numerator))
    return mpmath.power(s, mpf(e.denominator) / e.numerator)


def lp_eval(p, v: CoeffVec):
    """(sum |a_i|^p)^(1/p)."""
    p = as_exponent(p)
    if p < 1:
        raise LabError(f"l^p needs p >= 1, got {p}")
    if v.is_zero():
        return mpf(0)
    return root(mpmath.fsum(pow_abs(a, p) for a in v), p)


def sup_norm_eval(v: CoeffVec):
    """l^infinity norm (the dual of l^1)."""
    return max(abs(a) for a in v)


def harmonic_weights(n):
    """w_i = 1/i, i = 1..n."""
    return tuple(mpf(1) / i for i in range(1, n + 1))


def check_lorentz_weights(weights):
    if not weights or weights[0] != 1:
        raise ConfigError("Lorentz weights must start with w_1 = 1")
    if any(w <= 0 for w in weights):
        raise ConfigError("Lorentz weights must be strictly positive")
    if any(b > a for a, b in zip(weights, weights[1:])):
        raise ConfigError("Lorentz weights must be non-increasing")


def lorentz_eval(weights, p, v: CoeffVec):
    """(sum w_i (a*_i)^p)^(1/p) over the decreasing rearrangement a*."""
    p = as_exponent(p)
    if len(weights) < v.n:
        raise ConfigError(f"Lorentz weights cover {len(weights)} coordinates, vector has {v.n}")
    if v.is_zero():
        return mpf(0)
    star = decreasing_rearrangement(v)
    return root(mpmath.fsum(w * pow_abs(a, p) for w, a in zip(weights, star)), p)


def _block_term(params: ConstructionParams, block_sums):
    """||(alpha_i (S_i)^(1/p))_i||_r where S_i = sum over block i of |a|^p."""
    r = params.r
    terms = [pow_abs(params.alpha[i - 1] * root(s, params.p), r) for i, s in block_sums if s != 0]
    return root(mpmath.fsum(terms), r) if terms else mpf(0)


def t_norm_eval(params: ConstructionParams, v: CoeffVec):
    """||(a^i_j)||_r  v  ||(alpha_i ||a^i||_p)_i||_r over the blocks of `params`."""
    ranges = params.block_ranges(v.n)
    if v.is_zero():
        return mpf(0)
    flat = lp_eval(params.r, v)
    block_sums = [
        (i, mpmath.fsum(pow_abs(v[j], params.p) for j in range(lo, hi + 1)))
        for i, lo, hi in ranges
    ]
    return max(flat, _block_term(params, block_sums))


def t_norm_eval_counts(params: ConstructionParams, c: CountVec):
    """Same value as t_norm_eval on the expanded vector, computed from multiplicities."""
    c.check_capacity(params.k)
    groups = [g for g in c.groups if g.multiplicity and g.value != 0]
    if not groups:
        return mpf(0)
    flat = root(mpmath.fsum(g.multiplicity * pow_abs(g.value, params.r) for g in groups), params.r)
    sums = {}
    for g in groups:
        sums[g.block] = sums.get(g.block, mpf(0)) + g.multiplicity * pow_abs(g.value, params.p)
    return max(flat, _block_term(params, sorted(sums.items())))


class NormSpec(ABC):
    """A base norm on finitely supported sequences."""

    symmetric = False

    @abstractmethod
    def evaluate(self, v: CoeffVec):
        ...

    @abstractmethod
    def spec_string(self):
        ...

    def power_exponent(self) -> Optional[Fraction]:
        """p when the p-th power of the norm is additive over disjoint supports, else None."""
        return None

    def __call__(self, v: CoeffVec):
        return self.evaluate(v)


@dataclass(frozen=True)
class LpNorm(NormSpec):
    p: Fraction

    symmetric = True

    def __post_init__(self):
        object.__setattr__(self, 'p', as_exponent(self.p))
        if self.p < 1:
            raise ConfigError(f"l^p needs p >= 1, got {self.p}")
        if self.p == 1:
            logger.warning("l^1 base is not shrinking; accepted for oracle tests only")

    @property
    def shrinking(self):
        return self.p > 1

    def evaluate(self, v):
        return lp_eval(self.p, v)

    def power_exponent(self):
        return self.p

    def spec_string(self):
        return f"lp:p={_fraction_str(self.p)}"


@dataclass(frozen=True)
class LorentzNorm(NormSpec):
    """d(w, p). `scheme='harmonic'` generates w_i = 1/i for the length being evaluated."""
    p: Fraction
    weights: Optional[Tuple[mpf, ...]] = None
    scheme: Optional[str] = None

    symmetric = True

    def __post_init__(self):
        object.__setattr__(self, 'p', as_exponent(self.p))
        if self.p < 1:
            raise ConfigError(f"Lorentz norm needs p >= 1, got {self.p}")
        if self.weights is None and self.scheme != 'harmonic':
            raise ConfigError("Lorentz norm needs explicit weights or scheme='harmonic'")
        if self.weights is not None:
            object.__setattr__(self, 'weights', tuple(mpf(w) for w in self.weights))
            check_lorentz_weights(self.weights)

    def weights_for(self, n):
        if self.scheme == 'harmonic':
            return harmonic_weights(n)
        return self.weights

    def evaluate(self, v):
        return lorentz_eval(self.weights_for(v.n), self.p, v)

    def spec_string(self):
        w = self.scheme or 'explicit'
        return f"lorentz:w={w},p={_fraction_str(self.p)}"


@dataclass(frozen=True)
class BlockTNorm(NormSpec):
    params: ConstructionParams
    source: Optional[str] = None

    def evaluate(self, v):
        return t_norm_eval(self.params, v)

    def spec_string(self):
        return f"blockt:params={self.source or '<inline>'}"
