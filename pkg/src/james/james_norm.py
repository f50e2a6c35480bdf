"""The J(e_i) norm over a base norm.

||sum a_i u_i||_J = sup over interval partitions P of ||representative(x, P)||_base, where the
representative puts the sum of each block of P at the block's first index. The gap variant takes
the sup over gap selections instead; for every base here (all are 1-suppression unconditional) the
two agree.
"""
import logging
from dataclasses import dataclass
from typing import Optional

import mpmath
from mpmath import mpf

from src.norms.base import NormSpec, LpNorm, BlockTNorm, LorentzNorm, pow_abs, root
from src.norms.symmetric_hull import SymmetricHullNorm
from src.seqcore.partitions import (
    IntervalPartition, GapSelection, enumerate_interval_partitions, enumerate_gap_selections,
)
from src.seqcore.vectors import CoeffVec
from src.utils.errors import LengthMismatchError, UnsupportedBaseError, LabError, InsufficientParamsError
from src.utils.precision import tolerance

logger = logging.getLogger(__name__)


def _base_capacity(base: NormSpec):
    if isinstance(base, (BlockTNorm, SymmetricHullNorm)):
        return base.params.total
    if isinstance(base, LorentzNorm) and base.weights is not None:
        return len(base.weights)
    return None


@dataclass(frozen=True)
class JamesVec:
    """sum a_i u_i with the u_i measured through `base`."""
    coeffs: CoeffVec
    base: NormSpec

    def __post_init__(self):
        capacity = _base_capacity(self.base)
        if capacity is not None and self.coeffs.n > capacity:
            raise InsufficientParamsError(
                f"base {self.base.spec_string()} covers {capacity} coordinates, vector has {self.coeffs.n}")

    @classmethod
    def of(cls, values, base: NormSpec):
        return cls(CoeffVec.of(values), base)

    @property
    def n(self):
        return self.coeffs.n


@dataclass(frozen=True)
class JamesNormResult:
    value: mpf
    partition: Optional[IntervalPartition]

    def to_dict(self):
        return {
            'value': self.value,
            'partition': list(self.partition.starts) if self.partition else None,
        }


def _block_sum(coeffs: CoeffVec, lo, hi):
    return mpmath.fsum(coeffs[j] for j in range(lo, hi + 1))


def representative(x: JamesVec, P: IntervalPartition) -> CoeffVec:
    """sum_i (sum_{j in block i} a_j) e_{p(i)}, same length as x."""
    if P.n != x.n:
        raise LengthMismatchError(f"partition of [1, {P.n}] applied to a vector of length {x.n}")
    values = [mpf(0)] * x.n
    for lo, hi in P.blocks():
        values[lo - 1] = _block_sum(x.coeffs, lo, hi)
    return CoeffVec(tuple(values))


def gap_representative(x: JamesVec, G: GapSelection) -> CoeffVec:
    values = [mpf(0)] * x.n
    for lo, hi in G.pairs:
        if hi > x.n:
            raise LengthMismatchError(f"gap selection reaches {hi} past length {x.n}")
        values[lo - 1] = _block_sum(x.coeffs, lo, hi)
    return CoeffVec(tuple(values))


def _singletons(n):
    return IntervalPartition(tuple(range(1, n + 2)))


def james_norm_exhaustive(x: JamesVec, cap=None) -> JamesNormResult:
    """Max over all 2^(n-1) partitions; ties go to the lexicographically smallest cut sequence."""
    if x.coeffs.is_zero():
        return JamesNormResult(mpf(0), _singletons(x.n))
    tol = tolerance()
    best, witness = None, None
    for P in enumerate_interval_partitions(x.n, cap):
        value = x.base(representative(x, P))
        # values within tolerance of the incumbent keep the earlier partition and its value
        if best is None or value > best + tol * max(1, abs(best)):
            best, witness = value, P
    logger.debug(f"exhaustive J-norm over {x.base.spec_string()}, n={x.n}: {best} at {witness.starts}")
    return JamesNormResult(best, witness)


def _lp_base(x: JamesVec):
    if not isinstance(x.base, LpNorm):
        raise UnsupportedBaseError(
            f"the partition dynamic program needs an l^p base, got {x.base.spec_string()}")
    return x.base.p


def james_norm_dp(x: JamesVec):
    """M[m] = max_{t<m} M[t] + |a_{t+1} + ... + a_m|^p; the norm is M[n]^(1/p). O(n^2)."""
    p = _lp_base(x)
    a = x.coeffs.entries
    M = [mpf(0)]
    for m in range(1, x.n + 1):
        best, s = None, mpf(0)
        for t in range(m - 1, -1, -1):
            s += a[t]
            candidate = M[t] + pow_abs(s, p)
            if best is None or candidate > best:
                best = candidate
        M.append(best)
    return root(M[x.n], p)


def james_norm_gap(x: JamesVec, cap=None):
    """sup over gap selections. l^p bases use G[m] = max(G[m-1], max_{t<m} G[t] + |sum_{t+1..m}|^p)."""
    if x.coeffs.is_zero():
        return mpf(0)
    if isinstance(x.base, LpNorm):
        p = x.base.p
        a = x.coeffs.entries
        G = [mpf(0)]
        for m in range(1, x.n + 1):
            best, s = G[m - 1], mpf(0)
            for t in range(m - 1, -1, -1):
                s += a[t]
                candidate = G[t] + pow_abs(s, p)
                if candidate > best:
                    best = candidate
            G.append(best)
        return root(G[x.n], p)
    best = mpf(0)
    for G in enumerate_gap_selections(x.n, cap):
        value = x.base(gap_representative(x, G))
        if value > best:
            best = value
    return best


def james_norm(x: JamesVec, cap=None):
    """Interval-partition J-norm: the dynamic program for l^p bases, enumeration otherwise."""
    if isinstance(x.base, LpNorm):
        return james_norm_dp(x)
    return james_norm_exhaustive(x, cap).value


def s_functional(x: JamesVec):
    """S(sum a_i u_i) = sum a_i."""
    return mpmath.fsum(x.coeffs)


def basis_projection(x: JamesVec, m) -> JamesVec:
    """P_m keeps a_1..a_m and zeroes the rest; P_0 = 0."""
    if not 0 <= m <= x.n:
        raise LabError(f"projection index {m} outside [0, {x.n}]")
    values = x.coeffs.entries[:m] + (mpf(0),) * (x.n - m)
    return JamesVec(CoeffVec(values), x.base)


def unit_vector(i, n, base: NormSpec) -> JamesVec:
    """u_i in J(e_i) of dimension n."""
    return JamesVec(CoeffVec.unit(i, n), base)

