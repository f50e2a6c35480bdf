"""Finitely supported functionals: coordinate functionals e'_i / u'_i plus a multiple of S."""
import logging
from dataclasses import dataclass

import mpmath
from mpmath import mpf

from src.james.james_norm import JamesVec
from src.norms.base import as_exponent, lp_eval, sup_norm_eval
from src.norms.params import conjugate
from src.seqcore.vectors import CoeffVec
from src.utils.errors import LabError, UnsupportedBaseError
from src.utils.precision import to_mpf

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Functional:
    """sum f_i e'_i (or u'_i) + s_coeff * S."""
    coeffs: CoeffVec
    s_coeff: mpf = mpf(0)

    @classmethod
    def of(cls, values, s_coeff=0):
        return cls(CoeffVec.of(values), to_mpf(s_coeff))

    @classmethod
    def coordinate(cls, i, n):
        """e'_i (base space) or u'_i (James space) in dimension n."""
        return cls(CoeffVec.unit(i, n))

    @classmethod
    def summing(cls, n):
        """S, the functional sum a_i on J(e_i)."""
        return cls(CoeffVec.zeros(n), mpf(1))

    @classmethod
    def ones(cls, j):
        """e'_1 + ... + e'_j."""
        return cls(CoeffVec.ones(j))

    @property
    def n(self):
        return self.coeffs.n

    def effective(self, n=None) -> CoeffVec:
        """Coefficient vector g with <f, x> = sum g_i a_i on vectors of length n (S adds 1 everywhere)."""
        n = n or self.n
        if n < self.n:
            raise LabError(f"functional of length {self.n} applied in dimension {n}")
        g = self.coeffs.padded(n)
        if self.s_coeff == 0:
            return g
        return CoeffVec(tuple(a + self.s_coeff for a in g))


def pair(f: Functional, x) -> mpf:
    """<f, x> = sum f_i a_i + s_coeff * S(x); S only exists on James vectors."""
    if isinstance(x, JamesVec):
        coeffs = x.coeffs
    elif isinstance(x, CoeffVec):
        if f.s_coeff != 0:
            raise LabError("the summing functional S is only defined on J(e_i) vectors")
        coeffs = x
    else:
        raise LabError(f"cannot pair a functional with {type(x).__name__}")
    n = max(coeffs.n, f.n)
    a, g = coeffs.padded(n), f.coeffs.padded(n)
    value = mpmath.fsum(gi * ai for gi, ai in zip(g, a))
    if f.s_coeff != 0:
        value += f.s_coeff * mpmath.fsum(coeffs)
    return value


def lp_dual_eval(p, f: Functional):
    """||f||_{p'} with p' = p/(p-1)."""
    p = as_exponent(p)
    if f.s_coeff != 0:
        raise LabError("l^p duals carry no S component")
    if p == 1:
        raise UnsupportedBaseError("the dual of l^1 is the sup norm; use sup_norm_eval")
    if p < 1:
        raise LabError(f"l^p needs p >= 1, got {p}")
    return lp_eval(conjugate(p), f.coeffs)


def l1_dual_eval(f: Functional):
    if f.s_coeff != 0:
        raise LabError("l^1 duals carry no S component")
    return sup_norm_eval(f.coeffs)
