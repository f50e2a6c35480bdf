import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Tuple

from mpmath import mp, mpf, sqrt, power

from src.utils.errors import InfeasibleRegimeError, LabError, InsufficientParamsError

logger = logging.getLogger(__name__)


def conjugate(p: Fraction) -> Fraction:
    """p' = p/(p-1)."""
    return p / (p - 1)


def check_regime(p: Fraction, r: Fraction):
    """r' < p < 2 < r."""
    if not (1 < p < 2 < r):
        raise InfeasibleRegimeError(f"need 1 < p < 2 < r, got p={p}, r={r}")
    if not conjugate(r) < p:
        raise InfeasibleRegimeError(f"need r' < p, got r'={conjugate(r)} >= p={p}")


@dataclass(frozen=True)
class ConstructionParams:
    """(p, r, k_1..k_L) of the block construction; alpha_n is derived at `precision_bits`."""
    p: Fraction
    r: Fraction
    k: Tuple[int, ...]
    precision_bits: int = 128
    synthetic: bool = field(default=False, compare=False)
    _alpha_cache: dict = field(default_factory=dict, init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, 'p', Fraction(self.p))
        object.__setattr__(self, 'r', Fraction(self.r))
        object.__setattr__(self, 'k', tuple(int(k) for k in self.k))
        check_regime(self.p, self.r)
        if not self.k:
            raise LabError("ConstructionParams needs at least one block size k_1")
        if any(k < 1 for k in self.k):
            raise LabError(f"block sizes must be positive integers, got {self.k}")
        if self.precision_bits < 16:
            raise LabError(f"precision_bits too small: {self.precision_bits}")

    @property
    def L(self):
        return len(self.k)

    @property
    def p_conj(self) -> Fraction:
        return conjugate(self.p)

    @property
    def r_conj(self) -> Fraction:
        return conjugate(self.r)

    @property
    def alpha_exponent(self) -> Fraction:
        """(1/p' - 1/p)/2, the exponent of k_n in alpha_n."""
        return (1 / self.p_conj - 1 / self.p) / 2

    @property
    def alpha(self) -> Tuple[mpf, ...]:
        """alpha_n = sqrt(n) * k_n^((1/p' - 1/p)/2), n = 1..L, at max(precision_bits, working precision);
        cached per precision."""
        bits = max(self.precision_bits, mp.prec)
        if bits not in self._alpha_cache:
            e = self.alpha_exponent
            with mp.workprec(bits):
                self._alpha_cache[bits] = tuple(
                    sqrt(n) * power(mpf(k), mpf(e.numerator) / e.denominator)
                    for n, k in enumerate(self.k, start=1)
                )
            logger.debug(f"alpha computed at {bits} bits for k={self.k}")
        return self._alpha_cache[bits]

    @property
    def total(self):
        return sum(self.k)

    def block_start(self, i):
        """0-based offset of block i (1-based) in global coordinates."""
        return sum(self.k[:i - 1])

    def block_ranges(self, n):
        """Global 1-based index ranges of the blocks touched by a vector of length n."""
        if n > self.total:
            raise InsufficientParamsError(
                f"vector of length {n} extends past block {self.L} (total capacity {self.total})")
        ranges = []
        for i, k in enumerate(self.k, start=1):
            start = self.block_start(i) + 1
            if start > n:
                break
            ranges.append((i, start, min(start + k - 1, n)))
        return ranges

    def with_k(self, k):
        return ConstructionParams(self.p, self.r, tuple(k), self.precision_bits, self.synthetic)

    def to_dict(self):
        return {
            'p': _fraction_str(self.p),
            'r': _fraction_str(self.r),
            'k': [str(k) for k in self.k],
            'precision_bits': self.precision_bits,
        }


def _fraction_str(x: Fraction):
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
