import logging
from fractions import Fraction

import mpmath
from mpmath import mp, mpf

from src.utils.config_loader import setting

logger = logging.getLogger(__name__)


def configure_precision(bits=None):
    """Sets the working significand (bits) of the global mpmath context."""
    bits = int(bits if bits is not None else setting('precision.bits', 128))
    mp.prec = bits
    logger.debug(f"mpmath precision set to {bits} bits")
    return bits


def tolerance():
    """Relative tolerance for verification comparisons at the current precision."""
    return mpf(str(setting('precision.tolerance', '1e-24')))


def to_mpf(value):
    """Converts int, Fraction, str ('3/2' allowed), float or mpf to mpf."""
    if isinstance(value, mpmath.mpf):
        return value
    if isinstance(value, Fraction):
        return mpf(value.numerator) / value.denominator
    if isinstance(value, str) and '/' in value:
        return to_mpf(Fraction(value))
    return mpf(value)


def close(a, b, rel=None):
    """|a - b| <= rel * max(1, |a|, |b|)."""
    rel = tolerance() if rel is None else to_mpf(rel)
    scale = max(mpf(1), abs(a), abs(b))
    return abs(a - b) <= rel * scale


def leq(a, b, rel=None):
    """a <= b up to the relative tolerance."""
    rel = tolerance() if rel is None else to_mpf(rel)
    return a <= b + rel * max(mpf(1), abs(a), abs(b))


def digits(value, n=30):
    return mpmath.nstr(value, n)
