"""Seeded, counter-indexed random substreams.

Every start, sample or case draws from ``substream(seed, *counters)`` so that results depend only on
(seed, counters) and never on the order in which work is executed.
"""
import numpy as np
from mpmath import mpf


def substream(seed, *counters):
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF] + [int(c) for c in counters]
    return np.random.default_rng(entropy)


def gaussian_vector(rng, n):
    # rounded to 12 significant digits so the mpf conversion is platform independent
    return [mpf(float(f"{x:.12g}")) for x in rng.standard_normal(n)]


def sign_pattern(rng, n, density=0.5):
    signs = rng.choice([-1, 1], size=n)
    mask = rng.random(n) < density
    if not mask.any():
        mask[int(rng.integers(n))] = True
    return [mpf(int(s)) if m else mpf(0) for s, m in zip(signs, mask)]


def window_points(lo, hi, count):
    """All integers in [lo, hi] if there are at most `count`, else `count` evenly spaced ones."""
    if hi < lo:
        return []
    size = hi - lo + 1
    if size <= count:
        return list(range(lo, hi + 1))
    if count == 1:
        return [lo]
    return sorted({lo + (size - 1) * i // (count - 1) for i in range(count)})
