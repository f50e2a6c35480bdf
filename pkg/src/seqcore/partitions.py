"""Interval partitions and gap selections of [1, n], with capped exhaustive enumerators.

Both enumerators yield in lexicographic order of their index sequences, which is what makes
argmax witnesses deterministic (first maximum wins).
"""
import logging
from dataclasses import dataclass
from typing import Iterator, Tuple

from src.utils.config_loader import setting
from src.utils.errors import CapExceededError, LabError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class IntervalPartition:
    """Cuts 1 = p(1) < ... < p(k+1) = n+1; block i is [p(i), p(i+1)-1]."""
    cuts: Tuple[int, ...]

    def __post_init__(self):
        c = self.cuts
        if len(c) < 2 or c[0] != 1:
            raise LabError(f"partition cuts must start at 1 and have at least two entries: {c}")
        if any(b <= a for a, b in zip(c, c[1:])):
            raise LabError(f"partition cuts must be strictly increasing: {c}")

    @classmethod
    def from_starts(cls, starts, n):
        return cls(tuple(starts) + (n + 1,))

    @property
    def n(self):
        return self.cuts[-1] - 1

    @property
    def starts(self):
        return self.cuts[:-1]

    def blocks(self):
        return [(a, b - 1) for a, b in zip(self.cuts, self.cuts[1:])]

    def as_gap_selection(self):
        return GapSelection(tuple(self.blocks()))


@dataclass(frozen=True)
class GapSelection:
    """Pairs 1 <= p(1) <= q(1) < p(2) <= q(2) < ... <= n; gaps allowed anywhere."""
    pairs: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        if not self.pairs:
            raise LabError("a gap selection needs at least one interval")
        previous = 0
        for p, q in self.pairs:
            if not (previous < p <= q):
                raise LabError(f"invalid gap selection {self.pairs}")
            previous = q


def _check_cap(n, key, default, what, cap):
    if n < 1:
        raise LabError(f"{what} needs n >= 1, got {n}")
    cap = setting(key, default) if cap is None else cap
    if n > cap:
        raise CapExceededError(what, n, cap)


def enumerate_interval_partitions(n, cap=None) -> Iterator[IntervalPartition]:
    """All 2^(n-1) interval partitions of [1, n]."""
    _check_cap(n, 'caps.partition', 20, "interval partition enumeration", cap)

    def extend(prefix):
        last = prefix[-1]
        if last == n + 1:
            yield IntervalPartition(tuple(prefix))
            return
        for nxt in range(last + 1, n + 2):
            yield from extend(prefix + [nxt])

    yield from extend([1])


def enumerate_gap_selections(n, cap=None) -> Iterator[GapSelection]:
    """Every nonempty gap selection on [1, n], each once."""
    _check_cap(n, 'caps.gap_selection', 16, "gap selection enumeration", cap)

    def extend(pairs, after):
        for p in range(after + 1, n + 1):
            for q in range(p, n + 1):
                chosen = pairs + [(p, q)]
                yield GapSelection(tuple(chosen))
                yield from extend(chosen, q)

    yield from extend([], 0)


def count_gap_selections(n):
    """Closed count F(2n+1) - 1 via the recursion g(m) = g(m-1) + sum_{t<m} g(t), g(0) = 1."""
    g = [1]
    for m in range(1, n + 1):
        g.append(g[m - 1] + sum(g[:m]))
    return g[n] - 1
