"""Coefficient vectors (1-based), compressed count vectors and the decreasing rearrangement."""
import logging
from dataclasses import dataclass
from typing import Iterable, Tuple

import mpmath
from mpmath import mpf

from src.utils.errors import CapacityError, CapExceededError, LabError
from src.utils.config_loader import setting
from src.utils.precision import to_mpf

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CoeffVec:
    """Finitely supported real coefficients a_1..a_n. Trailing zeros count towards n."""
    entries: Tuple[mpf, ...]

    def __post_init__(self):
        if len(self.entries) < 1:
            raise LabError("CoeffVec needs at least one entry")
        for a in self.entries:
            if not mpmath.isfinite(a):
                raise LabError(f"CoeffVec entries must be finite, got {a}")

    @classmethod
    def of(cls, values: Iterable):
        values = [to_mpf(v) for v in values]
        cap = setting('caps.explicit_vector', 100000)
        if len(values) > cap:
            raise CapExceededError("explicit vector", len(values), cap)
        return cls(tuple(values))

    @classmethod
    def zeros(cls, n):
        return cls.of([0] * n)

    @classmethod
    def unit(cls, i, n):
        """e_i in dimension n (1-based)."""
        values = [0] * n
        values[i - 1] = 1
        return cls.of(values)

    @classmethod
    def ones(cls, n):
        return cls.of([1] * n)

    @property
    def n(self):
        return len(self.entries)

    def __getitem__(self, i):
        """1-based access."""
        if not 1 <= i <= self.n:
            raise IndexError(f"index {i} outside [1, {self.n}]")
        return self.entries[i - 1]

    def __len__(self):
        return self.n

    def __iter__(self):
        return iter(self.entries)

    def is_zero(self):
        return all(a == 0 for a in self.entries)

    def support(self):
        return [i for i, a in enumerate(self.entries, start=1) if a != 0]

    def scaled(self, c):
        c = to_mpf(c)
        return CoeffVec(tuple(c * a for a in self.entries))

    def padded(self, n):
        if n < self.n:
            raise LabError(f"cannot pad length {self.n} down to {n}")
        return CoeffVec(self.entries + (mpf(0),) * (n - self.n))

    def plus(self, other):
        n = max(self.n, other.n)
        a, b = self.padded(n), other.padded(n)
        return CoeffVec(tuple(x + y for x, y in zip(a.entries, b.entries)))

    def to_list(self):
        return list(self.entries)


def decreasing_rearrangement(v: CoeffVec) -> CoeffVec:
    """|entries| sorted non-increasing."""
    return CoeffVec(tuple(sorted((abs(a) for a in v.entries), reverse=True)))


@dataclass(frozen=True)
class CountGroup:
    value: mpf
    multiplicity: int
    block: int


@dataclass(frozen=True)
class CountVec:
    """Compressed vector: `multiplicity` copies of `value` placed in block `block` (1-based)."""
    groups: Tuple[CountGroup, ...]

    @classmethod
    def of(cls, triples):
        groups = []
        for value, multiplicity, block in triples:
            if int(multiplicity) < 0:
                raise LabError(f"negative multiplicity {multiplicity}")
            if int(block) < 1:
                raise LabError(f"block index must be >= 1, got {block}")
            groups.append(CountGroup(to_mpf(value), int(multiplicity), int(block)))
        return cls(tuple(groups))

    def block_counts(self):
        counts = {}
        for g in self.groups:
            counts[g.block] = counts.get(g.block, 0) + g.multiplicity
        return counts

    def length(self):
        return sum(g.multiplicity for g in self.groups)

    def check_capacity(self, capacities):
        """capacities[i-1] is k_i; raises CapacityError when a block is overfilled."""
        for block, count in self.block_counts().items():
            if block > len(capacities):
                raise CapacityError(f"block {block} beyond the {len(capacities)} configured blocks")
            if count > capacities[block - 1]:
                raise CapacityError(f"block {block} holds {count} > k_{block} = {capacities[block - 1]}")

    def expand(self, capacities) -> CoeffVec:
        """Materializes the vector in block coordinates (block i starts after k_1+...+k_{i-1})."""
        self.check_capacity(capacities)
        last = max((g.block for g in self.groups if g.multiplicity), default=1)
        length = sum(capacities[:last])
        cap = setting('caps.explicit_vector', 100000)
        if length > cap:
            raise CapExceededError("count vector expansion", length, cap)
        values = [mpf(0)] * max(length, 1)
        fill = {}
        for g in self.groups:
            start = sum(capacities[:g.block - 1]) + fill.get(g.block, 0)
            for offset in range(g.multiplicity):
                values[start + offset] = g.value
            fill[g.block] = fill.get(g.block, 0) + g.multiplicity
        return CoeffVec(tuple(values))
