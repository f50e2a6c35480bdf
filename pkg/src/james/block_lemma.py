"""Constructive witness for zero-sum block bases of (u_i).

Given consecutive blocks v_1, v_2, ... of (u_i) whose coefficients sum to zero on each block, build
vectors w_m of the base space with ||w_m|| <= ||v_m||_J and report the observed constant C with
||sum v_m||_J = C ||sum w_m||.
"""
import logging
from dataclasses import dataclass
from typing import List, Tuple

import mpmath
from mpmath import mpf

from src.james.james_norm import JamesVec, james_norm_exhaustive, representative
from src.norms.base import NormSpec
from src.seqcore.partitions import IntervalPartition
from src.seqcore.vectors import CoeffVec
from src.utils.errors import NonZeroBlockSumError, LabError
from src.utils.precision import tolerance, leq

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BlockVector:
    """Coefficients against u_start, ..., u_end."""
    start: int
    coeffs: CoeffVec

    def __post_init__(self):
        if self.start < 1:
            raise LabError(f"block must start at index >= 1, got {self.start}")

    @classmethod
    def of(cls, start, values):
        return cls(start, CoeffVec.of(values))

    @property
    def end(self):
        return self.start + self.coeffs.n - 1

    def block_sum(self):
        return mpmath.fsum(self.coeffs)

    def embedded(self, n) -> CoeffVec:
        values = [mpf(0)] * n
        for offset, a in enumerate(self.coeffs):
            values[self.start - 1 + offset] = a
        return CoeffVec(tuple(values))


@dataclass(frozen=True)
class BlockCheck:
    block: int
    w_norm: mpf
    v_norm: mpf
    holds: bool

    def to_dict(self):
        return {'block': self.block, 'w_norm': self.w_norm, 'v_norm': self.v_norm, 'holds': self.holds}


@dataclass(frozen=True)
class LemmaWitness:
    w_blocks: Tuple[CoeffVec, ...]
    c_observed: mpf
    j_norm: mpf
    w_norm: mpf
    optimal: IntervalPartition
    refined: IntervalPartition
    checks: Tuple[BlockCheck, ...]

    @property
    def all_hold(self):
        return all(c.holds for c in self.checks)

    def to_dict(self):
        return {
            'w_blocks': [w.to_list() for w in self.w_blocks],
            'c_observed': self.c_observed,
            'j_norm': self.j_norm,
            'w_norm': self.w_norm,
            'optimal_partition': list(self.optimal.starts),
            'refined_partition': list(self.refined.starts),
            'checks': [c.to_dict() for c in self.checks],
        }


def _validate(blocks: List[BlockVector]):
    if not blocks:
        raise LabError("norm lemma needs at least one block")
    for previous, current in zip(blocks, blocks[1:]):
        if current.start != previous.end + 1:
            raise LabError(f"blocks must be consecutive: block ending at {previous.end} "
                           f"followed by block starting at {current.start}")
    tol = tolerance()
    for index, block in enumerate(blocks, start=1):
        scale = max(mpf(1), mpmath.fsum(abs(a) for a in block.coeffs))
        if abs(block.block_sum()) > tol * scale:
            raise NonZeroBlockSumError(f"block {index} sums to {block.block_sum()}, not 0")


def norm_lemma_witness(blocks: List[BlockVector], base: NormSpec, cap=None) -> LemmaWitness:
    _validate(blocks)
    n = blocks[-1].end
    x = JamesVec(sum_vectors([b.embedded(n) for b in blocks]), base)
    optimal = james_norm_exhaustive(x, cap)

    # refine the optimal partition by the block starts n(m)
    cuts = sorted(set(optimal.partition.starts) | {b.start for b in blocks})
    refined = IntervalPartition.from_starts(cuts, n)
    refined_sums = representative(x, refined)

    w_blocks, checks = [], []
    for m, block in enumerate(blocks, start=1):
        values = [mpf(0)] * n
        for q in cuts:
            if block.start <= q <= block.end:
                values[q - 1] = refined_sums[q]
        w = CoeffVec(tuple(values))
        w_norm = base(w)
        v_norm = james_norm_exhaustive(JamesVec(block.embedded(n), base), cap).value
        holds = leq(w_norm, v_norm)
        if not holds:
            logger.error(f"block {m}: ||w|| = {w_norm} exceeds ||v||_J = {v_norm}")
        w_blocks.append(w)
        checks.append(BlockCheck(m, w_norm, v_norm, holds))

    w_total = base(sum_vectors(w_blocks))
    if w_total == 0:
        c_observed = mpf(1)
    else:
        c_observed = optimal.value / w_total
    logger.debug(f"norm lemma witness over {base.spec_string()}: {len(blocks)} blocks, C = {c_observed}")
    return LemmaWitness(tuple(w_blocks), c_observed, optimal.value, w_total,
                        optimal.partition, refined, tuple(checks))


def sum_vectors(vectors: List[CoeffVec]) -> CoeffVec:
    total = vectors[0]
    for v in vectors[1:]:
        total = total.plus(v)
    return total
