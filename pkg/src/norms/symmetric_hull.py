"""Symmetric hull of the block t-norm: the sup over permutations of the coefficients.

The flat l^r term is permutation invariant, so only the blockwise term is optimized. With
b = |a|^p and s = r/p the blockwise term to the power r is

    sum_i alpha_i^r (sum of b over the coefficients placed in block i)^s,

a convex function of the block loads. Three evaluation paths:

* exact: every assignment of the multiset of magnitudes to blocks (duplicates counted, not permuted)
* counts: all magnitudes equal, so only the block counts (j_i) matter; the optimum of the convex
  objective over {0 <= j_i <= k_i, sum j_i = j} is at a vertex, i.e. every count at 0 or k_i except
  at most one
* dp: contiguous runs of the decreasing rearrangement per block, best over all block orders
"""
import itertools
import logging
from dataclasses import dataclass
from typing import Optional

import mpmath
from mpmath import mpf

from src.norms.base import NormSpec, BlockTNorm, pow_abs, root, lp_eval
from src.norms.params import ConstructionParams
from src.seqcore.vectors import CoeffVec, CountVec
from src.utils.config_loader import setting
from src.utils.errors import CapExceededError, InsufficientParamsError, LabError, CapacityError

logger = logging.getLogger(__name__)

MODES = ('exact', 'dp', 'auto')


@dataclass(frozen=True)
class HullResult:
    value: mpf
    assignment: Optional[CountVec]
    mode: str

    def to_dict(self):
        witness = None
        if self.assignment is not None:
            witness = [
                {'value': float(g.value), 'count': g.multiplicity, 'block': g.block}
                for g in self.assignment.groups if g.multiplicity
            ]
        return {'value': self.value, 'assignment': witness, 'mode': self.mode}


def _magnitudes(v: CoeffVec):
    return sorted((abs(a) for a in v if a != 0), reverse=True)


def _check_fits(params, count):
    if count > params.total:
        raise InsufficientParamsError(
            f"{count} nonzero coefficients do not fit into {params.L} blocks (capacity {params.total})")


def _blockwise_power(params, loads):
    """sum_i alpha_i^r loads_i^(r/p); loads_i is the sum of |a|^p placed in block i."""
    s = params.r / params.p
    return mpmath.fsum(
        pow_abs(params.alpha[i], params.r) * pow_abs(load, s)
        for i, load in enumerate(loads) if load != 0
    )


def best_count_assignment(params: ConstructionParams, j: int):
    """Max of sum alpha_i^r j_i^(r/p) over integer counts 0 <= j_i <= k_i with sum j_i = j.

    Returns (best, counts). Vertices only: every count saturated or empty except one free block.
    """
    if j < 0 or j > params.total:
        raise CapacityError(f"j = {j} outside [0, {params.total}]")
    L = params.L
    best, best_counts = None, None
    for free in range(L):
        others = [i for i in range(L) if i != free]
        for mask in itertools.product((0, 1), repeat=len(others)):
            counts = [0] * L
            for i, full in zip(others, mask):
                counts[i] = params.k[i] if full else 0
            rest = j - sum(counts)
            if not 0 <= rest <= params.k[free]:
                continue
            counts[free] = rest
            value = _blockwise_power(params, [mpf(c) for c in counts])
            if best is None or value > best:
                best, best_counts = value, tuple(counts)
    return best, best_counts


def _hull_counts(params, magnitude, j):
    best, counts = best_count_assignment(params, j)
    flat = root(mpf(j), params.r)
    value = magnitude * max(flat, root(best, params.r))
    assignment = CountVec.of([(magnitude, c, i) for i, c in enumerate(counts, start=1) if c])
    return HullResult(value, assignment, 'counts')


def _hull_exact(params, mags):
    """Exhaustive over multiset assignments of the magnitudes into capacity-bounded blocks."""
    L = params.L
    distinct = []
    for m in mags:
        if distinct and distinct[-1][0] == m:
            distinct[-1][1] += 1
        else:
            distinct.append([m, 1])
    powered = [pow_abs(m, params.p) for m, _ in distinct]
    best = [None, None]

    def compositions(total, parts, caps):
        if parts == 1:
            if total <= caps[0]:
                yield (total,)
            return
        for first in range(min(total, caps[0]), -1, -1):
            for rest in compositions(total - first, parts - 1, caps[1:]):
                yield (first,) + rest

    def place(idx, remaining, loads, plan):
        if idx == len(distinct):
            value = _blockwise_power(params, loads)
            if best[0] is None or value > best[0]:
                best[0], best[1] = value, list(plan)
            return
        count = distinct[idx][1]
        for split in compositions(count, L, remaining):
            new_remaining = [c - s for c, s in zip(remaining, split)]
            new_loads = [load + s * powered[idx] for load, s in zip(loads, split)]
            place(idx + 1, new_remaining, new_loads, plan + [split])

    place(0, list(params.k), [mpf(0)] * L, [])
    flat = lp_eval(params.r, CoeffVec(tuple(mags)))
    value = max(flat, root(best[0], params.r))
    triples = [
        (distinct[d][0], split[i], i + 1)
        for d, split in enumerate(best[1]) for i in range(L) if split[i]
    ]
    return HullResult(value, CountVec.of(triples), 'exact')


def _hull_dp(params, mags):
    """(block, prefix consumed) dynamic program, run once per ordering of the blocks."""
    N = len(mags)
    prefix = [mpf(0)]
    for m in mags:
        prefix.append(prefix[-1] + pow_abs(m, params.p))
    s = params.r / params.p
    alpha_r = [pow_abs(a, params.r) for a in params.alpha]
    best_value, best_plan = None, None
    for order in itertools.permutations(range(params.L)):
        # table[m] = (value, plan) after the blocks processed so far consumed the first m magnitudes
        table = {0: (mpf(0), ())}
        for block in order:
            nxt = {}
            for m, (value, plan) in table.items():
                for c in range(0, min(params.k[block], N - m) + 1):
                    load = prefix[m + c] - prefix[m]
                    candidate = value + (alpha_r[block] * pow_abs(load, s) if c else 0)
                    key = m + c
                    if key not in nxt or candidate > nxt[key][0]:
                        nxt[key] = (candidate, plan + ((block, m, c),))
            table = nxt
        if N in table and (best_value is None or table[N][0] > best_value):
            best_value, best_plan = table[N]
    flat = lp_eval(params.r, CoeffVec(tuple(mags)))
    value = max(flat, root(best_value, params.r))
    triples = []
    for block, start, count in best_plan:
        for m in mags[start:start + count]:
            triples.append((m, 1, block + 1))
    return HullResult(value, CountVec.of(triples), 'dp')


def symmetric_hull_eval(params: ConstructionParams, v: CoeffVec, mode='auto', cap=None) -> HullResult:
    """sup over permutations sigma of ||sum a_i t_sigma(i)||; returns the value and a block assignment."""
    if mode not in MODES:
        raise LabError(f"unknown symmetric hull mode {mode!r}")
    mags = _magnitudes(v)
    if not mags:
        return HullResult(mpf(0), None, mode)
    _check_fits(params, len(mags))
    cap = setting('caps.hull_exact', 8) if cap is None else cap
    if mode == 'exact':
        if len(mags) > cap:
            raise CapExceededError("symmetric hull exact mode", len(mags), cap)
        return _hull_exact(params, mags)
    if mode == 'dp':
        return _hull_dp(params, mags)
    if len(mags) <= cap:
        return _hull_exact(params, mags)
    if mags[0] == mags[-1]:
        return _hull_counts(params, mags[0], len(mags))
    logger.warning(f"symmetric hull of {len(mags)} distinct-valued coefficients evaluated in dp mode")
    return _hull_dp(params, mags)


def symmetric_hull_ones(params: ConstructionParams, j: int) -> HullResult:
    """Hull norm of e_1 + ... + e_j without materializing j coordinates."""
    if j == 0:
        return HullResult(mpf(0), None, 'counts')
    return _hull_counts(params, mpf(1), j)


@dataclass(frozen=True)
class SymmetricHullNorm(NormSpec):
    inner: BlockTNorm
    mode: str = 'auto'

    symmetric = True

    def __post_init__(self):
        if not isinstance(self.inner, BlockTNorm):
            raise LabError("the symmetric hull is only defined over the block t-norm")
        if self.mode not in MODES:
            raise LabError(f"unknown symmetric hull mode {self.mode!r}")

    @property
    def params(self):
        return self.inner.params

    def evaluate(self, v):
        return symmetric_hull_eval(self.params, v, self.mode).value

    def spec_string(self):
        return f"symhull:{self.inner.spec_string()}"
