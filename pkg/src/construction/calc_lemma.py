"""Vertex maximization of sum_{i<=l} alpha_i^r x_i^(r/p) over the admissible box-simplex.

Admissible (l, j): 2 sum_{i<l} (i k_i)^(r/2) <= j <= k_l^(1 - p/2) / l^(p/2). The feasible set is
{0 <= x_i <= k_i for i < l, x_l = j - sum_{i<l} x_i >= 0}; every term is convex (r/p > 1), so the
maximum sits at a vertex. The claimed bound is j/2 + 2.
"""
import itertools
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import mpmath
from mpmath import mp, mpf

from src.construction.certify import Monomial, certified_leq
from src.norms.base import pow_abs
from src.norms.params import ConstructionParams
from src.utils.config_loader import setting
from src.utils.errors import InadmissibleInstanceError, InsufficientParamsError
from src.utils.precision import leq
from src.utils.sampling import substream

logger = logging.getLogger(__name__)


def _window_bounds(params: ConstructionParams, l):
    if not 1 <= l <= params.L:
        raise InsufficientParamsError(f"window index l={l} outside [1, {params.L}]")
    p, r, k = params.p, params.r, params.k
    lower = [Monomial.of(2, [(i * k[i - 1], r / 2)]) for i in range(1, l)]
    upper = Monomial.of(1, [(k[l - 1], 1 - p / 2), (l, -p / 2)])
    return lower, upper


def _lower_ok(lower, j, bits):
    return certified_leq(lower, [Monomial.of(j)], bits).holds is True


def _upper_ok(upper, j, bits):
    return certified_leq([Monomial.of(j)], [upper], bits).holds is True


def calc_window(params: ConstructionParams, l) -> Tuple[int, int]:
    """Integer window [lo, hi] of admissible j for l (empty when hi < lo)."""
    lower, upper = _window_bounds(params, l)
    bits = params.precision_bits
    with mp.workprec(bits):
        lo = max(int(mpmath.floor(mpmath.fsum(t.to_mpf() for t in lower))), 0)
        hi = max(int(mpmath.floor(upper.to_mpf())), 0)
    while not _lower_ok(lower, lo, bits):
        lo += 1
    while lo > 0 and _lower_ok(lower, lo - 1, bits):
        lo -= 1
    while hi >= 0 and not _upper_ok(upper, hi, bits):
        hi -= 1
    while _upper_ok(upper, hi + 1, bits):
        hi += 1
    return lo, hi


@dataclass(frozen=True)
class CalcInstance:
    l: int
    j: int
    admissible: bool
    window: Tuple[int, int]

    def to_dict(self):
        return {'l': self.l, 'j': self.j, 'admissible': self.admissible, 'window': list(self.window)}


def calc_instance(params: ConstructionParams, l, j) -> CalcInstance:
    lower, upper = _window_bounds(params, l)
    bits = params.precision_bits
    admissible = j >= 0 and _lower_ok(lower, j, bits) and _upper_ok(upper, j, bits)
    return CalcInstance(l, j, admissible, calc_window(params, l))


def _objective(params, l, x):
    s = params.r / params.p
    return mpmath.fsum(
        pow_abs(params.alpha[i], params.r) * pow_abs(mpf(x[i]), s) for i in range(l) if x[i]
    )


def calc_vertices(params: ConstructionParams, l, j):
    """Vertices of the feasible set: each x_i (i < l) at 0 or k_i with x_l >= 0, plus the x_l = 0 face
    points where exactly one x_i is interior."""
    k = params.k
    seen = set()
    for mask in itertools.product((0, 1), repeat=l - 1):
        x = [k[i] if mask[i] else 0 for i in range(l - 1)]
        rest = j - sum(x)
        if rest >= 0:
            point = tuple(x + [rest])
            if point not in seen:
                seen.add(point)
                yield point
    for free in range(l - 1):
        others = [i for i in range(l - 1) if i != free]
        for mask in itertools.product((0, 1), repeat=len(others)):
            x = [0] * (l - 1)
            for i, full in zip(others, mask):
                x[i] = k[i] if full else 0
            x[free] = j - sum(x)
            if 0 <= x[free] <= k[free]:
                point = tuple(x + [0])
                if point not in seen:
                    seen.add(point)
                    yield point


@dataclass(frozen=True)
class CalcResult:
    instance: CalcInstance
    value: mpf
    maximizer: Tuple[int, ...]
    bound: mpf
    holds: bool

    def to_dict(self):
        return {
            'instance': self.instance.to_dict(),
            'value': self.value,
            'maximizer': [str(x) for x in self.maximizer],
            'bound': self.bound,
            'holds': self.holds,
        }


def calc_lemma_max(params: ConstructionParams, inst: CalcInstance) -> CalcResult:
    if not inst.admissible:
        raise InadmissibleInstanceError(f"j={inst.j} is outside the window {inst.window} for l={inst.l}")
    best, maximizer = None, None
    with mp.workprec(params.precision_bits):
        for x in calc_vertices(params, inst.l, inst.j):
            value = _objective(params, inst.l, x)
            if best is None or value > best:
                best, maximizer = value, x
        bound = mpf(inst.j) / 2 + 2
    holds = leq(best, bound)
    if not holds:
        logger.error(f"calc bound violated at l={inst.l}, j={inst.j}: {best} > {bound}")
    return CalcResult(inst, best, maximizer, bound, holds)


@dataclass(frozen=True)
class ProbeResult:
    value: mpf
    point: Tuple[mpf, ...]
    evaluations: int


def calc_lemma_probe(params: ConstructionParams, inst: CalcInstance, starts=None, steps=None, seed=0):
    """Seeded projected-gradient ascent inside the feasible set; a falsification probe for the vertex max."""
    if not inst.admissible:
        raise InadmissibleInstanceError(f"j={inst.j} is outside the window {inst.window} for l={inst.l}")
    starts = setting('construction.probe_starts', 8) if starts is None else starts
    steps = setting('construction.probe_steps', 60) if steps is None else steps
    l, j = inst.l, mpf(inst.j)
    k = [mpf(c) for c in params.k[:l - 1]]
    s = params.r / params.p
    s_mpf = mpf(s.numerator) / s.denominator
    weights = [pow_abs(a, params.r) for a in params.alpha[:l]]

    def project(y):
        y = [min(max(v, mpf(0)), cap) for v, cap in zip(y, k)]
        total = mpmath.fsum(y)
        if total > j:
            y = [v * j / total for v in y]
        return y

    def full(y):
        return list(y) + [max(j - mpmath.fsum(y), mpf(0))]

    evaluations = 0
    with mp.workprec(params.precision_bits):
        if l == 1:
            value = _objective(params, 1, [j])
            return ProbeResult(value, (j,), 1)
        diameter = max(min(cap, j) for cap in k) or mpf(1)
        best, best_point = None, None
        for start in range(starts):
            rng = substream(seed, inst.l, start)
            y = project([mpf(float(f"{u:.12g}")) * cap for u, cap in zip(rng.random(l - 1), k)])
            for step in range(steps):
                x = full(y)
                value = _objective(params, l, x)
                evaluations += 1
                if best is None or value > best:
                    best, best_point = value, tuple(x)
                gradient = [
                    s_mpf * (weights[i] * pow_abs(x[i], s - 1) - weights[l - 1] * pow_abs(x[l - 1], s - 1))
                    for i in range(l - 1)
                ]
                size = mpmath.sqrt(mpmath.fsum(g * g for g in gradient))
                if size == 0:
                    break
                eta = diameter * mpf('0.5') * mpf('0.9') ** step
                y = project([v + eta * g / size for v, g in zip(y, gradient)])
    logger.debug(f"calc probe l={l}, j={inst.j}: best interior value {best}")
    return ProbeResult(best, best_point, evaluations)
