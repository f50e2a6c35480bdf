"""Empirical domination constants between finite basis sections.

All constants are lower bounds carried with the witness that attains them; none of these routines
claims a supremum was reached.
"""
import itertools
import logging
from dataclasses import dataclass, field
from typing import List, Optional

import mpmath
from mpmath import mpf

from src.duality.bounds import primal_evaluator
from src.duality.search import RatioSearch
from src.james.james_norm import JamesVec, james_norm
from src.norms.base import NormSpec
from src.norms.spec_parser import Space
from src.seqcore.partitions import enumerate_gap_selections, count_gap_selections, GapSelection
from src.seqcore.vectors import CoeffVec
from src.utils.config_loader import setting
from src.utils.errors import LabError, CapExceededError
from src.utils.sampling import substream, gaussian_vector, sign_pattern

logger = logging.getLogger(__name__)


def _evaluator(norm):
    return primal_evaluator(norm if isinstance(norm, Space) else Space(norm))


def _spec(norm):
    return norm.spec_string()


@dataclass(frozen=True)
class DominationReport:
    dim: int
    constant_lb: mpf
    witness: CoeffVec
    samples: int
    seed: int
    source: str = ''
    target: str = ''
    route: str = ''

    def to_dict(self):
        return {
            'dim': self.dim,
            'constant_lb': self.constant_lb,
            'witness': self.witness,
            'samples': self.samples,
            'seed': self.seed,
            'source': self.source,
            'target': self.target,
            'route': self.route,
        }


def _alternating(n):
    return CoeffVec(tuple(mpf((-1) ** i) for i in range(n)))


def domination_candidates(dim, seed, random_starts):
    """Basis vectors, constant and alternating vectors first, then seeded sparse signs and Gaussians."""
    starts = [('constant', CoeffVec.ones(dim)), ('alternating', _alternating(dim))]
    starts.extend((f'basis-{i}', CoeffVec.unit(i, dim)) for i in range(1, dim + 1))
    for index in range(random_starts):
        rng = substream(seed, index)
        if index % 2 == 0:
            starts.append((f'sparse-{index}', CoeffVec(tuple(sign_pattern(rng, dim, 0.5)))))
        else:
            starts.append((f'gaussian-{index}', CoeffVec(tuple(gaussian_vector(rng, dim)))))
    return starts


def domination_constant_lb(source, target, dim, budget=None, seed=0, initial: Optional[CoeffVec] = None):
    """Best ratio ||a||_target / ||a||_source found; `initial` is tried before every other start."""
    if dim < 1:
        raise LabError(f"domination needs dim >= 1, got {dim}")
    evaluate_source, evaluate_target = _evaluator(source), _evaluator(target)

    def objective(x):
        denominator = evaluate_source(x)
        if denominator == 0:
            return None
        return evaluate_target(x) / denominator

    random_starts = max(setting('search.starts', 64) - dim - 2, 0)
    starts = domination_candidates(dim, seed, random_starts)
    if initial is not None:
        starts.insert(0, ('previous-dim', initial.padded(dim)))
    result = RatioSearch(objective, budget, normalize=evaluate_source).run(starts)
    # recomputed from the witness so the reported constant is exactly what the witness attains
    constant = evaluate_target(result.witness) / evaluate_source(result.witness)
    logger.info(f"domination {_spec(source)} -> {_spec(target)}, dim {dim}: constant >= {mpmath.nstr(constant, 12)}")
    return DominationReport(dim, constant, result.witness, result.evaluations, seed,
                            _spec(source), _spec(target), result.label)


def domination_profile(source, target, dims, budget=None, seed=0) -> List[DominationReport]:
    """Constants for ascending dims; each dim starts from the zero-padded previous witness."""
    reports, previous = [], None
    for dim in sorted(dims):
        report = domination_constant_lb(source, target, dim, budget, seed, initial=previous)
        reports.append(report)
        previous = report.witness
    return reports


@dataclass
class RightDominanceReport:
    norm: str
    dim: int
    worst_ratio: mpf
    witness_pairs: Optional[GapSelection]
    witness_coeffs: Optional[CoeffVec]
    cases: int
    exhaustive: bool
    seed: int
    ratios_all_one: bool = True

    def to_dict(self):
        return {
            'norm': self.norm,
            'dim': self.dim,
            'worst_ratio': self.worst_ratio,
            'witness_pairs': self.witness_pairs,
            'witness_coeffs': self.witness_coeffs,
            'cases': self.cases,
            'exhaustive': self.exhaustive,
            'seed': self.seed,
            'ratios_all_one': self.ratios_all_one,
        }


def _interlaced_vectors(pairs: GapSelection, coeffs, dim):
    """(sum a_i e_{m(i)}, sum a_i e_{n(i)}) for interlaced m(i) <= n(i) < m(i+1)."""
    left, right = [mpf(0)] * dim, [mpf(0)] * dim
    for (m, n), a in zip(pairs.pairs, coeffs):
        left[m - 1] = a
        right[n - 1] = a
    return CoeffVec(tuple(left)), CoeffVec(tuple(right))


def _random_interlacing(rng, dim):
    pairs, position = [], 1
    while position <= dim:
        if rng.random() < 0.5:
            m = position
            n = int(rng.integers(m, dim + 1))
            pairs.append((m, n))
            position = n + 1
        else:
            position += 1
    if not pairs:
        m = int(rng.integers(1, dim + 1))
        pairs.append((m, m))
    return GapSelection(tuple(pairs))


def right_dominance_profile(norm: NormSpec, dim, samples=None, seed=0) -> RightDominanceReport:
    """Worst ||sum a_i e_{m(i)}|| / ||sum a_i e_{n(i)}|| over interlaced pairs and coefficients."""
    if dim < 1:
        raise LabError(f"right dominance needs dim >= 1, got {dim}")
    samples = setting('suites.right_dominance_samples', 500) if samples is None else samples
    evaluate = _evaluator(norm)
    threshold = setting('caps.interlacing_exhaustive', 10000)
    exhaustive = dim <= 8 and count_gap_selections(dim) < threshold

    cases = []
    if exhaustive:
        for pairs in enumerate_gap_selections(dim, cap=dim):
            k = len(pairs.pairs)
            cases.append((pairs, [mpf(1)] * k))
            cases.append((pairs, [mpf((-1) ** i) for i in range(k)]))
    for index in range(samples):
        rng = substream(seed, index)
        pairs = _random_interlacing(rng, dim)
        cases.append((pairs, gaussian_vector(rng, len(pairs.pairs))))

    worst, witness, all_one = None, None, True
    for pairs, coeffs in cases:
        if all(a == 0 for a in coeffs):
            continue
        left, right = _interlaced_vectors(pairs, coeffs, dim)
        ratio = evaluate(left) / evaluate(right)
        if ratio != 1:
            all_one = False
        if worst is None or ratio > worst:
            worst, witness = ratio, (pairs, CoeffVec(tuple(coeffs)))
    logger.info(f"right dominance on {_spec(norm)}, dim {dim}: worst ratio {worst} over {len(cases)} cases")
    return RightDominanceReport(_spec(norm), dim, worst, witness[0], witness[1], len(cases),
                                exhaustive, seed, all_one)


@dataclass
class EquivalenceReport:
    base: str
    m: int
    c_low: mpf
    c_high: mpf
    argmin: CoeffVec
    argmax: CoeffVec
    samples: int
    rows: List[dict] = field(default_factory=list)

    def to_dict(self):
        return {
            'base': self.base,
            'm': self.m,
            'c_low': self.c_low,
            'c_high': self.c_high,
            'argmin': self.argmin,
            'argmax': self.argmax,
            'samples': self.samples,
        }


def pair_vectors(b: CoeffVec):
    """(sum b_i (u_{2i-1} - u_{2i}), sum b_i e_{2i}) as coefficient vectors of length 2m."""
    james, plain = [], []
    for value in b:
        james.extend([value, -value])
        plain.extend([mpf(0), value])
    return CoeffVec(tuple(james)), CoeffVec(tuple(plain))


def pair_equivalence_report(base: NormSpec, m, cap=None, samples=None, seed=0) -> EquivalenceReport:
    """Range of ||sum b_i (u_{2i-1} - u_{2i})||_J / ||sum b_i e_{2i}|| over sign patterns and samples."""
    if m < 1:
        raise LabError(f"pair equivalence needs m >= 1, got {m}")
    cap = setting('caps.partition', 20) if cap is None else cap
    if 4 * m > cap:
        raise CapExceededError("pair equivalence (4m)", 4 * m, cap)
    samples = setting('suites.samples', 100) if samples is None else samples

    candidates = [CoeffVec(tuple(mpf(s) for s in (1,) + signs))
                  for signs in itertools.product((1, -1), repeat=m - 1)]
    for index in range(samples):
        candidates.append(CoeffVec(tuple(gaussian_vector(substream(seed, index), m))))

    low = high = None
    rows = []
    for b in candidates:
        if b.is_zero():
            continue
        james_side, plain_side = pair_vectors(b)
        ratio = james_norm(JamesVec(james_side, base), cap) / base(plain_side)
        rows.append({'b': b, 'ratio': ratio})
        if low is None or ratio < low[0]:
            low = (ratio, b)
        if high is None or ratio > high[0]:
            high = (ratio, b)
    logger.info(f"pair equivalence on {base.spec_string()}, m={m}: [{mpmath.nstr(low[0], 12)}, "
                f"{mpmath.nstr(high[0], 12)}]")
    return EquivalenceReport(base.spec_string(), m, low[0], high[0], low[1], high[1], len(rows), rows)
