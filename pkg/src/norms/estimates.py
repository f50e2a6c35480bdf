"""Empirical upper p-estimate: ||sum x_i|| <= C (sum ||x_i||^p)^(1/p) for disjointly supported x_i."""
import logging

import mpmath
from mpmath import mpf

from src.norms.base import NormSpec, BlockTNorm, LorentzNorm, as_exponent, pow_abs, root
from src.norms.symmetric_hull import SymmetricHullNorm
from src.reporting.report import Report
from src.seqcore.vectors import CoeffVec
from src.utils.config_loader import setting
from src.utils.precision import leq, tolerance
from src.utils.sampling import substream, gaussian_vector

logger = logging.getLogger(__name__)


def max_length_for(norm: NormSpec, wanted=None):
    """Longest explicit vector the sampler may hand to `norm` without leaving its exact paths."""
    n = wanted or setting('suites.max_length', 12)
    if isinstance(norm, SymmetricHullNorm):
        n = min(n, norm.params.total, setting('caps.hull_exact', 8))
    elif isinstance(norm, BlockTNorm):
        n = min(n, norm.params.total)
    elif isinstance(norm, LorentzNorm) and norm.weights is not None:
        n = min(n, len(norm.weights))
    return max(n, 1)


def _disjoint_pieces(rng, n):
    """Splits a random subset of [1, n] into 2..min(n, 6) nonempty groups with Gaussian entries."""
    m = int(rng.integers(2, min(n, 6) + 1)) if n >= 2 else 1
    labels = rng.integers(-1, m, size=n)
    for piece in range(m):
        if not (labels == piece).any():
            labels[int(rng.integers(n))] = piece
    values = gaussian_vector(rng, n)
    pieces = []
    for piece in range(m):
        entries = [values[i] if labels[i] == piece else mpf(0) for i in range(n)]
        if all(a == 0 for a in entries):
            continue
        pieces.append(CoeffVec(tuple(entries)))
    return pieces


def _ratio(norm, pieces, p):
    total = pieces[0]
    for piece in pieces[1:]:
        total = total.plus(piece)
    lhs = norm(total)
    rhs = root(mpmath.fsum(pow_abs(norm(x), p) for x in pieces), p)
    return lhs / rhs, lhs, rhs


def check_upper_p_estimate(norm: NormSpec, p, trials=None, seed=0) -> Report:
    """Worst observed constant over seeded disjoint families, always including m equal singletons."""
    p = as_exponent(p)
    trials = setting('suites.upper_p_trials', 200) if trials is None else trials
    n_max = max_length_for(norm)
    report = Report('upper-p', config={'norm': norm.spec_string(), 'p': p, 'trials': trials, 'seed': seed})
    logger.info(f"Upper {p}-estimate check on {norm.spec_string()}: {trials} trials, max length {n_max}")

    families = []
    for m in range(2, n_max + 1):
        families.append(('singletons', [CoeffVec.unit(i, m) for i in range(1, m + 1)]))
    for t in range(trials):
        rng = substream(seed, t)
        n = int(rng.integers(2, n_max + 1)) if n_max >= 2 else 1
        families.append((f"sample-{t}", _disjoint_pieces(rng, n)))

    worst, worst_family = mpf(0), None
    for label, pieces in families:
        if len(pieces) < 2:
            continue
        ratio, lhs, rhs = _ratio(norm, pieces, p)
        report.add_row('ratios', family=label, pieces=len(pieces), lhs=lhs, rhs=rhs, ratio=ratio)
        if ratio > worst:
            worst, worst_family = ratio, pieces

    report.summary = {'worst_constant': worst, 'families': len(families)}
    report.check('upper_p_constant_at_most_1', leq(worst, mpf(1), tolerance()), lhs=worst, rhs=mpf(1),
                 margin=mpf(1) - worst, witness=[x.to_list() for x in worst_family or []])
    return report
