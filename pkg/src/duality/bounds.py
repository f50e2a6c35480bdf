"""Certified lower/upper bounds for dual norms.

lower: a witness x found by multi-start ascent, normalized by its computed primal norm, so
<f, x>/||x|| is always a valid lower bound whatever the optimizer does.
upper: the smallest of the relaxations that apply to the norm; each bound names its certificate.
"""
import logging
from dataclasses import dataclass

import mpmath
from mpmath import mpf

from src.duality.functionals import Functional, pair
from src.duality.search import RatioSearch
from src.james.james_norm import JamesVec, james_norm
from src.norms.base import (
    NormSpec, LpNorm, LorentzNorm, BlockTNorm, lp_eval, sup_norm_eval, pow_abs, root,
)
from src.norms.params import conjugate
from src.norms.spec_parser import Space
from src.norms.symmetric_hull import SymmetricHullNorm
from src.seqcore.vectors import CoeffVec
from src.utils.config_loader import setting
from src.utils.errors import BudgetError, UnsupportedBaseError, LabError
from src.utils.precision import close
from src.utils.sampling import substream, gaussian_vector

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DualBound:
    lower: mpf
    upper: mpf
    witness: CoeffVec
    certificate: str
    lower_route: str = ''
    evaluations: int = 0

    @property
    def tight(self):
        return close(self.lower, self.upper)

    def to_dict(self):
        return {
            'lower': self.lower,
            'upper': self.upper,
            'witness': self.witness,
            'certificate': self.certificate,
            'lower_route': self.lower_route,
            'tight': self.tight,
            'evaluations': self.evaluations,
        }


def _dual_lp(p, g: CoeffVec):
    return sup_norm_eval(g) if p == 1 else lp_eval(conjugate(p), g)


def base_upper_certificate(norm: NormSpec, g: CoeffVec):
    """(bound on sup <g, x>/||x||, certificate name) for a base norm."""
    if g.is_zero():
        return mpf(0), 'zero'
    if isinstance(norm, LpNorm):
        return _dual_lp(norm.p, g), 'holder-lp'
    if isinstance(norm, LorentzNorm):
        # ||x|| >= ||x||_inf (w_1 = 1) and ||x|| >= w_n^(1/p) ||x||_p
        candidates = [(lp_eval(1, g), 'lorentz-sup')]
        w_n = norm.weights_for(g.n)[g.n - 1]
        candidates.append((_dual_lp(norm.p, g) / root(w_n, norm.p), 'lorentz-weighted-lp'))
        return min(candidates, key=lambda c: c[0])
    if isinstance(norm, BlockTNorm):
        params = norm.params
        candidates = [(lp_eval(params.r_conj, g), 'holder-flat-r')]
        block_duals = [
            lp_eval(params.p_conj, CoeffVec(tuple(g[j] for j in range(lo, hi + 1)))) / params.alpha[i - 1]
            for i, lo, hi in params.block_ranges(g.n)
        ]
        candidates.append((lp_eval(params.r_conj, CoeffVec(tuple(block_duals))), 'holder-blockwise'))
        return min(candidates, key=lambda c: c[0])
    if isinstance(norm, SymmetricHullNorm):
        params = norm.params
        candidates = [(lp_eval(params.r_conj, g), 'holder-flat-r')]
        support = len(g.support())
        g_dual = lp_eval(params.p_conj, g)
        for i, k in enumerate(params.k, start=1):
            if k >= support:
                candidates.append((g_dual / params.alpha[i - 1], f'holder-block-{i}'))
        return min(candidates, key=lambda c: c[0])
    raise UnsupportedBaseError(f"no dual certificate for {norm.spec_string()}")


def equal_runs(g: CoeffVec):
    """Maximal runs [lo, hi] on which g is constant."""
    runs, lo = [], 1
    for i in range(2, g.n + 1):
        if g[i] != g[i - 1]:
            runs.append((lo, i - 1))
            lo = i
    runs.append((lo, g.n))
    return runs


def james_upper_certificate(base: NormSpec, g: CoeffVec):
    """If g is constant (c_b) on every block of a partition P, then <g, x> = <c, representative(x, P)>,
    so sup <g, x>/||x||_J is bounded by the base dual bound of c placed at the block starts."""
    if g.is_zero():
        return mpf(0), 'zero'
    values = [mpf(0)] * g.n
    for lo, _ in equal_runs(g):
        values[lo - 1] = g[lo]
    value, name = base_upper_certificate(base, CoeffVec(tuple(values)))
    return value, f'james-runs/{name}'


def _as_space(norm) -> Space:
    return norm if isinstance(norm, Space) else Space(norm)


def primal_evaluator(space: Space):
    if space.james:
        return lambda x: james_norm(JamesVec(x, space.base))
    return space.base


def _canonical_starts(space: Space, g: CoeffVec):
    n = g.n
    starts = [('sign', CoeffVec(tuple(mpf(mpmath.sign(a)) for a in g)))]
    exponent = None
    if isinstance(space.base, LpNorm) and space.base.p > 1:
        exponent = conjugate(space.base.p) - 1
    elif isinstance(space.base, (BlockTNorm, SymmetricHullNorm)):
        exponent = space.base.params.p_conj - 1
    if exponent is not None:
        starts.append(('holder-map', CoeffVec(tuple(mpmath.sign(a) * pow_abs(a, exponent) for a in g))))
    starts.append(('constant', CoeffVec.ones(n)))
    starts.extend((f'coordinate-{i}', CoeffVec.unit(i, n)) for i in range(1, n + 1))
    if space.james:
        # u_1 + ... + u_m realizes S-type functionals
        starts.extend((f'head-{m}', CoeffVec.of([1] * m + [0] * (n - m))) for m in range(1, n))
    return starts


def dual_bounds(norm, f: Functional, budget=None, seed=0, starts=None) -> DualBound:
    """Lower bound by ascent over the primal unit sphere; upper bound from the applicable relaxations."""
    space = _as_space(norm)
    budget = setting('search.budget', 2000) if budget is None else budget
    if budget <= 0:
        raise BudgetError(f"dual bound needs a positive budget, got {budget}")
    starts = setting('search.starts', 64) if starts is None else starts
    if f.s_coeff != 0 and not space.james:
        raise LabError("the summing functional S needs a James space")
    g = f.effective()
    n = g.n

    if space.james:
        upper, certificate = james_upper_certificate(space.base, g)
    else:
        upper, certificate = base_upper_certificate(space.base, f.coeffs)
    if g.is_zero():
        return DualBound(mpf(0), mpf(0), CoeffVec.unit(1, n), 'zero', 'zero', 0)

    evaluate = primal_evaluator(space)

    def objective(x):
        norm_x = evaluate(x)
        if norm_x == 0:
            return None
        return mpmath.fsum(gi * xi for gi, xi in zip(g, x)) / norm_x

    candidates = _canonical_starts(space, g)
    small = n <= setting('search.ascent_dim', 16)
    if small:
        for index in range(max(starts - len(candidates), 0)):
            candidates.append((f'random-{index}', CoeffVec(tuple(gaussian_vector(substream(seed, index), n)))))
    search = RatioSearch(objective, budget, normalize=evaluate)
    result = search.run(candidates, ascend=small)

    norm_w = evaluate(result.witness)
    witness = result.witness.scaled(1 / norm_w)
    lower = pair(f, _lift(space, witness)) / evaluate(witness)
    if lower > upper and not close(lower, upper):
        logger.error(f"dual lower bound {lower} exceeds certificate {certificate} = {upper}")
    logger.info(f"dual bounds on {space.spec_string()}: [{mpmath.nstr(lower, 12)}, {mpmath.nstr(upper, 12)}] "
                f"({certificate}, lower from {result.label})")
    return DualBound(lower, upper, witness, certificate, result.label, result.evaluations)


def _lift(space: Space, x: CoeffVec):
    return JamesVec(x, space.base) if space.james else x
