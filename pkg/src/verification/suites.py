"""The verify suites. Each takes SuiteOptions and returns a Report; none of them raises on a failed
assertion."""
import logging
from dataclasses import dataclass, asdict
from typing import Optional

import mpmath
from mpmath import mpf

from src.construction.calc_lemma import calc_window, calc_instance, calc_lemma_max, calc_lemma_probe
from src.construction.example_norms import (
    example_growth_suite, sqrt_nk_lower_bound, dual_ones_upper_bound, dual_nondomination_report,
    alpha_identity_holds,
)
from src.construction.k_sequence import check_feasibility, extend_k_sequence, minimality_report
from src.domination.estimators import right_dominance_profile, pair_equivalence_report
from src.duality.bounds import dual_bounds, primal_evaluator
from src.duality.functionals import Functional, pair, lp_dual_eval
from src.james.block_lemma import BlockVector, norm_lemma_witness
from src.james.james_norm import JamesVec
from src.norms.base import LpNorm, BlockTNorm, LorentzNorm
from src.norms.estimates import check_upper_p_estimate
from src.norms.spec_parser import load_params, parse_norm_spec, parse_rational, Space
from src.norms.symmetric_hull import SymmetricHullNorm
from src.reporting.report import Report
from src.seqcore.vectors import CoeffVec
from src.utils.config_loader import setting
from src.utils.errors import LabError
from src.utils.precision import close, leq
from src.utils.sampling import substream, gaussian_vector, window_points

logger = logging.getLogger(__name__)

SUITES = ('calc-lemma', 'feasibility', 'norm-lemma', 'growth', 'duality', 'equivalence',
          'right-dominance', 'upper-p')


@dataclass(frozen=True)
class SuiteOptions:
    params: Optional[str] = None
    base: Optional[str] = None
    l: Optional[int] = None
    samples: Optional[int] = None
    seed: int = 0
    dim: Optional[int] = None
    m: Optional[int] = None
    p: Optional[str] = None

    def to_dict(self):
        return asdict(self)


def _params(options: SuiteOptions):
    return load_params(options.params or setting('paths.preset', 'config/presets/preset.json'))


def _samples(options: SuiteOptions, key='suites.samples', default=100):
    return setting(key, default) if options.samples is None else options.samples


def _base(options: SuiteOptions, default):
    return parse_norm_spec(options.base or default)


def _report(name, options, **extra):
    config = options.to_dict()
    config.update(extra)
    return Report(name, config=config)


def calc_lemma_suite(options: SuiteOptions) -> Report:
    params = extend_k_sequence(_params(options), setting('construction.default_L', 3))
    report = _report('calc-lemma', options, params_resolved=params.to_dict())
    levels = [options.l] if options.l else list(range(1, params.L + 1))
    per_window = setting('construction.window_samples', 100)
    for l in levels:
        lo, hi = calc_window(params, l)
        js = window_points(lo, hi, per_window)
        if hi - lo + 1 > per_window:
            logger.info(f"l={l}: window [{lo}, {hi}] sampled at {len(js)} points")
        worst = None
        for j in js:
            result = calc_lemma_max(params, calc_instance(params, l, j))
            report.check(f'calc[l={l},j={j}]', result.holds, result.value, result.bound,
                         result.bound - result.value, [str(x) for x in result.maximizer])
            report.add_row('calc', l=l, j=str(j), max=result.value, bound=result.bound)
            worst = result.value if worst is None else max(worst, result.value)
        for j in (window_points(lo, hi, 3) if l > 1 else []):
            instance = calc_instance(params, l, j)
            vertex = calc_lemma_max(params, instance).value
            probe = calc_lemma_probe(params, instance, seed=options.seed)
            report.check(f'probe[l={l},j={j}]', leq(probe.value, vertex), probe.value, vertex, vertex - probe.value)
        report.summary[f'l={l}'] = {'window': [str(lo), str(hi)], 'points': len(js), 'max': worst}
    return report


def feasibility_suite(options: SuiteOptions) -> Report:
    params = _params(options)
    report = check_feasibility(params)
    report.config.update(options.to_dict())
    for row in minimality_report(params).assertions:
        report.check(row.name, row.passed, row.lhs, row.rhs, row.margin)
        report.add_row('minimality', name=row.name, minimal=row.passed, smaller=row.lhs, k=row.rhs)
    for identity in alpha_identity_holds(params):
        report.check(f'alpha_identity[n={identity.n}]', identity.symbolic and identity.numeric,
                     witness=identity.to_dict())
    return report


def zero_sum_blocks(rng, max_length):
    """Consecutive zero-sum blocks of length >= 2 within [1, max_length], optionally after a gap."""
    offset = int(rng.integers(0, 2))
    blocks, start = [], 1 + offset
    count = int(rng.integers(1, 5))
    for _ in range(count):
        room = max_length - start + 1
        if room < 2:
            break
        size = int(rng.integers(2, min(room, 4) + 1))
        values = gaussian_vector(rng, size - 1)
        values.append(-mpmath.fsum(values))
        blocks.append(BlockVector(start, CoeffVec(tuple(values))))
        start += size
    return blocks


def norm_lemma_suite(options: SuiteOptions) -> Report:
    base = _base(options, 'lp:p=2')
    samples = _samples(options)
    max_length = setting('suites.max_length', 12)
    report = _report('norm-lemma', options, base_resolved=base.spec_string(), samples_resolved=samples)

    hand = norm_lemma_witness([BlockVector.of(1, [1, -1]), BlockVector.of(3, [1, -1])], base)
    report.check('hand_instance_blocks', hand.all_hold, witness=hand.to_dict())
    if isinstance(base, LpNorm) and base.p == 2:
        report.check('hand_instance_constant_is_1', close(hand.c_observed, mpf(1)), hand.c_observed, mpf(1),
                     hand.c_observed - 1)

    c_max = hand.c_observed
    for index in range(samples):
        blocks = zero_sum_blocks(substream(options.seed, index), max_length)
        if not blocks:
            continue
        witness = norm_lemma_witness(blocks, base)
        c_max = max(c_max, witness.c_observed)
        report.check(f'system[{index}]', witness.all_hold and mpmath.isfinite(witness.c_observed),
                     witness.c_observed, None, None, [c.to_dict() for c in witness.checks])
        report.add_row('systems', index=index, blocks=len(blocks), length=blocks[-1].end,
                       c_observed=witness.c_observed)
    report.summary = {'c_max': c_max}
    return report


def growth_suite(options: SuiteOptions) -> Report:
    params = _params(options)
    per_window = setting('construction.window_samples', 100)
    js = set(range(1, 4))
    for l in range(1, params.L + 1):
        lo, hi = calc_window(params, l)
        js.update(window_points(lo, hi, per_window))
        js.add(params.k[l - 1])
    report = example_growth_suite(params, sorted(js))
    report.config.update(options.to_dict())
    return report


def _merge(report: Report, part: Report, prefix):
    for a in part.assertions:
        report.check(f'{prefix}/{a.name}', a.passed, a.lhs, a.rhs, a.margin, a.witness)
    for name, rows in part.tables.items():
        for row in rows:
            report.add_row(f'{prefix}/{name}', **row)
    if part.summary:
        report.summary[prefix] = part.summary


def duality_suite(options: SuiteOptions) -> Report:
    params = _params(options)
    samples = _samples(options)
    report = _report('duality', options, params_resolved=params.to_dict())
    for n in range(1, params.L + 1):
        _merge(report, dual_ones_upper_bound(params, n), f'dual_ones[n={n}]')
        _merge(report, sqrt_nk_lower_bound(params, n), f'sqrt_nk[n={n}]')
    _merge(report, dual_nondomination_report(params, params.L), 'nondomination')

    base = _base(options, 'lp:p=2')
    dim = options.dim or 5
    james = Space(base, james=True)
    s_bound = dual_bounds(james, Functional.summing(dim), seed=options.seed)
    report.check('james_S_lower_le_upper', leq(s_bound.lower, s_bound.upper), s_bound.lower, s_bound.upper,
                 s_bound.upper - s_bound.lower, s_bound.to_dict())
    if isinstance(base, LpNorm):
        report.check('james_S_tight', s_bound.tight, s_bound.lower, s_bound.upper, s_bound.upper - s_bound.lower)

    evaluate = primal_evaluator(james)
    for index in range(samples):
        rng = substream(options.seed, index)
        f = Functional(CoeffVec(tuple(gaussian_vector(rng, dim))), mpf(int(rng.integers(-1, 2))))
        bound = dual_bounds(james, f, budget=200, seed=options.seed + index, starts=8)
        x = JamesVec(CoeffVec(tuple(gaussian_vector(rng, dim))), base)
        lhs, rhs = abs(pair(f, x)), bound.upper * evaluate(x.coeffs)
        report.check(f'pairing_bound[{index}]', leq(lhs, rhs) and leq(bound.lower, bound.upper), lhs, rhs, rhs - lhs)
        if isinstance(base, LpNorm) and base.p > 1 and f.s_coeff == 0:
            exact = lp_dual_eval(base.p, f)
            plain = dual_bounds(base, f, budget=200, seed=options.seed + index, starts=8)
            report.check(f'lp_dual_agreement[{index}]', close(plain.lower, exact, '1e-9') and close(plain.upper, exact),
                         plain.lower, exact, exact - plain.lower)
    return report


def equivalence_suite(options: SuiteOptions) -> Report:
    base = _base(options, 'lp:p=2')
    samples = _samples(options)
    report = _report('equivalence', options, base_resolved=base.spec_string())
    for m in range(1, (options.m or 3) + 1):
        result = pair_equivalence_report(base, m, samples=samples, seed=options.seed)
        report.check(f'bounded[m={m}]', 0 < result.c_low <= result.c_high and mpmath.isfinite(result.c_high),
                     result.c_low, result.c_high, result.c_high - result.c_low,
                     {'argmin': result.argmin, 'argmax': result.argmax})
        report.add_row('equivalence', m=m, c_low=result.c_low, c_high=result.c_high)
    return report


def right_dominance_suite(options: SuiteOptions) -> Report:
    norm = _base(options, 'blockt:preset')
    samples = _samples(options, 'suites.right_dominance_samples', 500)
    dim = options.dim or 8
    report = _report('right-dominance', options, norm_resolved=norm.spec_string())
    result = right_dominance_profile(norm, dim, samples, options.seed)
    if norm.symmetric:
        report.check('symmetric_ratio_exactly_1', result.ratios_all_one, result.worst_ratio, mpf(1),
                     mpf(1) - result.worst_ratio, result.to_dict())
    else:
        report.check('worst_ratio_finite', mpmath.isfinite(result.worst_ratio), result.worst_ratio, None, None,
                     result.to_dict())
    report.summary = {'worst_ratio': result.worst_ratio, 'cases': result.cases, 'exhaustive': result.exhaustive}
    return report


def _default_p(norm):
    if isinstance(norm, (BlockTNorm, SymmetricHullNorm)):
        return norm.params.p
    if isinstance(norm, (LpNorm, LorentzNorm)):
        return norm.p
    raise LabError(f"no default exponent for {norm.spec_string()}; pass --p")


def upper_p_suite(options: SuiteOptions) -> Report:
    norm = _base(options, 'blockt:preset')
    p = parse_rational(options.p) if options.p else _default_p(norm)
    trials = _samples(options, 'suites.upper_p_trials', 200)
    report = check_upper_p_estimate(norm, p, trials, options.seed)
    report.config.update(options.to_dict())
    return report


RUNNERS = {
    'calc-lemma': calc_lemma_suite,
    'feasibility': feasibility_suite,
    'norm-lemma': norm_lemma_suite,
    'growth': growth_suite,
    'duality': duality_suite,
    'equivalence': equivalence_suite,
    'right-dominance': right_dominance_suite,
    'upper-p': upper_p_suite,
}


def run_suite(name, options: SuiteOptions) -> Report:
    if name not in RUNNERS:
        raise LabError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    logger.info(f"Running suite '{name}' (seed={options.seed})")
    report = RUNNERS[name](options)
    logger.info(f"Suite '{name}' finished: {len(report.assertions)} assertions, "
                f"{len(report.failures())} failed")
    return report
