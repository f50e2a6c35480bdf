"""Block sizes (k_n) of the example space and their certified feasibility.

size condition (n <= L):   1 + 2 sum_{i<n} (i k_i)^(r/2) <= k_n^(1 - p/2) / n^(p/2)
decay condition (n < L):   ((n+1)/n)^(r/2) (k_n / k_{n+1})^((1/p - 1/p') r/2) <= 1/2
"""
import logging
from fractions import Fraction

import mpmath
from mpmath import mp, mpf

from src.construction.certify import Monomial, certified_leq, multiply
from src.norms.params import ConstructionParams, check_regime, conjugate
from src.reporting.report import Report
from src.utils.errors import InfeasibleRegimeError

logger = logging.getLogger(__name__)

GUARD_BITS = 64


def growth_sum_terms(p, r, k, n):
    """1 + 2 sum_{i<n} (i k_i)^(r/2) as a list of monomials."""
    terms = [Monomial.of(1)]
    terms.extend(Monomial.of(2, [(i * k[i - 1], r / 2)]) for i in range(1, n))
    return terms


def size_condition(p, r, k, n, k_n=None, bits=None):
    """Certified comparison for the size condition at block n (k_n may be a candidate value)."""
    k_n = k[n - 1] if k_n is None else k_n
    lhs = multiply(growth_sum_terms(p, r, k, n), Monomial.of(1, [(n, p / 2)]))
    rhs = [Monomial.of(1, [(k_n, 1 - p / 2)])]
    return certified_leq(lhs, rhs, bits)


def decay_exponent(p, r):
    """(1/p - 1/p') r/2, positive in the regime p < 2."""
    return (1 / p - 1 / conjugate(p)) * r / 2


def decay_condition(p, r, k_n, k_next, n, bits=None):
    """2 ((n+1)/n)^(r/2) k_n^c <= k_{n+1}^c."""
    c = decay_exponent(p, r)
    lhs = [Monomial.of(2, [(Fraction(n + 1, n), r / 2), (k_n, c)])]
    rhs = [Monomial.of(1, [(k_next, c)])]
    return certified_leq(lhs, rhs, bits)


def _least_integer(satisfied, estimate):
    """Least integer m >= 1 with satisfied(m), starting the search from a numeric estimate."""
    m = max(int(estimate), 1)
    while not satisfied(m):
        m += 1
    while m > 1 and satisfied(m - 1):
        m -= 1
    return m


def _size_estimate(p, r, k, n):
    """(lhs sum * n^(p/2))^(1/(1 - p/2)), computed with enough bits for the integer part."""
    terms = multiply(growth_sum_terms(p, r, k, n), Monomial.of(1, [(n, p / 2)]))
    with mp.workprec(GUARD_BITS):
        magnitude = mpmath.log(mpmath.fsum(t.to_mpf() for t in terms), 2) / (1 - p / 2)
    with mp.workprec(int(magnitude) + 2 * GUARD_BITS):
        target = mpmath.fsum(t.to_mpf() for t in terms)
        a = 1 - p / 2
        return mpmath.floor(mpmath.power(target, mpf(a.denominator) / a.numerator))


def _decay_estimate(p, r, k_prev, n_prev):
    c = decay_exponent(p, r)
    with mp.workprec(GUARD_BITS + k_prev.bit_length() * 2):
        ratio = mpmath.power(2 * mpmath.power(mpf(n_prev + 1) / n_prev, mpf(r.numerator) / (2 * r.denominator)),
                             mpf(c.denominator) / c.numerator)
        return mpmath.floor(ratio * k_prev)


def _next_block(p, r, k, n, precision_bits):
    """Least k_n after the prefix k = (k_1..k_{n-1})."""
    def satisfied(m):
        if not size_condition(p, r, k + [m], n, bits=precision_bits).holds:
            return False
        if n > 1 and not decay_condition(p, r, k[-1], m, n - 1, bits=precision_bits).holds:
            return False
        return True

    estimate = _size_estimate(p, r, k, n)
    if n > 1:
        estimate = max(estimate, _decay_estimate(p, r, k[-1], n - 1))
    k_n = _least_integer(satisfied, estimate)
    logger.info(f"k_{n} = {k_n} (p={p}, r={r})")
    return k_n


def generate_k_sequence(p, r, L, precision_bits=128) -> ConstructionParams:
    """Minimal k_1 < ... < k_L: each k_n is the least integer meeting the size condition at n and the
    decay condition linking it to k_{n-1}."""
    p, r = Fraction(p), Fraction(r)
    check_regime(p, r)
    if L < 1:
        raise InfeasibleRegimeError(f"need L >= 1 blocks, got {L}")
    k = []
    for n in range(1, L + 1):
        k.append(_next_block(p, r, k, n, precision_bits))
    return ConstructionParams(p, r, tuple(k), precision_bits)


def extend_k_sequence(params: ConstructionParams, L) -> ConstructionParams:
    """Appends least blocks after params.k until there are L; params with L or more blocks come back as is."""
    if params.L >= L:
        return params
    k = list(params.k)
    for n in range(params.L + 1, L + 1):
        k.append(_next_block(params.p, params.r, k, n, params.precision_bits))
    return params.with_k(k)


def check_feasibility(params: ConstructionParams) -> Report:
    """Every size and decay condition, certified, with margins (rhs - lhs; exactly 0 on equality)."""
    p, r, k = params.p, params.r, list(params.k)
    report = Report('feasibility', config={'params': params.to_dict()})
    with mp.workprec(params.precision_bits):
        for n in range(1, params.L + 1):
            outcome = size_condition(p, r, k, n, bits=params.precision_bits)
            report.check(f'size_condition[n={n}]', outcome.holds is True, outcome.lhs, outcome.rhs,
                         outcome.margin, {'exact': outcome.exact, 'equal': outcome.equal})
            report.add_row('conditions', condition='size', n=n, lhs=outcome.lhs, rhs=outcome.rhs,
                           margin=outcome.margin, exact=outcome.exact, holds=outcome.holds)
        for n in range(1, params.L):
            outcome = decay_condition(p, r, k[n - 1], k[n], n, bits=params.precision_bits)
            report.check(f'decay_condition[n={n}]', outcome.holds is True, outcome.lhs, outcome.rhs,
                         outcome.margin, {'exact': outcome.exact, 'equal': outcome.equal})
            report.add_row('conditions', condition='decay', n=n, lhs=outcome.lhs, rhs=outcome.rhs,
                           margin=outcome.margin, exact=outcome.exact, holds=outcome.holds)
    report.summary = {'L': params.L, 'synthetic': params.synthetic}
    if not report.passed:
        logger.warning(f"params k={params.k} fail {len(report.failures())} feasibility conditions")
    return report


def minimality_report(params: ConstructionParams) -> Report:
    """Each k_n > 1 fails some condition at k_n - 1 (given the earlier block sizes)."""
    p, r, k = params.p, params.r, list(params.k)
    report = Report('minimality', config={'params': params.to_dict()})
    for n in range(1, params.L + 1):
        if k[n - 1] == 1:
            report.check(f'minimal[n={n}]', True, 1, 1, 0)
            continue
        smaller = k[n - 1] - 1
        size_ok = size_condition(p, r, k, n, k_n=smaller, bits=params.precision_bits).holds is True
        decay_ok = n == 1 or decay_condition(p, r, k[n - 2], smaller, n - 1, bits=params.precision_bits).holds is True
        report.check(f'minimal[n={n}]', not (size_ok and decay_ok), smaller, k[n - 1], 1)
    return report
