from fractions import Fraction

import mpmath
import pytest
from mpmath import mpf

from src.construction.calc_lemma import (
    calc_window, calc_instance, calc_lemma_max, calc_lemma_probe, calc_vertices,
)
from src.construction.certify import (
    Monomial, integer_root, rational_power, compare_monomials, certified_leq,
)
from src.construction.example_norms import (
    ones_norm, example_growth_suite, sqrt_nk_lower_bound, dual_ones_upper, dual_ones_upper_bound,
    dual_nondomination_report, alpha_identity_holds, admissible_block,
)
from src.construction.k_sequence import (
    generate_k_sequence, extend_k_sequence, check_feasibility, minimality_report, size_condition,
    decay_exponent,
)
from src.norms.params import ConstructionParams
from src.norms.symmetric_hull import symmetric_hull_eval
from src.seqcore.vectors import CoeffVec
from src.utils.errors import InadmissibleInstanceError, InfeasibleRegimeError, InsufficientParamsError
from src.utils.precision import close, leq

K3 = 27 * 3359235 ** 4


def params(*k):
    return ConstructionParams(Fraction(3, 2), Fraction(4), tuple(k))


def test_integer_roots():
    assert integer_root(648 ** 3, 3) == 648
    assert integer_root(647, 2) is None
    assert integer_root(0, 5) == 0
    assert rational_power(Fraction(27, 8), Fraction(2, 3)) == Fraction(9, 4)
    assert rational_power(Fraction(2), Fraction(1, 2)) is None


def test_monomial_canonical_form():
    m = Monomial.of(3, [(2, Fraction(3, 4)), (1, 5), (2, Fraction(1, 4)), (7, 0)])
    assert m == Monomial.of(3, [(2, 1)])
    assert m.exact() == 6
    assert (m * m.inverse()).exact() == 1


def test_exact_monomial_comparison():
    assert compare_monomials(Monomial.of(1, [(648, Fraction(1, 4))]),
                             Monomial.of(3, [(2, Fraction(3, 4))])) == 0
    assert compare_monomials(Monomial.of(1, [(647, Fraction(1, 4))]),
                             Monomial.of(3, [(2, Fraction(3, 4))])) == -1


def test_certified_leq_margins():
    equal = certified_leq([Monomial.of(3, [(2, Fraction(3, 4))])], [Monomial.of(1, [(648, Fraction(1, 4))])])
    assert equal.holds and equal.equal and equal.exact
    assert equal.margin == 0
    irrational = certified_leq([Monomial.of(1, [(2, Fraction(1, 2))]), Monomial.of(1, [(3, Fraction(1, 2))])],
                               [Monomial.of(1, [(10, Fraction(1, 2))])])
    assert irrational.holds is True and not irrational.exact
    assert irrational.margin > 0
    wrong = certified_leq([Monomial.of(1, [(2, Fraction(1, 2))]), Monomial.of(1, [(3, Fraction(1, 2))])],
                          [Monomial.of(1, [(9, Fraction(1, 2))])])
    assert wrong.holds is False


def test_preset_is_feasible_with_zero_margin(preset):
    report = check_feasibility(preset)
    assert report.passed
    size_2 = next(a for a in report.assertions if a.name == 'size_condition[n=2]')
    assert size_2.margin == 0
    assert size_2.witness == {'exact': True, 'equal': True}


def test_smaller_second_block_fails():
    report = check_feasibility(params(1, 647))
    assert not report.passed
    assert [a.name for a in report.failures()] == ['size_condition[n=2]']


def test_single_block_is_feasible():
    assert check_feasibility(params(1)).passed
    assert size_condition(Fraction(3, 2), Fraction(4), [1], 1).equal


def test_preset_is_minimal(preset):
    assert minimality_report(preset).passed


def test_generate_k_sequence():
    assert generate_k_sequence(Fraction(3, 2), Fraction(4), 1).k == (1,)
    assert generate_k_sequence(Fraction(3, 2), Fraction(4), 2).k == (1, 648)
    three = generate_k_sequence(Fraction(3, 2), Fraction(4), 3)
    assert three.k == (1, 648, K3)
    assert check_feasibility(three).passed


def test_extend_k_sequence(preset):
    extended = extend_k_sequence(preset, 3)
    assert extended.k == (1, 648, K3)
    assert extended.precision_bits == preset.precision_bits
    assert extend_k_sequence(preset, 2) is preset
    assert extend_k_sequence(params(1), 2).k == (1, 648)


def test_generate_other_regime():
    generated = generate_k_sequence(Fraction(7, 4), Fraction(3), 2)
    assert generated.k == (1, 3 ** 8 * 2 ** 7)
    assert check_feasibility(generated).passed
    assert minimality_report(generated).passed


def test_generate_rejects_bad_regime():
    with pytest.raises(InfeasibleRegimeError):
        generate_k_sequence(Fraction(5, 2), Fraction(4), 2)
    with pytest.raises(InfeasibleRegimeError):
        generate_k_sequence(Fraction(3, 2), Fraction(4), 0)


def test_decay_exponent():
    assert decay_exponent(Fraction(3, 2), Fraction(4)) == Fraction(2, 3)


def test_calc_windows(preset):
    assert calc_window(preset, 1) == (0, 1)
    assert calc_window(preset, 2) == (2, 3)
    assert calc_window(params(1, 648, K3), 3) == (3359234, 3359235)
    with pytest.raises(InsufficientParamsError):
        calc_window(preset, 3)


def test_calc_lemma_max(preset):
    result = calc_lemma_max(preset, calc_instance(preset, 2, 3))
    expected = 1 + 4 * mpf(2) ** (mpf(8) / 3) / mpf(648) ** (mpf(2) / 3)
    assert close(result.value, expected)
    assert result.maximizer == (1, 2)
    assert result.bound == mpf('3.5')
    assert result.holds


def test_calc_lemma_vertices(preset):
    assert sorted(calc_vertices(preset, 2, 3)) == [(0, 3), (1, 2)]


def test_calc_lemma_rejects_inadmissible(preset):
    instance = calc_instance(preset, 2, 4)
    assert not instance.admissible
    with pytest.raises(InadmissibleInstanceError):
        calc_lemma_max(preset, instance)
    with pytest.raises(InadmissibleInstanceError):
        calc_lemma_probe(preset, instance)


def test_calc_probe_stays_below_vertex_max(preset):
    instance = calc_instance(preset, 2, 3)
    vertex = calc_lemma_max(preset, instance).value
    probe = calc_lemma_probe(preset, instance, starts=3, steps=20, seed=4)
    assert leq(probe.value, vertex)
    assert probe.evaluations <= 60


def test_calc_lemma_on_three_blocks():
    three = params(1, 648, K3)
    for j in calc_window(three, 3):
        assert calc_lemma_max(three, calc_instance(three, 3, j)).holds


def test_ones_norm(preset):
    assert close(ones_norm(preset, 648).value, mpf(36))
    assert ones_norm(preset, 648).counts == (0, 648)
    assert close(ones_norm(preset, 3).value, mpf(3) ** (mpf(1) / 4))
    assert ones_norm(preset, 0).value == 0


@pytest.mark.parametrize('k, largest', [((2, 3), 5), ((3, 5), 8)])
def test_ones_norm_matches_exact_hull(k, largest):
    synthetic = ConstructionParams(Fraction(3, 2), Fraction(4), k, synthetic=True)
    for j in range(1, largest + 1):
        exact = symmetric_hull_eval(synthetic, CoeffVec.ones(j), mode='exact', cap=largest).value
        assert close(ones_norm(synthetic, j).value, exact)


def test_ones_norm_is_non_decreasing(preset):
    values = [ones_norm(preset, j).value for j in range(preset.total + 1)]
    assert all(leq(a, b) for a, b in zip(values, values[1:]))


def test_growth_suite(preset):
    report = example_growth_suite(preset, [0, 1, 2, 3, 648])
    assert report.passed
    rows = {row['j']: row for row in report.tables['growth']}
    assert rows['648']['window'] is None
    assert 'growth[j=648]' not in [a.name for a in report.assertions]
    assert 'tail[j=1,i=2]' in [a.name for a in report.assertions]


def test_admissible_block():
    assert admissible_block([(0, 1), (2, 3)], 3) == 2
    assert admissible_block([(0, 1), (2, 3)], 5) is None


def test_sqrt_nk_bound(preset):
    report = sqrt_nk_lower_bound(preset, 2)
    assert report.passed
    assert report.summary['equality']


def test_dual_ones(preset):
    assert close(dual_ones_upper(preset, 2), mpf(18))
    report = dual_ones_upper_bound(preset, 2)
    assert report.passed
    assert close(report.summary['lower'], mpf(18))
    with pytest.raises(InsufficientParamsError):
        dual_ones_upper_bound(preset, 3)


def test_dual_nondomination(preset):
    report = dual_nondomination_report(preset, 2)
    assert report.passed
    ratios = {row['n']: row['ratio'] for row in report.tables['checkpoint_ratio']}
    assert close(ratios[2], mpf(2))


def test_alpha_identity(preset):
    results = alpha_identity_holds(preset)
    assert len(results) == 2
    assert all(r.symbolic and r.numeric for r in results)
