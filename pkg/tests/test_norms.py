from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mpf

from src.norms.base import (
    LpNorm, LorentzNorm, BlockTNorm, lp_eval, lorentz_eval, harmonic_weights, sup_norm_eval,
    t_norm_eval, t_norm_eval_counts,
)
from src.norms.estimates import check_upper_p_estimate
from src.norms.params import ConstructionParams
from src.norms.spec_parser import (
    parse_norm_spec, parse_space, parse_rational, load_params, dump_params, params_from_dict,
)
from src.norms.symmetric_hull import SymmetricHullNorm, symmetric_hull_eval, symmetric_hull_ones
from src.seqcore.vectors import CoeffVec, CountVec
from src.utils.errors import (
    ConfigError, InfeasibleRegimeError, InsufficientParamsError, SpecParseError, CapExceededError,
)
from src.utils.precision import close, leq, configure_precision

entries = st.integers(min_value=-20, max_value=20).map(lambda x: mpf(x) / 4)


def vector_pairs(max_size):
    return st.lists(st.tuples(entries, entries), min_size=1, max_size=max_size).map(
        lambda rows: (CoeffVec(tuple(a for a, _ in rows)), CoeffVec(tuple(b for _, b in rows))))


def synthetic_params():
    return ConstructionParams(Fraction(3, 2), Fraction(4), (2, 3), synthetic=True)


def test_lp_examples():
    assert lp_eval(2, CoeffVec.of([3, 4])) == 5
    assert lp_eval(1, CoeffVec.of([3, -4])) == 7
    assert sup_norm_eval(CoeffVec.of([3, -4])) == 4
    assert lp_eval(Fraction(3, 2), CoeffVec.zeros(3)) == 0


def test_lorentz_examples():
    v = CoeffVec.of([1, 1])
    assert close(lorentz_eval(harmonic_weights(2), 2, v), mpmath.sqrt(mpf(3) / 2))
    norm = parse_norm_spec('lorentz:w=1;1/2;1/4,p=2')
    assert close(norm(CoeffVec.of([0, 2, 1])), mpmath.sqrt(4 + mpf(1) / 2))
    with pytest.raises(ConfigError):
        norm(CoeffVec.ones(4))
    with pytest.raises(ConfigError):
        LorentzNorm(2, weights=(mpf(1) / 2, mpf(1) / 4))
    with pytest.raises(ConfigError):
        LorentzNorm(2, weights=(1, mpf(1) / 4, mpf(1) / 2))


def test_block_t_norm_on_preset(preset):
    ones = CountVec.of([(1, 648, 2)])
    assert close(t_norm_eval_counts(preset, ones), mpf(36))
    assert close(t_norm_eval(preset, ones.expand(preset.k)), mpf(36))
    assert close(t_norm_eval(preset, CoeffVec.unit(2, 2)), mpf(1))
    with pytest.raises(InsufficientParamsError):
        t_norm_eval(preset, CoeffVec.ones(650))


def test_alpha_values(preset):
    assert preset.alpha[0] == 1
    assert close(preset.alpha[1] ** 4, mpf(4) / mpmath.cbrt(mpf(648)) ** 2)


def test_alpha_follows_working_precision():
    params = ConstructionParams(Fraction(3, 2), Fraction(4), (1, 648))
    coarse = params.alpha[1]
    configure_precision(256)
    fine = params.alpha[1]
    assert abs(fine - 1 / mpmath.cbrt(mpf(9))) < mpf(2) ** -240
    assert abs(coarse - fine) < mpf(2) ** -100
    assert params.alpha[1] is fine


def test_block_ranges(preset):
    assert preset.block_ranges(1) == [(1, 1, 1)]
    assert preset.block_ranges(3) == [(1, 1, 1), (2, 2, 3)]
    assert preset.block_ranges(649) == [(1, 1, 1), (2, 2, 649)]
    with pytest.raises(InsufficientParamsError):
        preset.block_ranges(650)


def test_regime_checks():
    with pytest.raises(InfeasibleRegimeError):
        ConstructionParams(Fraction(2), Fraction(4), (1,))
    with pytest.raises(InfeasibleRegimeError):
        ConstructionParams(Fraction(5, 4), Fraction(4), (1,))
    with pytest.raises(InfeasibleRegimeError):
        ConstructionParams(Fraction(3, 2), Fraction(2), (1,))


def test_symmetric_hull_ones(preset):
    assert close(symmetric_hull_ones(preset, 648).value, mpf(36))
    assert close(symmetric_hull_ones(preset, 3).value, mpf(3) ** (mpf(1) / 4))
    assert close(symmetric_hull_eval(preset, CoeffVec.ones(3)).value, mpf(3) ** (mpf(1) / 4))
    assert symmetric_hull_ones(preset, 0).value == 0


def test_symmetric_hull_capacity():
    with pytest.raises(InsufficientParamsError):
        symmetric_hull_eval(synthetic_params(), CoeffVec.ones(6))
    with pytest.raises(CapExceededError):
        symmetric_hull_eval(synthetic_params(), CoeffVec.of([1, 2]), mode='exact', cap=1)


@settings(max_examples=40, deadline=None)
@given(st.lists(entries, min_size=1, max_size=5))
def test_hull_dp_matches_exact_for_two_blocks(values):
    params = synthetic_params()
    v = CoeffVec(tuple(values))
    exact = symmetric_hull_eval(params, v, mode='exact').value
    dp = symmetric_hull_eval(params, v, mode='dp').value
    assert close(exact, dp)


@settings(max_examples=30, deadline=None)
@given(st.lists(entries, min_size=1, max_size=5))
def test_hull_dominates_block_t_norm(preset, values):
    v = CoeffVec(tuple(values))
    assert leq(t_norm_eval(preset, v), symmetric_hull_eval(preset, v).value)


@settings(max_examples=30, deadline=None)
@given(st.lists(entries, min_size=1, max_size=6), st.data())
def test_exact_hull_is_permutation_invariant(values, data):
    params = ConstructionParams(Fraction(3, 2), Fraction(4), (2, 4), synthetic=True)
    shuffled = data.draw(st.permutations(values))
    exact = symmetric_hull_eval(params, CoeffVec(tuple(values)), mode='exact').value
    assert close(symmetric_hull_eval(params, CoeffVec(tuple(shuffled)), mode='exact').value, exact)


@pytest.mark.parametrize('spec', ['lp:2', 'lp:3/2', 'lorentz:w=harmonic,p=2', 'blockt:preset',
                                  'symhull:blockt:preset'])
@settings(max_examples=25, deadline=None)
@given(values=st.lists(entries, min_size=1, max_size=6), data=st.data())
def test_base_norms_ignore_signs(spec, values, data):
    norm = parse_norm_spec(spec)
    signs = data.draw(st.lists(st.sampled_from([1, -1]), min_size=len(values), max_size=len(values)))
    flipped = CoeffVec(tuple(s * a for s, a in zip(signs, values)))
    assert close(norm(flipped), norm(CoeffVec(tuple(values))))


@settings(max_examples=30, deadline=None)
@given(st.one_of(st.none(), entries),
       st.lists(st.tuples(entries, st.integers(min_value=1, max_value=5)), max_size=4))
def test_count_form_matches_expanded_vector(preset, first, rest):
    triples = ([] if first is None else [(first, 1, 1)]) + [(value, count, 2) for value, count in rest]
    c = CountVec.of(triples)
    assert close(t_norm_eval_counts(preset, c), t_norm_eval(preset, c.expand(preset.k)))


@pytest.mark.parametrize('spec', ['lp:2', 'lp:p=3/2', 'lorentz:w=harmonic,p=2', 'blockt:preset',
                                  'symhull:blockt:preset'])
@settings(max_examples=25, deadline=None)
@given(pair=vector_pairs(5), scale=entries)
def test_norm_axioms(spec, pair, scale):
    norm = parse_norm_spec(spec)
    x, y = pair
    assert norm(x) >= 0
    assert leq(norm(x.plus(y)), norm(x) + norm(y))
    assert close(norm(x.scaled(scale)), abs(scale) * norm(x))


def test_parse_norm_specs(preset):
    assert parse_norm_spec('lp:2') == LpNorm(Fraction(2))
    assert parse_norm_spec('lp:p=3/2').p == Fraction(3, 2)
    assert parse_norm_spec('lorentz:w=harmonic,p=2').scheme == 'harmonic'
    blockt = parse_norm_spec('blockt:preset')
    assert isinstance(blockt, BlockTNorm)
    assert blockt.params == preset
    hull = parse_norm_spec('symhull[dp]:blockt:params=preset.json')
    assert isinstance(hull, SymmetricHullNorm) and hull.mode == 'dp'
    space = parse_space('james:lp:p=2')
    assert space.james and space.base == LpNorm(Fraction(2))
    assert not parse_space('lp:2').james


@pytest.mark.parametrize('text', ['lq:2', 'lp:', 'lp:p=1.5', 'lorentz:p=2', 'symhull:lp:2', 'blockt:'])
def test_parse_errors(text):
    with pytest.raises(SpecParseError):
        parse_norm_spec(text)


def test_parse_rational():
    assert parse_rational('3/2') == Fraction(3, 2)
    assert parse_rational(' 4 ') == 4
    with pytest.raises(SpecParseError):
        parse_rational('1.5')
    with pytest.raises(SpecParseError):
        parse_rational('1/0')


def test_params_file_round_trip(tmp_path, preset):
    path = tmp_path / 'params.json'
    dump_params(preset, str(path))
    assert load_params(str(path)) == preset
    with pytest.raises(SpecParseError):
        load_params(str(tmp_path / 'missing.json'))
    with pytest.raises(SpecParseError):
        params_from_dict({'p': '3/2', 'r': '4'})


def test_upper_p_estimate_holds_for_block_t_norm(preset):
    report = check_upper_p_estimate(BlockTNorm(preset), preset.p, trials=10, seed=3)
    assert report.passed
    assert report.summary['worst_constant'] <= 1 + mpf('1e-20')


def test_upper_p_estimate_fails_above_the_lattice_exponent():
    report = check_upper_p_estimate(LpNorm(Fraction(2)), Fraction(3), trials=5, seed=0)
    assert not report.passed
    assert report.summary['worst_constant'] > 1
