from fractions import Fraction

import mpmath
import pytest
from mpmath import mpf

from src.domination.estimators import (
    domination_constant_lb, domination_profile, right_dominance_profile, pair_equivalence_report,
    pair_vectors,
)
from src.norms.base import LpNorm, BlockTNorm
from src.norms.spec_parser import Space
from src.seqcore.vectors import CoeffVec
from src.utils.errors import CapExceededError, LabError
from src.utils.precision import close, leq

L1 = Space(LpNorm(Fraction(1)))
L2 = Space(LpNorm(Fraction(2)))


@pytest.mark.parametrize('dim', [1, 2, 3, 4, 5, 6])
def test_l2_to_l1_constant_is_sqrt_dim(dim):
    report = domination_constant_lb(L2, L1, dim, budget=200, seed=7)
    assert close(report.constant_lb, mpmath.sqrt(dim), '1e-20')
    assert close(L1.base(report.witness) / L2.base(report.witness), report.constant_lb)


def test_l1_to_l2_constant_is_one():
    report = domination_constant_lb(L1, L2, 4, budget=300, seed=0)
    assert close(report.constant_lb, mpf(1))


def test_profile_is_monotone():
    reports = domination_profile(L2, L1, [3, 1, 2, 4], budget=150, seed=1)
    assert [r.dim for r in reports] == [1, 2, 3, 4]
    for previous, current in zip(reports, reports[1:]):
        assert leq(previous.constant_lb, current.constant_lb)


def test_domination_is_reproducible():
    first = domination_constant_lb(L2, Space(LpNorm(Fraction(3, 2))), 3, budget=150, seed=5)
    second = domination_constant_lb(L2, Space(LpNorm(Fraction(3, 2))), 3, budget=150, seed=5)
    assert first.constant_lb == second.constant_lb
    assert first.witness == second.witness


def test_domination_needs_positive_dim():
    with pytest.raises(LabError):
        domination_constant_lb(L2, L1, 0)


def test_right_dominance_symmetric_base_is_exactly_one():
    report = right_dominance_profile(LpNorm(Fraction(2)), 4, samples=20, seed=3)
    assert report.exhaustive
    assert report.ratios_all_one
    assert report.worst_ratio == 1


def test_right_dominance_block_t_norm(preset):
    report = right_dominance_profile(BlockTNorm(preset), 4, samples=10, seed=0)
    assert mpmath.isfinite(report.worst_ratio)
    assert report.worst_ratio >= 1
    assert report.cases == 2 * 33 + 10


def test_pair_vectors():
    james, plain = pair_vectors(CoeffVec.of([1, 2]))
    assert james.to_list() == [1, -1, 2, -2]
    assert plain.to_list() == [0, 1, 0, 2]


def test_pair_equivalence_l2():
    one = pair_equivalence_report(LpNorm(Fraction(2)), 1, samples=0)
    assert close(one.c_low, mpmath.sqrt(2)) and close(one.c_high, mpmath.sqrt(2))
    two = pair_equivalence_report(LpNorm(Fraction(2)), 2, samples=0)
    assert close(two.c_low, mpmath.sqrt(2))
    assert close(two.c_high, mpmath.sqrt(3))
    assert two.argmax.to_list() == [1, -1]


def test_pair_equivalence_bounded_with_samples():
    report = pair_equivalence_report(LpNorm(Fraction(2)), 3, samples=10, seed=2)
    assert 0 < report.c_low <= report.c_high
    assert report.samples == 4 + 10


def test_pair_equivalence_cap():
    with pytest.raises(CapExceededError):
        pair_equivalence_report(LpNorm(Fraction(2)), 6)
