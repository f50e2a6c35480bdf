import json

import pytest
from mpmath import mpf

from src.utils.errors import LabError
from src.utils.precision import close
from src.verification.suites import SuiteOptions, run_suite, SUITES, RUNNERS


def test_every_suite_has_a_runner():
    assert set(SUITES) == set(RUNNERS)
    with pytest.raises(LabError):
        run_suite('nope', SuiteOptions())


def test_calc_lemma_suite():
    report = run_suite('calc-lemma', SuiteOptions(l=2))
    assert report.passed
    assert close(report.summary['l=2']['max'], 1 + 4 * mpf(2) ** (mpf(8) / 3) / mpf(648) ** (mpf(2) / 3))


def test_calc_lemma_suite_extends_to_the_configured_length():
    report = run_suite('calc-lemma', SuiteOptions())
    assert report.passed
    assert report.config['params_resolved']['k'] == ['1', '648', str(27 * 3359235 ** 4)]
    assert report.summary['l=3']['window'] == ['3359234', '3359235']
    assert 'calc[l=3,j=3359235]' in {a.name for a in report.assertions}


def test_feasibility_suite():
    report = run_suite('feasibility', SuiteOptions())
    assert report.passed
    assert {'minimal[n=1]', 'minimal[n=2]'} <= {a.name for a in report.assertions}
    assert {'alpha_identity[n=1]', 'alpha_identity[n=2]'} <= {a.name for a in report.assertions}
    assert len(report.tables['minimality']) == 2


def test_feasibility_suite_rejects_a_block_that_is_not_least(tmp_path):
    path = tmp_path / 'loose.json'
    path.write_text(json.dumps({'p': '3/2', 'r': '4', 'k': ['1', '649']}))
    report = run_suite('feasibility', SuiteOptions(params=str(path)))
    assert not report.passed
    assert [a.name for a in report.failures()] == ['minimal[n=2]']


@pytest.mark.parametrize('base', ['lp:p=2', 'lp:3/2', 'blockt:preset'])
def test_norm_lemma_suite(base):
    report = run_suite('norm-lemma', SuiteOptions(base=base, samples=4, seed=42))
    assert report.passed
    assert report.summary['c_max'] >= 1


def test_growth_suite():
    report = run_suite('growth', SuiteOptions())
    assert report.passed
    assert report.summary['windows'] == [[0, 1], [2, 3]]


@pytest.mark.slow
def test_duality_suite():
    report = run_suite('duality', SuiteOptions(samples=2, seed=1, dim=4))
    assert report.passed
    names = {a.name for a in report.assertions}
    assert 'james_S_tight' in names
    assert 'nondomination/ratio_at_k[n=2]' in names


def test_equivalence_suite():
    report = run_suite('equivalence', SuiteOptions(m=2, samples=3))
    assert report.passed
    rows = report.tables['equivalence']
    assert close(rows[0]['c_low'], rows[0]['c_high'])


def test_right_dominance_suites():
    symmetric = run_suite('right-dominance', SuiteOptions(base='lp:p=2', dim=4, samples=5))
    assert symmetric.passed
    assert symmetric.assertions[0].name == 'symmetric_ratio_exactly_1'
    block = run_suite('right-dominance', SuiteOptions(dim=4, samples=5))
    assert block.passed
    assert block.summary['exhaustive']


def test_upper_p_suite():
    report = run_suite('upper-p', SuiteOptions(samples=5, seed=2))
    assert report.passed
    assert report.summary['worst_constant'] <= 1 + mpf('1e-20')
    failing = run_suite('upper-p', SuiteOptions(base='lp:p=2', p='3', samples=3))
    assert not failing.passed
    with pytest.raises(LabError):
        run_suite('upper-p', SuiteOptions(base='james:lp:2'))
