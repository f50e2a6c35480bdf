import glob
import json
import os
from datetime import datetime, timezone
from fractions import Fraction

import yaml
from mpmath import mpf

from src.reporting.report import Report, Assertion, render_json, render_csv, to_json_value
from src.seqcore.partitions import IntervalPartition, GapSelection
from src.seqcore.vectors import CoeffVec, CountVec
from src.utils.config_loader import ConfigLoader, setting

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
STAMP = datetime(2024, 1, 1, tzinfo=timezone.utc)


def test_to_json_value():
    assert to_json_value(mpf(1) / 4) == 0.25
    assert to_json_value(Fraction(3, 2)) == '3/2'
    assert to_json_value(Fraction(4)) == '4'
    assert to_json_value(CoeffVec.of([1, 2])) == [1.0, 2.0]
    assert to_json_value(IntervalPartition.from_starts([1, 3], 4)) == [1, 3]
    assert to_json_value(GapSelection(((1, 2),))) == [[1, 2]]
    assert to_json_value(CountVec.of([(1, 0, 1), (2, 3, 2)])) == [{'value': 2.0, 'count': 3, 'block': 2}]
    assert to_json_value({'a': (mpf(1), None)}) == {'a': [1.0, None]}


def test_assertion_digits():
    data = Assertion('x', True, mpf(2), mpf(3), mpf(1)).to_dict()
    assert data['pass'] is True
    assert data['lhs_digits'].startswith('2.0')
    assert 'lhs_digits' not in Assertion('y', False, 1, 2).to_dict()


def test_report_pass_and_summary():
    report = Report('demo', config={'seed': 1})
    report.check('ok', True, mpf(1), mpf(2), mpf(1))
    assert report.passed
    report.check('bad', False, mpf(3), mpf(2), mpf(-1))
    assert not report.passed
    assert [a.name for a in report.failures()] == ['bad']
    body = report.to_dict()
    assert body['summary'] == {'assertions': 2, 'failed': 1, 'pass': False}
    assert body['assertions'][1]['margin'] == -1.0


def test_render_json_is_deterministic_apart_from_timestamp():
    report = Report('demo', config={'b': 1, 'a': Fraction(1, 3)})
    report.check('ok', True, mpf(1))
    first = render_json(report.to_dict(), STAMP)
    second = render_json(report.to_dict(), STAMP)
    assert first == second
    data = json.loads(first)
    assert data['generated_at'] == STAMP.isoformat()
    assert data['config'] == {'a': '1/3', 'b': 1}
    assert list(data) == sorted(data)


def test_render_csv_tables_and_fallback():
    report = Report('growth')
    report.add_row('growth', j='1', norm=mpf(1), bound=mpf(1))
    report.add_row('growth', j='2', norm=mpf(2), bound=mpf(2))
    text = render_csv(report)
    assert text.splitlines()[0] == 'table,j,norm,bound'
    assert len(text.strip().splitlines()) == 3

    plain = Report('demo')
    plain.check('ok', True, mpf(1), mpf(2), mpf(1))
    assert render_csv(plain).splitlines()[0] == 'name,pass,lhs,rhs,margin'


def test_config_defaults_and_overrides():
    assert setting('caps.partition') == 20
    assert setting('precision.bits') == 128
    assert setting('no.such.key', 'fallback') == 'fallback'
    ConfigLoader().override('caps.partition', 5)
    assert setting('caps.partition') == 5
    assert ConfigLoader().get_config()['caps']['partition'] == 5
    assert ConfigLoader().get_overrides() == {'caps.partition': 5}


def test_config_placeholders(tmp_path, monkeypatch):
    path = tmp_path / 'lab.yaml'
    path.write_text(
        "precision:\n  bits: ${LAB_TEST_BITS}\n"
        "search:\n  starts: ${LAB_TEST_MISSING}\n  budget: ${LAB_TEST_MISSING:-50}\n"
        "paths:\n  preset: ${LAB_TEST_DIR}/preset.json\n"
    )
    monkeypatch.setenv('JAMES_LAB_CONFIG', str(path))
    monkeypatch.setenv('LAB_TEST_BITS', '96')
    monkeypatch.setenv('LAB_TEST_DIR', '/data/presets')
    monkeypatch.delenv('LAB_TEST_MISSING', raising=False)
    loader = ConfigLoader()
    try:
        loader.reload()
        assert loader.config_path == str(path)
        assert setting('precision.bits') == 96
        assert setting('search.starts') == '${LAB_TEST_MISSING}'
        assert setting('search.budget') == 50
        assert setting('paths.preset') == '/data/presets/preset.json'
    finally:
        monkeypatch.delenv('JAMES_LAB_CONFIG')
        loader.reload()
    assert setting('precision.bits') == 128


def _leaf_keys(node, prefix=''):
    for key, value in node.items():
        path = f"{prefix}{key}"
        if isinstance(value, dict):
            yield from _leaf_keys(value, path + '.')
        else:
            yield path


def test_every_configured_key_is_read():
    with open(os.path.join(ROOT, 'config', 'lab.yaml')) as f:
        config = yaml.safe_load(f)
    paths = glob.glob(os.path.join(ROOT, 'src', '**', '*.py'), recursive=True) + [os.path.join(ROOT, 'main.py')]
    sources = []
    for path in paths:
        with open(path) as f:
            sources.append(f.read())
    code = '\n'.join(sources)
    unread = [key for key in _leaf_keys(config) if f"'{key}'" not in code]
    assert unread == []
