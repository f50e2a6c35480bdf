import json
import logging
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from typing import Any, Dict, List, Optional

import mpmath
import pandas as pd

from src.seqcore.vectors import CoeffVec, CountVec
from src.seqcore.partitions import IntervalPartition, GapSelection

logger = logging.getLogger(__name__)

HEADLINE_DIGITS = 30


def to_json_value(value):
    """Converts lab values (mpf, Fraction, vectors, partitions) into JSON-ready data."""
    if isinstance(value, mpmath.mpf):
        return float(value)
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    if isinstance(value, CoeffVec):
        return [float(a) for a in value]
    if isinstance(value, CountVec):
        return [{'value': float(g.value), 'count': g.multiplicity, 'block': g.block}
                for g in value.groups if g.multiplicity]
    if isinstance(value, IntervalPartition):
        return list(value.starts)
    if isinstance(value, GapSelection):
        return [list(pair) for pair in value.pairs]
    if hasattr(value, 'to_dict'):
        return to_json_value(value.to_dict())
    if isinstance(value, dict):
        return {str(k): to_json_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_json_value(v) for v in value]
    return value


@dataclass
class Assertion:
    name: str
    passed: bool
    lhs: Any = None
    rhs: Any = None
    margin: Any = None
    witness: Any = None

    def to_dict(self):
        data = {
            'name': self.name,
            'pass': bool(self.passed),
            'lhs': to_json_value(self.lhs),
            'rhs': to_json_value(self.rhs),
            'margin': to_json_value(self.margin),
            'witness': to_json_value(self.witness),
        }
        if isinstance(self.lhs, mpmath.mpf):
            data['lhs_digits'] = mpmath.nstr(self.lhs, HEADLINE_DIGITS)
        return data


@dataclass
class Report:
    """Structured result of one verification run."""
    suite: str
    config: Dict[str, Any] = field(default_factory=dict)
    assertions: List[Assertion] = field(default_factory=list)
    summary: Dict[str, Any] = field(default_factory=dict)
    tables: Dict[str, List[Dict[str, Any]]] = field(default_factory=dict)

    def check(self, name, passed, lhs=None, rhs=None, margin=None, witness=None):
        assertion = Assertion(name, bool(passed), lhs, rhs, margin, witness)
        self.assertions.append(assertion)
        if not assertion.passed:
            logger.warning(f"[{self.suite}] assertion failed: {name} (lhs={lhs}, rhs={rhs})")
        return assertion

    def add_row(self, table, **row):
        self.tables.setdefault(table, []).append(row)

    @property
    def passed(self):
        return all(a.passed for a in self.assertions)

    def failures(self):
        return [a for a in self.assertions if not a.passed]

    def to_dict(self):
        summary = dict(self.summary)
        summary.setdefault('assertions', len(self.assertions))
        summary.setdefault('failed', len(self.failures()))
        summary.setdefault('pass', self.passed)
        return {
            'suite': self.suite,
            'config': to_json_value(self.config),
            'assertions': [a.to_dict() for a in self.assertions],
            'summary': to_json_value(summary),
            'tables': to_json_value(self.tables),
        }


def render_json(body, timestamp: Optional[datetime] = None):
    """Deterministic body (sorted keys) plus a trailing generated_at field."""
    data = dict(body)
    data['generated_at'] = (timestamp or datetime.now(timezone.utc)).isoformat()
    return json.dumps(data, sort_keys=True, indent=2)


def render_csv(report: Report):
    """Flat tables (one block per table) for external plotting."""
    chunks = []
    for name, rows in sorted(report.tables.items()):
        frame = pd.DataFrame([to_json_value(row) for row in rows])
        frame.insert(0, 'table', name)
        chunks.append(frame.to_csv(index=False))
    if not chunks:
        frame = pd.DataFrame([
            {'name': a.name, 'pass': a.passed, 'lhs': to_json_value(a.lhs),
             'rhs': to_json_value(a.rhs), 'margin': to_json_value(a.margin)}
            for a in report.assertions
        ])
        chunks.append(frame.to_csv(index=False))
    return '\n'.join(chunks)
