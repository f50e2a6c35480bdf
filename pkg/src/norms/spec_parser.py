"""Compact norm grammar used by the CLI, and the ConstructionParams JSON format.

    lp:p=2 | lp:2
    lorentz:w=harmonic,p=2 | lorentz:w=1;1/2;1/4,p=2
    blockt:params=<file> | blockt:preset
    symhull:blockt:params=<file> | symhull[dp]:blockt:...
    james:<any of the above>

ConstructionParams JSON: {"p": "3/2", "r": "4", "k": ["1", "648"], "precision_bits": 128}
"""
import json
import logging
import os
import re
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mpf

from src.norms.base import LpNorm, LorentzNorm, BlockTNorm, NormSpec
from src.norms.params import ConstructionParams
from src.norms.symmetric_hull import SymmetricHullNorm
from src.utils.config_loader import setting
from src.utils.errors import SpecParseError, LabError

logger = logging.getLogger(__name__)

PROJECT_ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), '..', '..'))

_RATIONAL = re.compile(r'^\s*-?\d+(\s*/\s*\d+)?\s*$')


def parse_rational(text) -> Fraction:
    """'3/2' or '4'; decimals are rejected to keep exponents exact."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if not isinstance(text, str) or not _RATIONAL.match(text):
        raise SpecParseError(f"expected an exact rational like '3/2', got {text!r}")
    try:
        return Fraction(text.replace(' ', ''))
    except ZeroDivisionError:
        raise SpecParseError(f"zero denominator in {text!r}")


def params_from_dict(data, source=None) -> ConstructionParams:
    try:
        p = parse_rational(data['p'])
        r = parse_rational(data['r'])
        k = [int(str(x)) for x in data['k']]
        bits = int(data.get('precision_bits', setting('precision.bits', 128)))
    except KeyError as e:
        raise SpecParseError(f"params {source or ''} missing field {e}")
    except (TypeError, ValueError) as e:
        if isinstance(e, LabError):
            raise
        raise SpecParseError(f"malformed params {source or ''}: {e}")
    return ConstructionParams(p, r, tuple(k), bits)


def resolve_params_path(path):
    """As given, else relative to the project root, else under config/presets."""
    candidates = [path]
    if not os.path.isabs(path):
        candidates += [os.path.join(PROJECT_ROOT, path), os.path.join(PROJECT_ROOT, 'config', 'presets', path)]
    for candidate in candidates:
        if os.path.isfile(candidate):
            return candidate
    return path


def load_params(path) -> ConstructionParams:
    try:
        with open(resolve_params_path(path), 'r') as f:
            data = json.load(f)
    except FileNotFoundError:
        raise SpecParseError(f"params file not found: {path}")
    except json.JSONDecodeError as e:
        raise SpecParseError(f"params file {path} is not valid JSON: {e}")
    params = params_from_dict(data, source=path)
    logger.info(f"Loaded construction params from {path}: p={params.p}, r={params.r}, L={params.L}")
    return params


def dump_params(params: ConstructionParams, path):
    with open(path, 'w') as f:
        json.dump(params.to_dict(), f, indent=2)
        f.write('\n')
    logger.info(f"Wrote construction params to {path}")


def _options(text):
    options = {}
    for part in text.split(','):
        if not part:
            continue
        if '=' not in part:
            options.setdefault('_positional', part)
            continue
        key, value = part.split('=', 1)
        options[key.strip()] = value.strip()
    return options


def _params_reference(rest):
    options = _options(rest)
    if options.get('_positional') == 'preset' or options.get('params') == 'preset':
        path = setting('paths.preset', 'config/presets/preset.json')
    elif 'params' in options:
        path = options['params']
    else:
        raise SpecParseError(f"blockt needs params=<file>, got {rest!r}")
    return load_params(path), path


def parse_norm_spec(text) -> NormSpec:
    text = text.strip()
    head, _, rest = text.partition(':')
    head = head.lower()
    if head == 'lp':
        options = _options(rest)
        p = options.get('p', options.get('_positional'))
        if p is None:
            raise SpecParseError(f"lp needs p, got {text!r}")
        return LpNorm(parse_rational(p))
    if head == 'lorentz':
        options = _options(rest)
        if 'p' not in options or 'w' not in options:
            raise SpecParseError(f"lorentz needs w= and p=, got {text!r}")
        p = parse_rational(options['p'])
        if options['w'] == 'harmonic':
            return LorentzNorm(p, scheme='harmonic')
        weights = [parse_rational(w) for w in options['w'].split(';')]
        return LorentzNorm(p, weights=tuple(mpf(w.numerator) / w.denominator for w in weights))
    if head == 'blockt':
        params, path = _params_reference(rest)
        return BlockTNorm(params, source=path)
    if head.startswith('symhull'):
        mode = 'auto'
        match = re.match(r'^symhull(\[(\w+)\])?$', head)
        if not match:
            raise SpecParseError(f"bad symhull head {head!r}")
        if match.group(2):
            mode = match.group(2)
        inner = parse_norm_spec(rest)
        if not isinstance(inner, BlockTNorm):
            raise SpecParseError("symhull must wrap a blockt norm")
        return SymmetricHullNorm(inner, mode)
    raise SpecParseError(f"unknown norm {head!r} in {text!r}")


@dataclass(frozen=True)
class Space:
    """A base norm, or the James space J(e_i) over it."""
    base: NormSpec
    james: bool = False

    def spec_string(self):
        return ('james:' if self.james else '') + self.base.spec_string()


def parse_space(text) -> Space:
    text = text.strip()
    if text.lower().startswith('james:'):
        return Space(parse_norm_spec(text[len('james:'):]), james=True)
    return Space(parse_norm_spec(text))
