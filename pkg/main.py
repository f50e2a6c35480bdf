import argparse
import logging
import os
import sys
from dataclasses import dataclass, field, asdict
from typing import Optional

# Add the src directory to the Python path
sys.path.insert(0, os.path.abspath(os.path.dirname(__file__)))

from src.utils.config_loader import ConfigLoader
from src.utils.errors import LabError, CapExceededError
from src.utils.precision import configure_precision, to_mpf, digits
from src.construction.k_sequence import generate_k_sequence
from src.domination.estimators import domination_constant_lb, domination_profile
from src.duality.bounds import dual_bounds
from src.duality.functionals import Functional, lp_dual_eval, l1_dual_eval
from src.james.james_norm import JamesVec, james_norm, james_norm_exhaustive
from src.norms.base import LpNorm
from src.norms.spec_parser import parse_space, parse_rational, dump_params
from src.norms.symmetric_hull import SymmetricHullNorm, symmetric_hull_eval, symmetric_hull_ones
from src.reporting.report import Report, render_json, render_csv, to_json_value
from src.scheduler.suite_runner import SuiteRunner
from src.seqcore.vectors import CoeffVec
from src.verification.suites import SuiteOptions, SUITES

logger = logging.getLogger(__name__)

config_loader = ConfigLoader()

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass
class RunConfig:
    """Everything that determines a report; echoed back inside it."""
    command: str
    flags: dict = field(default_factory=dict)
    seed: Optional[int] = None
    precision_bits: int = 128
    caps: dict = field(default_factory=dict)
    output: Optional[str] = None

    def to_dict(self):
        return to_json_value(asdict(self))


class UsageError(LabError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_coeffs(text):
    try:
        return CoeffVec(tuple(to_mpf(part.strip()) for part in text.split(',') if part.strip()))
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(f"could not parse coefficients {text!r}: {e}")


def _ones(j):
    cap = config_loader.get_setting('caps.explicit_vector', 100000)
    if j > cap:
        raise CapExceededError("explicit ones vector", j, cap)
    return CoeffVec.ones(j)


def cmd_norm(args):
    space = parse_space(args.space)
    if (args.coeffs is None) == (args.ones is None):
        raise UsageError("give exactly one of --coeffs or --ones")
    if args.ones is not None and args.ones < 0:
        raise UsageError("--ones needs j >= 0")
    if isinstance(space.base, SymmetricHullNorm) and not space.james:
        if args.ones is not None:
            result = symmetric_hull_ones(space.base.params, args.ones)
        else:
            result = symmetric_hull_eval(space.base.params, parse_coeffs(args.coeffs), space.base.mode)
        body = {'value': result.value, 'value_digits': digits(result.value)}
        if args.witness:
            body['assignment'] = result.to_dict()['assignment']
            body['mode'] = result.mode
        return body, None
    coeffs = _ones(args.ones) if args.ones is not None else parse_coeffs(args.coeffs)
    if space.james:
        x = JamesVec(coeffs, space.base)
        if args.witness:
            result = james_norm_exhaustive(x)
            return {'value': result.value, 'value_digits': digits(result.value),
                    'partition': result.partition}, None
        value = james_norm(x)
    else:
        value = space.base(coeffs)
    return {'value': value, 'value_digits': digits(value)}, None


def cmd_verify(args):
    options = SuiteOptions(
        params=args.params, base=args.base, l=args.l, samples=args.samples, seed=args.seed,
        dim=args.dim, m=args.m, p=args.p,
    )
    runner = SuiteRunner(args.precision_bits, args.workers, config_loader.get_overrides())
    reports = runner.run(args.suites, options)
    for report in reports:
        report.config['runner'] = runner.get_runner_info()
    return None, reports


def cmd_construct(args):
    L = args.L if args.L is not None else config_loader.get_setting('construction.default_L', 3)
    params = generate_k_sequence(parse_rational(args.p), parse_rational(args.r), L, args.precision_bits)
    if args.out:
        dump_params(params, args.out)
    return {'params': params.to_dict(), 'out': args.out}, None


def cmd_dominate(args):
    source, target = parse_space(getattr(args, 'from')), parse_space(args.to)
    if args.profile:
        reports = domination_profile(source, target, range(1, args.dim + 1), args.budget, args.seed)
        return {'profile': [r.to_dict() for r in reports]}, None
    report = domination_constant_lb(source, target, args.dim, args.budget, args.seed)
    body = report.to_dict()
    body['constant_lb_digits'] = digits(report.constant_lb)
    return body, None


def parse_functional(text, dim):
    text = text.strip()
    if text.upper() == 'S':
        if not dim:
            raise UsageError("--functional S needs --dim")
        return Functional.summing(dim)
    coeffs = parse_coeffs(text)
    if dim and dim > coeffs.n:
        coeffs = coeffs.padded(dim)
    return Functional(coeffs)


def cmd_dual(args):
    space = parse_space(args.space)
    f = parse_functional(args.functional, args.dim)
    if not space.james and isinstance(space.base, LpNorm) and f.s_coeff == 0:
        value = l1_dual_eval(f) if space.base.p == 1 else lp_dual_eval(space.base.p, f)
        return {'value': value, 'value_digits': digits(value)}, None
    bound = dual_bounds(space, f, args.budget, args.seed)
    return bound.to_dict(), None


COMMANDS = {
    'norm': cmd_norm,
    'verify': cmd_verify,
    'construct': cmd_construct,
    'dominate': cmd_dominate,
    'dual': cmd_dual,
}


def build_parser():
    parser = _Parser(description="james-lab: James-type sequence space norms, duals and certified estimates")
    parser.add_argument('--csv', action='store_true', help="Write report tables as CSV instead of JSON")
    parser.add_argument('--output', help="Write the report to this file instead of stdout")
    parser.add_argument('--verbose', action='store_true', help="Debug logging")
    parser.add_argument('--precision-bits', type=int, default=None, help="mpmath working precision")
    sub = parser.add_subparsers(dest='command', parser_class=_Parser)
    sub.required = True

    norm = sub.add_parser('norm', help="Evaluate a norm")
    norm.add_argument('--space', required=True)
    norm.add_argument('--coeffs')
    norm.add_argument('--ones', type=int)
    norm.add_argument('--witness', action='store_true')

    verify = sub.add_parser('verify', help="Run verification suites")
    verify.add_argument('suites', nargs='+', metavar='suite', help=f"one or more of {', '.join(SUITES)}")
    verify.add_argument('--params')
    verify.add_argument('--base')
    verify.add_argument('--l', type=int)
    verify.add_argument('--samples', type=int)
    verify.add_argument('--seed', type=int, default=0)
    verify.add_argument('--dim', type=int)
    verify.add_argument('--m', type=int)
    verify.add_argument('--p')
    verify.add_argument('--workers', type=int, default=0)

    construct = sub.add_parser('construct', help="Generate a minimal k-sequence")
    construct.add_argument('--p', required=True)
    construct.add_argument('--r', required=True)
    construct.add_argument('--L', type=int)
    construct.add_argument('--out')

    dominate = sub.add_parser('dominate', help="Lower-bound a domination constant")
    dominate.add_argument('--from', required=True)
    dominate.add_argument('--to', required=True)
    dominate.add_argument('--dim', type=int, required=True)
    dominate.add_argument('--seed', type=int, required=True)
    dominate.add_argument('--budget', type=int)
    dominate.add_argument('--profile', action='store_true', help="Every dim from 1 up to --dim")

    dual = sub.add_parser('dual', help="Bound a dual norm")
    dual.add_argument('--space', required=True)
    dual.add_argument('--functional', required=True, help="S or comma-separated coefficients")
    dual.add_argument('--dim', type=int)
    dual.add_argument('--seed', type=int, default=0)
    dual.add_argument('--budget', type=int)
    return parser


def run_config(args):
    flags = {k: v for k, v in vars(args).items() if k not in ('command', 'csv', 'output', 'verbose')}
    return RunConfig(
        command=args.command,
        flags=flags,
        seed=getattr(args, 'seed', None),
        precision_bits=args.precision_bits,
        caps=config_loader.get_config().get('caps', {}),
        output=args.output,
    )


def _render(args, config, body, reports):
    if reports is None:
        if args.csv:
            report = Report(args.command, config=config.to_dict())
            values = to_json_value(body)
            report.add_row(args.command, **{k: v for k, v in values.items() if not isinstance(v, (list, dict))})
            return render_csv(report)
        return render_json({'command': args.command, 'config': config.to_dict(), 'result': to_json_value(body)})
    for report in reports:
        report.config['run'] = config.to_dict()
    if args.csv:
        return '\n'.join(render_csv(report) for report in reports)
    if len(reports) == 1:
        return render_json(reports[0].to_dict())
    return render_json({'reports': [report.to_dict() for report in reports],
                        'pass': all(report.passed for report in reports)})


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format='%(asctime)s - %(levelname)s - %(message)s', stream=sys.stderr)
    args.precision_bits = configure_precision(args.precision_bits)
    config = run_config(args)
    try:
        body, reports = COMMANDS[args.command](args)
        text = _render(args, config, body, reports)
        if args.output:
            with open(args.output, 'w') as f:
                f.write(text + '\n')
            logger.info(f"Report written to {args.output}")
        else:
            print(text)
    except (LabError, OSError) as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    if reports is not None and not all(report.passed for report in reports):
        failed = sum(len(report.failures()) for report in reports)
        logger.warning(f"{failed} assertion(s) failed")
        return EXIT_FAIL
    return EXIT_PASS


if __name__ == "__main__":
    sys.exit(main())
