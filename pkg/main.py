"""
ybe: command line surface for finite set-theoretic Yang-Baxter solutions.

All output is JSON on stdout; ``--pretty`` indents it.
"""

import argparse
import json
import sys

from app.config import Config
from app.exceptions import SolutionParseError, YBEError
from app.services import corpus, solution_core
from app.services.logger import get_logger

logger = get_logger(__name__)


def _emit(payload, pretty):
    if pretty:
        text = json.dumps(payload, sort_keys=True, indent=2)
    else:
        text = json.dumps(payload, sort_keys=True, separators=(',', ':'))
    sys.stdout.write(text + '\n')


def _load(path, pretty):
    try:
        return corpus.load_solution(path), 0
    except SolutionParseError as e:
        _emit(e.to_dict(), pretty)
        return None, 2
    except OSError as e:
        _emit({'error': 'FileError', 'message': str(e)}, pretty)
        return None, 2


def cmd_validate(args):
    sol, code = _load(args.file, args.pretty)
    if sol is None:
        return code
    flags = solution_core.validate_ybe(sol)
    _emit({'solution': sol.label, 'flags': flags.to_dict()}, args.pretty)
    return 0 if flags.is_ybe and flags.bijective and flags.left_nd else 1


def cmd_analyze(args):
    sol, code = _load(args.file, args.pretty)
    if sol is None:
        return code
    report = corpus.analyze(
        sol,
        max_degree=args.max_degree,
        characteristics=Config.characteristics(args.char),
        i_max=args.imax,
        k_max=args.kmax,
    )
    _emit(report, args.pretty)
    return 1 if any(error['stage'] == 'validate' for error in report['errors']) else 0


def cmd_enumerate(args):
    try:
        lambda_family = json.loads(args.lambda_family) if args.lambda_family else None
        solutions = list(solution_core.enumerate_solutions(args.n, args.filter, lambda_family=lambda_family))
    except json.JSONDecodeError as e:
        _emit(SolutionParseError(f"invalid --lambda JSON: {e.msg}", location=f"column {e.colno}").to_dict(), args.pretty)
        return 2
    except YBEError as e:
        _emit(e.to_dict(), args.pretty)
        return 1
    index = corpus.write_corpus(solutions, args.out, args.n, args.filter)
    _emit(index, args.pretty)
    return 0


def cmd_sweep(args):
    from app.tasks.sweep_tasks import sweep

    solutions = corpus.load_corpus(args.dir)
    _emit(sweep(args.suite, solutions), args.pretty)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog='ybe', description='Finite set-theoretic Yang-Baxter solutions')
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--pretty', action='store_true', help='indent JSON output')
    subparsers = parser.add_subparsers(dest='command', required=True)

    validate = subparsers.add_parser('validate', parents=[common], help='check the YBE and the basic properties')
    validate.add_argument('file')
    validate.set_defaults(func=cmd_validate)

    analyze = subparsers.add_parser('analyze', parents=[common], help='full analysis report')
    analyze.add_argument('file')
    analyze.add_argument('--max-degree', type=int, default=Config.YBE_MAX_DEGREE)
    analyze.add_argument('--char', default=Config.YBE_CHARACTERISTICS, help='comma separated characteristics')
    analyze.add_argument('--imax', type=int, default=Config.YBE_IMAX)
    analyze.add_argument('--kmax', type=int, default=Config.YBE_KMAX)
    analyze.set_defaults(func=cmd_analyze)

    enumerate_ = subparsers.add_parser('enumerate', parents=[common], help='write a corpus of solutions up to isomorphism')
    enumerate_.add_argument('--n', type=int, required=True)
    enumerate_.add_argument('--filter', default=solution_core.EnumerationFilter.ALL.value,
                            choices=[f.value for f in solution_core.EnumerationFilter])
    enumerate_.add_argument('--lambda', dest='lambda_family', help='JSON list of lambda rows for the lambda filter')
    enumerate_.add_argument('--out', required=True)
    enumerate_.set_defaults(func=cmd_enumerate)

    sweep = subparsers.add_parser('sweep', parents=[common], help='run an invariant suite over a corpus')
    sweep.add_argument('dir')
    sweep.add_argument('--suite', required=True, choices=sorted(corpus.SUITES))
    sweep.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logger.debug(f"running {args.command}")
    return args.func(args)


if __name__ == '__main__':
    raise SystemExit(main())
