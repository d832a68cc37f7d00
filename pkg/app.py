"""
Command-line front end for the local epsilon_0 engine

    python app.py compute --field padic:p=3 --char '{"cond": 1, "unit_exps": [1]}'
    python app.py verify --suite formulary --seed 20240601 --jobs 4
    python app.py table --field padic:p=3 --cond 2 --out table.csv
    python app.py swan --p 3 --n 2
    python app.py reduce --field padic:p=3 --char '{"cond": 1, "unit_exps": [1]}' --l 7

Exit codes: 0 ok, 1 verification failure, 2 usage or parse error,
3 internal invariant violation.
"""
import argparse
import json
import logging
import sys
import traceback
from fractions import Fraction

import numpy as np
import pandas as pd

from utils.characters import character_family
from utils.cyclotomic import CycNum, cyc_is_unit, cyc_norm, cyc_to_json
from utils.epsilon import epsilon0_char, epsilon0_virtual, epsilon_full
from utils.errors import InvariantViolation, JobSpecError
from utils.finite_field import FinFieldElem
from utils.job_spec import build_job, parse_cyc
from utils.local_field import unit_group
from utils.reduction import reduction_commutes
from utils.swan import (
    artin_character, builtin_cyclotomic_filtration, conductor_pairing, group_characters,
    load_filtration, local_character, quotient_filtration, swan_character,
)
from utils.verification import SUITES, run_suite, write_report
from utils.virtual_rep import vr_artin_conductor, vr_rank, vr_swan

logger = logging.getLogger(__name__)

CONFIG = {
    'TABLE_MAX_ROWS': 2000,
    'DEFAULT_SEED': 20240601,
    'REDUCTION_PRIMES': [2, 5, 7, 11, 13],
    'DEFAULT_TWIST_PRECISION': 6,
    'FIXTURE_DIR': 'data/filtrations',
    'DEFAULT_JOBS': 1,
    'FORMULARY_CASES': 200,
}

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3

TABLE_COLUMNS = ['field', 'cond', 'pi_value', 'unit_exps', 'n_psi', 'vol', 'value', 'norm']


def convert_to_json_serializable(obj):
    """Convert engine and numpy types to native Python types for JSON output"""
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    elif isinstance(obj, (np.integer, int)):
        return int(obj)
    elif isinstance(obj, Fraction):
        return str(obj)
    elif isinstance(obj, CycNum):
        record = cyc_to_json(obj)
        record['text'] = str(obj)
        return record
    elif isinstance(obj, FinFieldElem):
        return obj.to_json()
    elif isinstance(obj, np.ndarray):
        return obj.tolist()
    elif isinstance(obj, dict):
        return {key: convert_to_json_serializable(value) for key, value in obj.items()}
    elif isinstance(obj, (list, tuple)):
        return [convert_to_json_serializable(item) for item in obj]
    return obj


def emit(record, out=None):
    text = json.dumps(convert_to_json_serializable(record), indent=2, ensure_ascii=False)
    if out:
        with open(out, 'w', encoding='utf-8') as handle:
            handle.write(text + '\n')
    else:
        print(text)


# ----------------------------
# Subcommands
# ----------------------------
def cmd_compute(args):
    job = build_job(args, CONFIG['DEFAULT_TWIST_PRECISION'])
    rep = job.representation()
    if job.char is not None:
        result = epsilon0_char(job.char, job.psi, job.dx)
        group = unit_group(job.field, job.char.conductor)
        extra = {
            'gamma_valuation': result.context['gamma_valuation'],
            'coset_level': result.context['coset_level'],
            'generators': [list(g) for g in group.generators],
            'orders': list(group.orders),
        }
    else:
        result = epsilon0_virtual(rep, job.psi, job.dx)
        extra = {'terms': len(rep.terms)}
    record = {
        'field': str(job.field),
        'value': result.value,
        'text': str(result.value),
        'level': result.level,
        'norm': result.norm,
        'is_unit': result.certified_unit,
        'epsilon_full': epsilon_full(rep, job.psi, job.dx),
        'n_psi': job.psi.level,
        'rank': vr_rank(rep),
        'swan': vr_swan(rep),
        'artin_conductor': vr_artin_conductor(rep),
    }
    record.update(extra)
    emit(record, args.out)
    return EXIT_OK


def cmd_verify(args):
    names = list(SUITES) if args.suite == 'all' else [s.strip() for s in args.suite.split(',')]
    for name in names:
        if name not in SUITES:
            raise JobSpecError('suite', f"unknown suite {name!r}; expected one of "
                                        f"{', '.join(SUITES)} or all")
    reports = [run_suite(name, args.seed, args.jobs, CONFIG) for name in names]
    if args.out:
        write_report(reports, args.out)
    summary = []
    for report in reports:
        entry = {k: v for k, v in report.items() if k != 'rows'}
        entry['failures'] = [row for row in report['rows'] if not row['pass']]
        summary.append(entry)
    emit(summary)
    return EXIT_FAILED if any(report['failed'] for report in reports) else EXIT_OK


def build_table(job, conductor, pi_value):
    """
    epsilon_0 of every character of (O/pi^conductor)^x with chi(pi) = pi_value

    Returns:
        DataFrame with TABLE_COLUMNS
    """
    group = unit_group(job.field, conductor)
    if group.order > CONFIG['TABLE_MAX_ROWS']:
        raise JobSpecError('cond', f"family has {group.order} characters, more than the cap "
                                   f"of {CONFIG['TABLE_MAX_ROWS']}")
    rows = []
    for chi in character_family(job.field, conductor, pi_value):
        value = epsilon0_char(chi, job.psi, job.dx).value
        if not cyc_is_unit(value):
            raise InvariantViolation(f"table value {value} for {chi} is not a unit")
        rows.append({
            'field': str(job.field),
            'cond': chi.conductor,
            'pi_value': str(chi.pi_value),
            'unit_exps': ' '.join(str(e) for e in chi.unit_exps),
            'n_psi': job.psi.level,
            'vol': str(job.dx.volume),
            'value': str(value),
            'norm': str(cyc_norm(value)),
        })
    return pd.DataFrame(rows, columns=TABLE_COLUMNS)


def cmd_table(args):
    job = build_job(args, CONFIG['DEFAULT_TWIST_PRECISION'])
    if args.cond < 0:
        raise JobSpecError('cond', "conductor must be nonnegative")
    pi_value = parse_cyc('pi-value', args.pi_value, job.field.p)
    frame = build_table(job, args.cond, pi_value)
    logger.info("table with %d rows", len(frame))
    if args.out:
        frame.to_csv(args.out, index=False)
    else:
        sys.stdout.write(frame.to_csv(index=False))
    return EXIT_OK


def cmd_swan(args):
    if args.fixture:
        try:
            filtration = load_filtration(args.fixture)
        except (OSError, KeyError, json.JSONDecodeError) as e:
            raise JobSpecError('fixture', f"cannot load {args.fixture} ({e})") from None
        n = None
    else:
        if args.p is None or args.n is None:
            raise JobSpecError('p', "give --fixture or both --p and --n")
        filtration = builtin_cyclotomic_filtration(args.p, args.n)
        n = args.n
    if args.kernel:
        try:
            kernel = [int(h) for h in args.kernel.split(',')]
        except ValueError:
            raise JobSpecError('kernel', f"expected comma-separated element indices, got {args.kernel!r}") from None
        filtration = quotient_filtration(filtration, kernel)
        n = None
    characters = []
    for chi in group_characters(filtration.group):
        entry = {
            'order': chi.order,
            'exponents': list(chi.exponents),
            'artin': conductor_pairing(filtration, chi, 'artin'),
            'swan': conductor_pairing(filtration, chi, 'swan'),
        }
        if n is not None:
            local = local_character(filtration, chi, n)
            entry['local_conductor'] = local.conductor
            entry['local_swan'] = local.swan
        characters.append(entry)
    record = {
        'filtration': filtration.to_json(),
        'artin_character': [str(v) for v in artin_character(filtration).values],
        'swan_character': [str(v) for v in swan_character(filtration).values],
        'characters': characters,
    }
    emit(record, args.out)
    return EXIT_OK


def cmd_reduce(args):
    job = build_job(args, CONFIG['DEFAULT_TWIST_PRECISION'])
    if job.char is None:
        raise JobSpecError('char', "reduce works on a single character of the base field (--char)")
    modulus = None
    if args.modulus:
        try:
            modulus = tuple(int(c) for c in args.modulus.split(','))
        except ValueError:
            raise JobSpecError('modulus', f"expected comma-separated coefficients, got {args.modulus!r}") from None
    result = reduction_commutes(job.char, job.psi, job.dx, args.l, modulus)
    emit(result, args.out)
    return EXIT_OK if result['pass'] else EXIT_FAILED


# ----------------------------
# Argument parsing
# ----------------------------
def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--verbose', action='store_true', help='debug logging on stderr')
    common.add_argument('--out', help='write the result to a file instead of stdout')

    job = argparse.ArgumentParser(add_help=False)
    job.add_argument('--field', required=True, help='e.g. padic:p=3 or laurent:p=2,f=2')
    job.add_argument('--char', help='character JSON {cond, pi_value, unit_exps[, field]}')
    job.add_argument('--rep', help='representation JSON [{coef, char}, ...]')
    job.add_argument('--psi-twist', help='psi = a*psi_0 with a = u, u*pi^k, pi^k or KElement JSON '
                     '{"valuation", "unit": [coords], "precision"} (default 1)')
    job.add_argument('--vol', help='vol(O_K) as a rational or coefficient JSON (default 1)')

    parser = argparse.ArgumentParser(description='Exact local epsilon_0 factors')
    sub = parser.add_subparsers(dest='command', required=True)

    compute = sub.add_parser('compute', parents=[common, job], help='epsilon_0 and epsilon')
    compute.set_defaults(handler=cmd_compute)

    verify = sub.add_parser('verify', parents=[common], help='run verification suites')
    verify.add_argument('--suite', default='all', help=f"{', '.join(SUITES)} or all")
    verify.add_argument('--seed', type=int, default=CONFIG['DEFAULT_SEED'])
    verify.add_argument('--jobs', type=int, default=CONFIG['DEFAULT_JOBS'])
    verify.set_defaults(handler=cmd_verify)

    table = sub.add_parser('table', parents=[common, job], help='CSV of a character family')
    table.add_argument('--cond', type=int, default=1)
    table.add_argument('--pi-value', default='1')
    table.set_defaults(handler=cmd_table)

    swan = sub.add_parser('swan', parents=[common], help='Artin/Swan characters of a filtration')
    swan.add_argument('--p', type=int)
    swan.add_argument('--n', type=int)
    swan.add_argument('--fixture', help=f"fixture file (relative to {CONFIG['FIXTURE_DIR']})")
    swan.add_argument('--kernel', help='comma-separated element indices of a normal subgroup')
    swan.set_defaults(handler=cmd_swan)

    reduction = sub.add_parser('reduce', parents=[common, job], help='epsilon_0 modulo l')
    reduction.add_argument('--l', type=int, required=True)
    reduction.add_argument('--modulus', help='factor of Phi_N mod l, highest degree first')
    reduction.set_defaults(handler=cmd_reduce)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
                        stream=sys.stderr)
    try:
        return args.handler(args)
    except InvariantViolation as e:
        logger.debug(traceback.format_exc())
        emit({'error': str(e)})
        return EXIT_INTERNAL
    except (ValueError, ZeroDivisionError) as e:
        logger.debug(traceback.format_exc())
        emit({'error': str(e)})
        return EXIT_USAGE
    except Exception as e:
        logger.error("unexpected error: %s", e)
        logger.debug(traceback.format_exc())
        emit({'error': f'An error occurred: {str(e)}'})
        return EXIT_INTERNAL


if __name__ == '__main__':
    sys.exit(main())
