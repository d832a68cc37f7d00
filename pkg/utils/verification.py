"""
Verification suites for the epsilon_0 engine
Each suite expands into a deterministic list of cases, runs them (optionally
on a thread pool) and aggregates per-check pass/fail rows in case order
"""
import json
import logging
import traceback
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import pandas as pd

from .characters import (
    HaarMeasure, addchar_compose_trace, addchar_standard, addchar_twist, character_family,
    mulchar_galois, mulchar_norm_inflate, standard_measure, trivial_character,
)
from .cyclotomic import cyc_galois, cyc_is_unit, cyc_norm, is_power_of
from .epsilon import (
    epsilon0_char, epsilon0_char_naive, epsilon0_twist_formula, epsilon0_virtual,
    explicit_inverse_check, twisted_directly,
)
from .local_field import LocalFieldSpec, k_element, unramified_extension
from .reduction import reduction_commutes
from .swan import (
    builtin_cyclotomic_filtration, conductor_pairing, group_characters, list_fixtures,
    load_filtration, local_character,
)
from .test_data import galois_multiplier, generate_rank_one_cases
from .virtual_rep import (
    char_rep, decompose_galois_invariant_induction, induced_regular, induced_rep, vr_det_at,
    vr_swan,
)

logger = logging.getLogger(__name__)

SUITES = ('formulary', 'induction', 'reduction', 'swan', 'units', 'oracle')

# Characters of conductor <= 3 on these fields form the oracle / reduction case list
ORACLE_FIELDS = (
    LocalFieldSpec('padic', 3, 1),
    LocalFieldSpec('padic', 5, 1),
    LocalFieldSpec('laurent', 2, 2),
)
ORACLE_MAX_CONDUCTOR = 3

# (base field, degree of L/K); chi_0 runs over conductors <= INDUCTION_MAX_CONDUCTOR
INDUCTION_CASES = (
    (LocalFieldSpec('padic', 3, 1), 2),
    (LocalFieldSpec('padic', 3, 1), 3),
    (LocalFieldSpec('padic', 5, 1), 2),
    (LocalFieldSpec('padic', 5, 1), 3),
)
INDUCTION_MAX_CONDUCTOR = 2

SWAN_CASES = ((3, 1), (3, 2), (5, 1), (5, 2))


def _row(suite, case, check, passed, detail=''):
    return {'suite': suite, 'case': str(case), 'check': check, 'pass': bool(passed),
            'detail': str(detail)}


def _guarded(suite, case_id, function):
    """Run one case; an exception becomes a single failed row"""
    try:
        return function()
    except Exception as e:
        logger.debug("case %s/%s raised:\n%s", suite, case_id, traceback.format_exc())
        return [_row(suite, case_id, 'exception', False, f"{type(e).__name__}: {e}")]


def oracle_characters():
    """Every character of conductor <= 3 with chi(pi) = 1 on the oracle fields"""
    characters = []
    for field in ORACLE_FIELDS:
        characters.extend(character_family(field, ORACLE_MAX_CONDUCTOR, 1))
    return characters


def induction_cases():
    """chi_0 of conductor <= INDUCTION_MAX_CONDUCTOR with chi_0(pi) = 1 for each (K, [L:K])"""
    cases = []
    for base, degree in INDUCTION_CASES:
        for chi0 in character_family(base, INDUCTION_MAX_CONDUCTOR, 1):
            cases.append({'base': base, 'degree': degree, 'chi0': chi0})
    return cases


# ----------------------------
# Per-case checks
# ----------------------------
def check_formulary_case(case):
    """Additivity, measure scaling, (chi, a psi), unramified twist, explicit inverse, Galois"""
    suite, cid = 'formulary', case['id']
    chi, other, theta = case['chi'], case['other'], case['theta']
    psi, dx, a, scale = case['psi'], case['dx'], case['a'], case['scale']
    field = case['field']
    rows = []

    base = epsilon0_char(chi, psi, dx).value
    rows.append(_row(suite, cid, 'unit', True, base))

    pair = epsilon0_virtual(char_rep(chi) + char_rep(other), psi, dx).value
    rows.append(_row(suite, cid, 'additivity',
                     pair == base * epsilon0_char(other, psi, dx).value))

    scaled = epsilon0_char(chi, psi, dx.scaled(scale)).value
    rows.append(_row(suite, cid, 'measure_scaling', scaled == scale * base))

    twisted_psi = addchar_twist(psi, a)
    lhs = epsilon0_char(chi, twisted_psi, dx).value
    valuation = a.normalized().valuation
    rhs = vr_det_at(char_rep(chi), a) * Fraction(field.q) ** valuation * base
    rows.append(_row(suite, cid, 'character_of_psi', lhs == rhs))

    direct = twisted_directly(char_rep(chi), theta, psi, dx)
    formula = epsilon0_twist_formula(char_rep(chi), theta, psi, dx)
    rows.append(_row(suite, cid, 'unramified_twist', direct == formula))

    _, _, ok = explicit_inverse_check(chi, psi, dx)
    rows.append(_row(suite, cid, 'explicit_inverse', ok))

    level = 1
    for x in (base, chi.pi_value, dx.volume):
        level = level * x.level
    level = level * chi.unit_level
    k = galois_multiplier(field.p, level)
    conjugate = epsilon0_char(mulchar_galois(chi, k),
                              addchar_twist(psi, k_element(field, k, 0, psi.twist.precision)),
                              HaarMeasure(field, cyc_galois(dx.volume, k))).value
    rows.append(_row(suite, cid, 'galois_equivariance', conjugate == cyc_galois(base, k)))
    return rows


def check_induction_case(case):
    """Degree-zero inductivity on Ind(chi_0 o N), both sides from epsilon0_char"""
    suite = 'induction'
    base, degree, chi0 = case['base'], case['degree'], case['chi0']
    cid = f"{base} f'={degree} {chi0}"
    ext = unramified_extension(base, degree)
    psi, dx = addchar_standard(base), standard_measure(base)
    chi = mulchar_norm_inflate(chi0, ext)
    rows = []

    decomposed = decompose_galois_invariant_induction(base, degree, chi0)
    lhs = epsilon0_virtual(decomposed - induced_regular(base, degree), psi, dx).value
    psi_l, dx_l = addchar_compose_trace(psi, ext), HaarMeasure(ext, dx.volume)
    rhs = (epsilon0_char(chi, psi_l, dx_l).value
           / epsilon0_char(trivial_character(ext), psi_l, dx_l).value)
    rows.append(_row(suite, cid, 'degree_zero_inductivity', lhs == rhs, lhs))

    induced = induced_rep(base, chi)
    rows.append(_row(suite, cid, 'induced_atom',
                     epsilon0_virtual(induced, psi, dx).value
                     == epsilon0_virtual(decomposed, psi, dx).value))
    rows.append(_row(suite, cid, 'swan_of_induction', vr_swan(induced) == vr_swan(decomposed),
                     vr_swan(induced)))
    return rows


def check_oracle_case(chi):
    suite = 'oracle'
    psi, dx = addchar_standard(chi.field), standard_measure(chi.field)
    fast = epsilon0_char(chi, psi, dx).value
    naive = epsilon0_char_naive(chi, psi, dx)
    return [_row(suite, chi, 'naive_sum', fast == naive, fast)]


def check_units_case(chi):
    suite = 'units'
    psi, dx = addchar_standard(chi.field), standard_measure(chi.field)
    value = epsilon0_char(chi, psi, dx, certify=False).value
    norm = cyc_norm(value)
    ok = (cyc_is_unit(value) and is_power_of(norm.numerator, chi.field.p)
          and is_power_of(norm.denominator, chi.field.p))
    return [_row(suite, chi, 'norm_is_p_power', ok, norm)]


def check_reduction_case(case):
    """One character against every prime l; the characteristic-zero value is computed once"""
    chi, primes = case
    psi, dx = addchar_standard(chi.field), standard_measure(chi.field)
    char_zero = epsilon0_char(chi, psi, dx)
    rows = []
    for l in primes:
        result = reduction_commutes(chi, psi, dx, l, char_zero=char_zero)
        rows.append(_row('reduction', f"{chi} l={l}", 'reduction_commutes', result['pass'],
                         f"{result['mod_l']} vs {result['reduced']}"))
    return rows


def check_swan_case(case):
    """Artin/Swan pairings against the conductor of the matching K^x character"""
    label, filtration, n = case
    suite = 'swan'
    rows = []
    for i, chi in enumerate(group_characters(filtration.group)):
        cid = f"{label} chi#{i}"
        artin = conductor_pairing(filtration, chi, 'artin')
        swan = conductor_pairing(filtration, chi, 'swan')
        rows.append(_row(suite, cid, 'integral', artin.denominator == 1 and swan.denominator == 1,
                         f"a={artin} sw={swan}"))
        rows.append(_row(suite, cid, 'swan_nonnegative', swan >= 0))
        if n is not None:
            local = local_character(filtration, chi, n)
            rows.append(_row(suite, cid, 'artin_matches_conductor', artin == local.conductor))
            rows.append(_row(suite, cid, 'swan_matches_conductor', swan == local.swan))
    return rows


# ----------------------------
# Suites
# ----------------------------
def _suite_cases(suite, seed, config):
    if suite == 'formulary':
        count = config.get('FORMULARY_CASES', 200)
        return generate_rank_one_cases(seed, count), check_formulary_case
    if suite == 'induction':
        return induction_cases(), check_induction_case
    if suite == 'oracle':
        return oracle_characters(), check_oracle_case
    if suite == 'units':
        cases = oracle_characters()
        for case in induction_cases():
            ext = unramified_extension(case['base'], case['degree'])
            cases.append(mulchar_norm_inflate(case['chi0'], ext))
        return cases, check_units_case
    if suite == 'reduction':
        primes = config.get('REDUCTION_PRIMES', [2, 5, 7, 11, 13])
        cases = [(chi, tuple(l for l in primes if l != chi.field.p)) for chi in oracle_characters()]
        return cases, check_reduction_case
    if suite == 'swan':
        cases = [(f"cyclotomic p={p} n={n}", builtin_cyclotomic_filtration(p, n), n)
                 for p, n in SWAN_CASES]
        for name in list_fixtures():
            cases.append((name, load_filtration(name), None))
        return cases, check_swan_case
    raise ValueError(f"unknown suite {suite!r}; expected one of {', '.join(SUITES)}")


def run_suite(suite, seed=20240601, jobs=1, config=None):
    """
    Run one verification suite

    Args:
        suite: one of SUITES
        seed: seed for the randomized suites
        jobs: worker threads; rows come back in case order regardless
        config: CONFIG mapping (FORMULARY_CASES, REDUCTION_PRIMES)

    Returns:
        dict with suite, seed, total, passed, failed, by_check and rows
    """
    config = config or {}
    cases, check = _suite_cases(suite, seed, config)
    logger.info("suite %s: %d cases, %d worker(s)", suite, len(cases), jobs)

    def run(indexed):
        index, case = indexed
        return _guarded(suite, index, lambda: check(case))

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as executor:
            results = list(executor.map(run, enumerate(cases)))
    else:
        results = [run(item) for item in enumerate(cases)]
    rows = [row for result in results for row in result]

    frame = report_frame(rows)
    passed = int(frame['pass'].sum()) if len(frame) else 0
    by_check = {}
    if len(frame):
        grouped = frame.groupby('check', sort=True)['pass'].agg(['count', 'sum'])
        by_check = {check_name: {'total': int(r['count']), 'passed': int(r['sum'])}
                    for check_name, r in grouped.iterrows()}
    logger.info("suite %s: %d/%d checks passed", suite, passed, len(rows))
    return {
        'suite': suite,
        'seed': seed,
        'cases': len(cases),
        'total': len(rows),
        'passed': passed,
        'failed': len(rows) - passed,
        'by_check': by_check,
        'rows': rows,
    }


def report_frame(rows):
    return pd.DataFrame(rows, columns=['suite', 'case', 'check', 'pass', 'detail'])


def write_report(reports, path):
    """Write reports as JSON, or the row table as CSV when path ends in .csv"""
    if path.endswith('.csv'):
        frames = [report_frame(report['rows']) for report in reports]
        frame = pd.concat(frames, ignore_index=True) if frames else report_frame([])
        frame.to_csv(path, index=False)
    else:
        with open(path, 'w', encoding='utf-8') as handle:
            json.dump(reports, handle, indent=2, ensure_ascii=False)
            handle.write('\n')
    logger.info("report written to %s", path)
