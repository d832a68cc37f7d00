"""
Job specification parsing for the command line
Turns flag strings (field descriptors, character JSON, representation JSON,
additive twists, measure volumes) into engine objects
"""
import json
import logging
import os
import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .characters import (
    DEFAULT_TWIST_PRECISION, AddChar, HaarMeasure, MulChar, addchar_from_int, addchar_standard,
    addchar_trivial,
)
from .cyclotomic import cyc_from_json
from .errors import JobSpecError
from .local_field import k_element, parse_field, relative_degree
from .virtual_rep import Atom, VirtualRep, char_rep

logger = logging.getLogger(__name__)


class KeyDetector:
    """JSON 키 이름을 표준 이름으로 매핑하는 클래스"""

    # 키 이름 패턴 정의
    PATTERNS = {
        'cond': [r'^cond$', r'^conductor$', r'^a$', r'^a[\s_-]?chi$'],
        'pi_value': [r'^pi[\s_-]?value$', r'^chi[\s_-]?pi$', r'^frob$', r'^pi$'],
        'unit_exps': [r'^unit[\s_-]?exps?$', r'^exps?$', r'^exponents$'],
        'field': [r'^field$', r'^ext(ension)?$', r'^over$'],
        'coef': [r'^coef(ficient)?$', r'^mult(iplicity)?$', r'^c$'],
        'char': [r'^char(acter)?$', r'^chi$'],
        'twist': [r'^twist$', r'^psi$'],
        'valuation': [r'^val(uation)?$', r'^v$'],
        'unit': [r'^unit$', r'^mantissa$', r'^u$'],
        'precision': [r'^prec(ision)?$'],
    }

    @staticmethod
    def detect_keys(record):
        """
        Map the keys of one JSON object to standard names

        Returns:
            dict: {standard name: value}; unknown keys are left out
        """
        detected = {}
        for key, value in record.items():
            key_lower = str(key).lower().strip()
            for standard_name, patterns in KeyDetector.PATTERNS.items():
                if standard_name in detected:
                    continue
                if any(re.match(pattern, key_lower) for pattern in patterns):
                    detected[standard_name] = value
                    break
            else:
                logger.debug("ignoring unknown key %r", key)
        return detected


# "3", "-2", "2*pi^-1", "pi^-2", "t^-1"
TWIST_PATTERN = re.compile(
    r'^\s*(?:(?P<unit>[+-]?\d+)\s*\*?\s*)?(?:(?:pi|p|t)\s*\^\s*\(?(?P<val>[+-]?\d+)\)?)?\s*$',
    re.IGNORECASE)


@dataclass
class JobSpec:
    """Everything one CLI invocation computes with"""
    field: object
    psi: AddChar
    dx: HaarMeasure
    char: MulChar = None
    rep: VirtualRep = None
    options: dict = dc_field(default_factory=dict)

    def representation(self):
        """The virtual representation of the job (a single character becomes [chi])"""
        if self.rep is not None:
            return self.rep
        if self.char is None:
            raise JobSpecError('char', "a character (--char) or representation (--rep) is required")
        return char_rep(self.char)


def _load_json(name, text):
    """Inline JSON, or the contents of a .json file when text names one"""
    if isinstance(text, (dict, list)):
        return text
    if isinstance(text, str) and text.endswith('.json') and os.path.isfile(text):
        with open(text, encoding='utf-8') as handle:
            text = handle.read()
    try:
        return json.loads(text)
    except (TypeError, json.JSONDecodeError) as e:
        raise JobSpecError(name, f"invalid JSON ({e})") from None


def parse_field_arg(text):
    try:
        return parse_field(text)
    except ValueError as e:
        raise JobSpecError('field', str(e)) from None


def parse_cyc(name, value, p):
    """A coefficient: integer, rational string, {"root": [n, k]} or {level, coeffs}"""
    if isinstance(value, str) and value.strip().startswith('{'):
        value = _load_json(name, value)
    try:
        return cyc_from_json(value, p)
    except (ValueError, KeyError, TypeError, ZeroDivisionError) as e:
        raise JobSpecError(name, f"cannot read coefficient {value!r} ({e})") from None


def parse_char(text, field, name='char'):
    """
    Parse a character object

    Keys (aliases accepted, see KeyDetector.PATTERNS): cond, pi_value,
    unit_exps, and optionally field for a character of an unramified
    extension.  Unit exponents refer to the generators of unit_group(field, cond).
    """
    record = _load_json(name, text)
    if not isinstance(record, dict):
        raise JobSpecError(name, "a character must be a JSON object")
    keys = KeyDetector.detect_keys(record)
    char_field = parse_field_arg(keys['field']) if 'field' in keys else field
    try:
        cond = int(keys.get('cond', 0))
        exps = tuple(int(e) for e in keys.get('unit_exps', ()))
    except (TypeError, ValueError) as e:
        raise JobSpecError(name, f"conductor and unit exponents must be integers ({e})") from None
    pi_value = parse_cyc(f"{name}.pi_value", keys.get('pi_value', 1), char_field.p)
    try:
        return MulChar(char_field, cond, pi_value, exps)
    except ValueError as e:
        raise JobSpecError(name, str(e)) from None


def parse_rep(text, field):
    """
    Parse a virtual representation

    Either a list of terms or {"terms": [...]}; each term is {coef, char}
    where char may name an unramified extension (an induced atom).
    """
    record = _load_json('rep', text)
    if isinstance(record, dict):
        record = record.get('terms', [])
    if not isinstance(record, list):
        raise JobSpecError('rep', "expected a list of {coef, char} terms")
    terms = []
    for i, term in enumerate(record):
        name = f"rep[{i}]"
        if not isinstance(term, dict):
            raise JobSpecError(name, "each term must be a JSON object")
        keys = KeyDetector.detect_keys(term)
        if 'char' not in keys:
            raise JobSpecError(name, "term has no character")
        chi = parse_char(keys['char'], field, f"{name}.char")
        try:
            coef = int(keys.get('coef', 1))
            degree = relative_degree(field, chi.field)
            terms.append((coef, Atom(field, degree, chi)))
        except ValueError as e:
            raise JobSpecError(name, str(e)) from None
    return VirtualRep(field, tuple(terms))


def _int_twist(field, unit, valuation, precision):
    if unit == 0:
        return addchar_trivial(field)
    if field.kind == 'laurent' and unit % field.p == 0:
        raise JobSpecError('psi-twist', f"{unit} is zero in the residue field of {field}")
    try:
        return addchar_from_int(field, unit, valuation, precision)
    except ValueError as e:
        raise JobSpecError('psi-twist', str(e)) from None


def _json_twist(record, field, precision):
    """{"valuation": k, "unit": [coords], "precision": m}, optionally under "twist" or "psi" """
    if not isinstance(record, dict):
        raise JobSpecError('psi-twist', "a twist must be a JSON object")
    keys = KeyDetector.detect_keys(record)
    while isinstance(keys.get('twist'), dict):
        keys = KeyDetector.detect_keys(keys['twist'])
    if 'unit' not in keys:
        raise JobSpecError('psi-twist', "twist object has no unit")
    try:
        valuation = int(keys.get('valuation', 0))
        precision = int(keys.get('precision', precision))
        unit = keys['unit']
        unit = tuple(int(c) for c in unit) if isinstance(unit, list) else int(unit)
    except (TypeError, ValueError) as e:
        raise JobSpecError('psi-twist',
                           f"valuation, unit and precision must be integers ({e})") from None
    if isinstance(unit, int):
        return _int_twist(field, unit, valuation, precision)
    if not unit:
        raise JobSpecError('psi-twist', "unit has no coordinates")
    if field.kind == 'laurent' and any(c < 0 or c >= field.q for c in unit):
        raise JobSpecError('psi-twist',
                           f"unit coordinates must be residue field indices below {field.q}")
    if not any(unit):
        return addchar_trivial(field)
    try:
        return AddChar(field, k_element(field, unit, valuation, precision))
    except ValueError as e:
        raise JobSpecError('psi-twist', str(e)) from None


def parse_psi(text, field, precision=DEFAULT_TWIST_PRECISION):
    """
    Parse an additive twist a, giving psi = a * psi_0

    "1" or empty is the standard character, "0" the trivial one; "u*pi^k"
    gives a = pi^k u for an integer u.  A KElement JSON object
    ({"valuation", "unit": coordinates, "precision"}) gives any other twist,
    such as a unit outside the prime field of an unramified extension.
    """
    if text is None or str(text).strip() == '':
        return addchar_standard(field, precision)
    if isinstance(text, dict) or str(text).strip().startswith('{'):
        return _json_twist(_load_json('psi-twist', text), field, precision)
    match = TWIST_PATTERN.match(str(text))
    if not match or (match.group('unit') is None and match.group('val') is None):
        raise JobSpecError('psi-twist', f"cannot parse twist {text!r}; expected u, u*pi^k, pi^k "
                                        f"or a JSON object")
    unit = int(match.group('unit') or 1)
    valuation = int(match.group('val') or 0)
    return _int_twist(field, unit, valuation, precision)


def parse_vol(text, field):
    """vol(O_K): rational or coefficient JSON, default 1"""
    if text is None:
        return HaarMeasure(field, Fraction(1))
    volume = parse_cyc('vol', text, field.p)
    if volume.is_zero():
        raise JobSpecError('vol', "volume must be nonzero")
    return HaarMeasure(field, volume)


def build_job(args, precision=DEFAULT_TWIST_PRECISION):
    """
    Build a JobSpec from parsed command-line arguments

    Args:
        args: argparse namespace (attributes missing for a subcommand are
            treated as unset)
        precision: twist precision for psi

    Returns:
        JobSpec
    """
    field = parse_field_arg(getattr(args, 'field', None))
    char_text = getattr(args, 'char', None)
    rep_text = getattr(args, 'rep', None)
    if char_text and rep_text:
        raise JobSpecError('rep', "give either --char or --rep, not both")
    char = parse_char(char_text, field) if char_text else None
    rep = parse_rep(rep_text, field) if rep_text else None
    if char is not None and char.field != field:
        rep = VirtualRep(field, ((1, Atom(field, relative_degree(field, char.field), char)),))
        char = None
    psi = parse_psi(getattr(args, 'psi_twist', None), field, precision)
    dx = parse_vol(getattr(args, 'vol', None), field)
    logger.debug("job on %s: char=%s rep=%s n(psi)=%s", field, char, rep,
                 None if psi.is_trivial() else psi.level)
    return JobSpec(field, psi, dx, char, rep)
