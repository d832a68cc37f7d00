"""
Seeded random case generation for the verification suites
"""
import logging
from math import gcd

import numpy as np

from .characters import (
    DEFAULT_TWIST_PRECISION, AddChar, HaarMeasure, mulchar_from_unit_exponents,
)
from .cyclotomic import cyc_from_rational, root_of_unity
from .local_field import KElement, LocalFieldSpec, quot_ring, unit_group

logger = logging.getLogger(__name__)

# 케이스 생성에 쓰는 기본 체 (q <= 9)
DEFAULT_FIELDS = (
    LocalFieldSpec('padic', 3, 1),
    LocalFieldSpec('padic', 5, 1),
    LocalFieldSpec('padic', 3, 2),
    LocalFieldSpec('laurent', 2, 2),
    LocalFieldSpec('laurent', 3, 1),
)

# 단위근 차수 후보
ROOT_ORDERS = (1, 2, 3, 4, 6)


def make_rng(seed):
    return np.random.default_rng(seed)


def random_unit(rng, field, precision=DEFAULT_TWIST_PRECISION):
    """A uniformly random unit of O/pi^precision as a coordinate tuple"""
    ring = quot_ring(field, precision)
    while True:
        x = ring.element_at(int(rng.integers(ring.size)))
        if ring.is_unit(x):
            return x


def random_k_element(rng, field, valuations=(-1, 0, 1), precision=DEFAULT_TWIST_PRECISION):
    """pi^v u with v drawn from valuations and u a random unit"""
    valuation = int(rng.choice(valuations))
    return KElement(field, valuation, random_unit(rng, field, precision), precision)


def random_pi_value(rng, p, max_power=1):
    """+-p^j zeta for a random small root of unity zeta (a unit of Z[1/p][zeta])"""
    order = int(rng.choice(ROOT_ORDERS))
    value = root_of_unity(order, int(rng.integers(order)), p)
    power = int(rng.integers(-max_power, max_power + 1))
    return value * cyc_from_rational(p, p) ** power


def random_coefficient_unit(rng, p):
    """A random unit a of Z[1/p][zeta] used to scale measures"""
    sign = 1 if rng.integers(2) else -1
    return random_pi_value(rng, p) * sign


def random_character(rng, field, max_conductor=2, pi_value=None):
    """
    A random character of K^x trivial on 1 + pi^max_conductor O

    The exponents are drawn on the generators of (O/pi^a)^x and the result
    is minimized, so its conductor can come out smaller than max_conductor.
    """
    conductor = int(rng.integers(0, max_conductor + 1))
    if pi_value is None:
        pi_value = random_pi_value(rng, field.p)
    group = unit_group(field, conductor)
    if not group.orders:
        return mulchar_from_unit_exponents(field, 0, 1, [0], pi_value)
    level = group.exponent
    exps = [int(rng.integers(n)) for n in group.orders]
    weights = np.array([e * (level // n) for e, n in zip(exps, group.orders)], dtype=np.int64)
    values = group.dlog_matrix.dot(weights) % level
    return mulchar_from_unit_exponents(field, conductor, level, values, pi_value)


def random_unramified(rng, field):
    return mulchar_from_unit_exponents(field, 0, 1, [0], random_pi_value(rng, field.p))


def random_psi(rng, field, precision=DEFAULT_TWIST_PRECISION):
    """A nontrivial additive character a * psi_0 with v(a) in {-1, 0, 1}"""
    return AddChar(field, random_k_element(rng, field, precision=precision))


def random_measure(rng, field):
    return HaarMeasure(field, random_coefficient_unit(rng, field.p))


def galois_multiplier(p, level):
    """Smallest k > 1 prime to p * level"""
    k = 2
    while gcd(k, p * level) != 1:
        k += 1
    return k


def generate_rank_one_cases(seed, count, fields=DEFAULT_FIELDS, max_conductor=2):
    """
    Seeded rank-1 cases for the formulary suite

    Returns:
        list of dicts with keys id, field, chi, other, theta, psi, dx, a, scale
    """
    rng = make_rng(seed)
    cases = []
    for i in range(count):
        field = fields[int(rng.integers(len(fields)))]
        cases.append({
            'id': i,
            'field': field,
            'chi': random_character(rng, field, max_conductor),
            'other': random_character(rng, field, max_conductor),
            'theta': random_unramified(rng, field),
            'psi': random_psi(rng, field),
            'dx': random_measure(rng, field),
            'a': random_k_element(rng, field),
            'scale': random_coefficient_unit(rng, field.p),
        })
    logger.info("generated %d rank-one cases from seed %d", count, seed)
    return cases
