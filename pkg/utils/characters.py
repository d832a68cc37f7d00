"""
Additive characters, multiplicative characters and Haar measures of a local field

Multiplicative characters of K^x are identified with characters of the Weil
group through the Artin map with uniformizers going to geometric Frobenius,
so a character is pinned down by its value at pi and its restriction to the
units.  Unit exponents always refer to the generators chosen by
unit_group(field, conductor).
"""
import itertools
import logging
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import gcd, lcm

import numpy as np

from .cyclotomic import (
    CycNum, cyc_from_rational, cyc_galois, cyc_inv, root_of_unity,
)
from .errors import InvariantViolation, PrecisionError, UnsupportedError
from .local_field import (
    KElement, embed, k_element, k_mul, k_neg, norm_to_base, quot_ring,
    reduction_index, relative_degree, residue_field, unit_group,
)

logger = logging.getLogger(__name__)

DEFAULT_TWIST_PRECISION = 6


# ----------------------------
# Additive characters
# ----------------------------
@dataclass(frozen=True)
class AddChar:
    """
    psi = a * psi_0 for the standard character psi_0; twist None is the trivial character

    psi_0 on Q_p-unramified fields: x -> exp(2 pi i {Tr x}), the fractional
    part of the trace to Q_p.  On F_q((t)): x -> zeta_p^tr(residue coefficient
    of t^-1).  Both are conventions; psi_0 has level 0.

    exact_twist = (integer unit, valuation) marks a twist u * pi^k known
    exactly; such a twist is rebuilt at whatever precision an argument needs.
    """
    field: object
    twist: KElement = None
    exact_twist: tuple = dc_field(default=None, compare=False)

    def __post_init__(self):
        if self.twist is not None:
            if self.twist.field != self.field:
                raise UnsupportedError(f"twist lives in {self.twist.field}, character on {self.field}")
            object.__setattr__(self, 'twist', self.twist.normalized())

    def is_trivial(self):
        return self.twist is None

    @property
    def level(self):
        """n(psi): psi is trivial on pi^-n O and not on pi^(-n-1) O"""
        if self.twist is None:
            return None
        return self.twist.valuation


def addchar_from_int(field, unit, valuation=0, precision=DEFAULT_TWIST_PRECISION):
    """psi(x) = psi_0(u pi^k x) for an integer unit u, exact at every precision"""
    return AddChar(field, k_element(field, unit, valuation, precision), (unit, valuation))


def addchar_standard(field, precision=DEFAULT_TWIST_PRECISION):
    return addchar_from_int(field, 1, 0, precision)


def addchar_trivial(field):
    return AddChar(field, None)


def twist_at(psi, precision):
    """The twist of psi with its mantissa known modulo pi^precision"""
    twist = psi.twist
    if twist.precision >= precision:
        return twist
    if psi.exact_twist is None:
        raise PrecisionError(f"twist known to precision {twist.precision}, {precision} needed")
    unit, valuation = psi.exact_twist
    return k_element(psi.field, unit, valuation, precision).normalized()


def addchar_twist(psi, a):
    """(a psi)(x) = psi(a x)"""
    if psi.is_trivial():
        return psi
    return AddChar(psi.field, k_mul(psi.twist, a))


def addchar_negate(psi):
    if psi.is_trivial():
        return psi
    exact = None
    if psi.exact_twist is not None:
        exact = (-psi.exact_twist[0], psi.exact_twist[1])
    return AddChar(psi.field, k_neg(psi.twist), exact)


def addchar_compose_trace(psi, ext):
    """psi o Tr_{L/K} as a character of the unramified extension L"""
    if psi.is_trivial():
        return AddChar(ext, None)
    relative_degree(psi.field, ext)
    if psi.exact_twist is not None:
        unit, valuation = psi.exact_twist
        return addchar_from_int(ext, unit, valuation, psi.twist.precision)
    twist = psi.twist
    ring_k = quot_ring(psi.field, twist.precision)
    ring_l = quot_ring(ext, twist.precision)
    image = embed(ring_k, ring_l, twist.mantissa)
    return AddChar(ext, KElement(ext, twist.valuation, image, twist.precision))


def _standard_root(field, y):
    """psi_0(y) as (order, exponent) for a KElement y (mantissa need not be a unit)"""
    k = -y.valuation
    if k <= 0:
        return 1, 0
    if y.precision < k:
        raise PrecisionError(f"psi_0 needs the argument modulo pi^0, known modulo pi^{y.absolute_precision}")
    ring = quot_ring(field, k)
    w = ring.reduce_from(y.mantissa)
    if field.kind == 'padic':
        return field.p ** k, ring.trace_to_prime(w)
    return field.p, int(residue_field(field.p, field.f).trace[w[k - 1]])


def addchar_root(psi, x):
    """psi(x) as (order, exponent): psi(x) = zeta_order^exponent"""
    if psi.is_trivial():
        return 1, 0
    if x.field != psi.field:
        raise UnsupportedError(f"argument in {x.field}, character on {psi.field}")
    twist = psi.twist
    needed = -(twist.valuation + x.valuation)
    if psi.exact_twist is not None and needed > twist.precision:
        twist = twist_at(psi, needed)
    return _standard_root(psi.field, k_mul(twist, x))


def addchar_eval(psi, x):
    order, exponent = addchar_root(psi, x)
    return root_of_unity(order, exponent, psi.field.p)


def psi_exponents(psi, m, k):
    """
    Exponents of psi(pi^(-k-n) u) for every unit u of O/pi^m, n = n(psi)

    Returns:
        (order, int64 array aligned with quot_ring(field, m).units)
    """
    field = psi.field
    twist = twist_at(psi, k)
    ring_m = quot_ring(field, m)
    coords = ring_m.unit_coordinates
    ring_k = quot_ring(field, k)
    w = ring_k.reduce_from(twist.mantissa)
    if field.kind == 'padic':
        order = field.p ** k
        basis = [tuple(1 if j == i else 0 for j in range(field.f)) for i in range(field.f)]
        weights = np.array([ring_k.trace_to_prime(ring_k.mul(w, b)) for b in basis], dtype=np.int64)
        return order, (coords % order).dot(weights) % order
    residue = residue_field(field.p, field.f)
    trace_of_product = residue.trace[residue.mul]
    total = np.zeros(len(coords), dtype=np.int64)
    for j in range(k):
        total += trace_of_product[w[j], coords[:, k - 1 - j]]
    return field.p, total % field.p


# ----------------------------
# Multiplicative characters
# ----------------------------
@dataclass(frozen=True)
class MulChar:
    """
    A character of K^x with conductor exponent a(chi)

    chi(pi) = pi_value; on units chi factors through (O/pi^a)^x and sends
    its i-th generator (of order n_i) to zeta_{n_i}^{unit_exps[i]}.
    Construction rejects exponent data whose conductor is not minimal.
    """
    field: object
    conductor: int
    pi_value: CycNum
    unit_exps: tuple = ()

    def __post_init__(self):
        if self.conductor < 0:
            raise ValueError(f"conductor exponent must be nonnegative, got {self.conductor}")
        if not isinstance(self.pi_value, CycNum) or self.pi_value.is_zero():
            raise ValueError("value at the uniformizer must be a nonzero CycNum")
        if self.pi_value.p != self.field.p:
            raise ValueError(f"pi value has banned prime {self.pi_value.p}, field has p={self.field.p}")
        group = unit_group(self.field, self.conductor)
        if len(self.unit_exps) != len(group.orders):
            raise ValueError(f"expected {len(group.orders)} unit exponents for conductor "
                             f"{self.conductor}, got {len(self.unit_exps)}")
        exps = tuple(int(e) % n for e, n in zip(self.unit_exps, group.orders))
        object.__setattr__(self, 'unit_exps', exps)
        if self.conductor >= 1 and not self._nontrivial_on_top():
            raise ValueError(f"character is trivial on 1 + pi^{self.conductor - 1}O; "
                             f"conductor {self.conductor} is not minimal")

    def _nontrivial_on_top(self):
        group = unit_group(self.field, self.conductor)
        ring = group.ring
        if self.conductor == 1:
            positions = np.arange(len(group.units))
        else:
            one = ring.one
            positions = np.array([i for i, u in enumerate(group.units)
                                  if ring.valuation(ring.sub(u, one)) >= self.conductor - 1])
        values = group.dlog_matrix[positions].dot(self.unit_weights) % self.unit_level
        return bool(values.any())

    @property
    def swan(self):
        return max(self.conductor - 1, 0)

    def is_unramified(self):
        return self.conductor == 0

    @property
    def unit_level(self):
        """Order of chi restricted to the units"""
        group = unit_group(self.field, self.conductor)
        order = 1
        for e, n in zip(self.unit_exps, group.orders):
            order = lcm(order, n // gcd(e, n))
        return order

    @property
    def unit_weights(self):
        """w with chi(u) = zeta_{unit_level}^(dlog(u) . w)"""
        group = unit_group(self.field, self.conductor)
        level = self.unit_level
        return np.array([e * level // n for e, n in zip(self.unit_exps, group.orders)],
                        dtype=np.int64)

    def unit_exponents_over(self, m):
        """chi(u) exponents (at unit_level) for every unit of O/pi^m, m >= conductor"""
        if m < self.conductor:
            raise PrecisionError(f"conductor {self.conductor} needs precision at least that, got {m}")
        group = unit_group(self.field, self.conductor)
        per_unit = group.dlog_matrix.dot(self.unit_weights) % self.unit_level
        if m == 0:
            return per_unit
        return per_unit[reduction_index(self.field, m, self.conductor)]

    def __str__(self):
        return (f"chi[{self.field}, a={self.conductor}, chi(pi)={self.pi_value}, "
                f"exps={list(self.unit_exps)}]")


def unramified_character(field, pi_value):
    if not isinstance(pi_value, CycNum):
        pi_value = cyc_from_rational(pi_value, field.p)
    return MulChar(field, 0, pi_value, ())


def trivial_character(field):
    return unramified_character(field, 1)


def mulchar_from_unit_exponents(field, m, level, exponents, pi_value):
    """
    The character with the given values on (O/pi^m)^x, at its minimal conductor

    Args:
        field: LocalFieldSpec
        m: precision of the unit enumeration
        level: root-of-unity order the exponents refer to
        exponents: int array aligned with unit_group(field, m).units
        pi_value: CycNum value at the uniformizer

    Returns:
        MulChar
    """
    exponents = np.asarray(exponents, dtype=np.int64) % level
    if m == 0 or not exponents.any():
        return MulChar(field, 0, pi_value, ())
    source = unit_group(field, m)
    conductor = m
    for a in range(0, m):
        target = unit_group(field, a)
        image = reduction_index(field, m, a)
        kernel = image == target.index[target.ring.one]
        if not exponents[kernel].any():
            conductor = a
            break
    if conductor == 0:
        return MulChar(field, 0, pi_value, ())
    target = unit_group(field, conductor)
    ring_m = source.ring
    unit_exps = []
    for g, n in zip(target.generators, target.orders):
        value = int(exponents[source.index[ring_m.lift_from(g)]])
        if value * n % level:
            raise InvariantViolation(f"generator of order {n} has a value of order not dividing {n}")
        unit_exps.append(value * n // level)
    return MulChar(field, conductor, pi_value, tuple(unit_exps))


def mulchar_unit_root(chi, u):
    """chi(u) as (order, exponent) for a unit u of any precision >= a(chi)"""
    if chi.conductor == 0:
        return 1, 0
    group = unit_group(chi.field, chi.conductor)
    u = group.ring.reduce_from(u)
    exps = np.array(group.dlog(u), dtype=np.int64)
    return chi.unit_level, int(exps.dot(chi.unit_weights) % chi.unit_level)


def mulchar_eval(chi, x):
    """chi(pi^v u) = chi(pi)^v chi(u)"""
    if x.field != chi.field:
        raise UnsupportedError(f"argument in {x.field}, character on {chi.field}")
    x = x.normalized()
    if x.precision < chi.conductor:
        raise PrecisionError(f"unit part known modulo pi^{x.precision}, "
                             f"conductor {chi.conductor} needs more")
    order, exponent = mulchar_unit_root(chi, x.mantissa)
    value = root_of_unity(order, exponent, chi.field.p)
    if x.valuation:
        value = value * chi.pi_value ** x.valuation
    return value


def _same_field(chi, other):
    if chi.field != other.field:
        raise UnsupportedError(f"characters on different fields {chi.field} and {other.field}")


def mulchar_product(chi, other):
    _same_field(chi, other)
    m = max(chi.conductor, other.conductor)
    level = lcm(chi.unit_level, other.unit_level)
    exps = (chi.unit_exponents_over(m) * (level // chi.unit_level)
            + other.unit_exponents_over(m) * (level // other.unit_level))
    return mulchar_from_unit_exponents(chi.field, m, level, exps, chi.pi_value * other.pi_value)


def mulchar_inverse(chi):
    return MulChar(chi.field, chi.conductor, cyc_inv(chi.pi_value),
                   tuple(-e for e in chi.unit_exps))


def mulchar_power(chi, k):
    if k < 0:
        return mulchar_power(mulchar_inverse(chi), -k)
    m = chi.conductor
    exps = chi.unit_exponents_over(m) * k
    return mulchar_from_unit_exponents(chi.field, m, chi.unit_level, exps, chi.pi_value ** k)


def mulchar_abs_twist(chi):
    """chi * |.|_K, where |pi|_K = 1/q"""
    return MulChar(chi.field, chi.conductor, chi.pi_value * Fraction(1, chi.field.q), chi.unit_exps)


def mulchar_norm_inflate(chi, ext):
    """
    chi o N_{L/K} for L unramified over K

    N(pi) = pi^[L:K] since pi stays a uniformizer of L; on units the norm is
    the product of the Frobenius conjugates.
    """
    degree = relative_degree(chi.field, ext)
    pi_value = chi.pi_value ** degree
    if chi.conductor == 0:
        return MulChar(ext, 0, pi_value, ())
    m = chi.conductor
    ring_k, ring_l = quot_ring(chi.field, m), quot_ring(ext, m)
    base = unit_group(chi.field, m)
    values = chi.unit_exponents_over(m)
    exps = np.array([values[base.index[norm_to_base(ring_l, ring_k, u)]] for u in ring_l.units],
                    dtype=np.int64)
    return mulchar_from_unit_exponents(ext, m, chi.unit_level, exps, pi_value)


def mulchar_galois(chi, k):
    """sigma_k o chi for the automorphism zeta -> zeta^k of the coefficient ring"""
    if gcd(k, chi.unit_level) != 1:
        raise ValueError(f"{k} is not prime to the unit level {chi.unit_level}")
    return MulChar(chi.field, chi.conductor, cyc_galois(chi.pi_value, k),
                   tuple(e * k for e in chi.unit_exps))


def character_family(field, conductor, pi_value):
    """
    Every character of (O/pi^conductor)^x with the given value at pi,
    minimized, in lexicographic order of the generator exponents
    """
    group = unit_group(field, conductor)
    if not isinstance(pi_value, CycNum):
        pi_value = cyc_from_rational(pi_value, field.p)
    level = group.exponent
    weights = [level // n for n in group.orders]
    family = []
    for exps in itertools.product(*(range(n) for n in group.orders)):
        if conductor == 0:
            family.append(MulChar(field, 0, pi_value, ()))
            continue
        w = np.array([e * s for e, s in zip(exps, weights)], dtype=np.int64)
        values = group.dlog_matrix.dot(w) % level
        family.append(mulchar_from_unit_exponents(field, conductor, level, values, pi_value))
    return family


# ----------------------------
# Haar measures
# ----------------------------
@dataclass(frozen=True)
class HaarMeasure:
    """Haar measure on K with coefficient-ring values, fixed by vol(O_K)"""
    field: object
    volume: CycNum

    def __post_init__(self):
        if not isinstance(self.volume, CycNum):
            object.__setattr__(self, 'volume', cyc_from_rational(self.volume, self.field.p))
        if self.volume.is_zero():
            raise ValueError("Haar measure needs a nonzero volume")

    def ball(self, valuation):
        """Measure of pi^valuation O"""
        return self.volume * Fraction(self.field.q) ** (-valuation)

    def scaled(self, a):
        return HaarMeasure(self.field, self.volume * a)


def standard_measure(field):
    return HaarMeasure(field, cyc_from_rational(1, field.p))


def dual_measure(dx, psi):
    """The measure with vol(O) * dual vol(O) = q^(-n(psi))"""
    if psi.is_trivial():
        raise ValueError("dual measure needs a nontrivial additive character")
    return HaarMeasure(dx.field, cyc_inv(dx.volume) * Fraction(dx.field.q) ** (-psi.level))
