"""
Local epsilon_0 factors

For a character chi, eps_0(chi, psi, dx) is the integral of chi^-1(x) psi(x) dx
over gamma^-1 O^x with v(gamma) = Sw(chi) + n(psi) + 1.  With
M = max(a(chi), 1) the integrand is constant on the cosets
pi^-v u (1 + pi^M O), so the integral is a Gauss sum over (O/pi^M)^x.  The
sum is accumulated as a histogram of root-of-unity exponents and converted
to a cyclotomic number once.

Virtual representations are handled by additivity, and unramified induction
by inductivity in degree zero.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

import numpy as np

from .characters import (
    HaarMeasure, addchar_compose_trace, addchar_negate, addchar_root, dual_measure,
    mulchar_abs_twist, mulchar_inverse, mulchar_unit_root, psi_exponents,
    trivial_character, unramified_character,
)
from .cyclotomic import (
    cyc_from_exponents, cyc_from_rational, cyc_is_unit, cyc_norm, root_of_unity,
)
from .errors import InvariantViolation, UnsupportedError
from .local_field import KElement, k_inv, quot_ring
from .virtual_rep import (
    VirtualRep, vr_abs_twist, vr_dual, vr_inertia_invariants_rank, vr_rank, vr_swan,
    vr_tensor_unramified, vr_twist,
)

logger = logging.getLogger(__name__)


@dataclass
class Eps0Result:
    """An epsilon_0 value with its unit certificate (None when certification was skipped)"""
    value: object
    certified_unit: bool
    context: dict = field(default_factory=dict)

    @property
    def level(self):
        return self.value.level

    @property
    def norm(self):
        return cyc_norm(self.value)


@dataclass(frozen=True)
class GaussSum:
    """Histogram form of the coset sum: sum_k counts[k] zeta_level^k"""
    level: int
    counts: np.ndarray
    gamma_valuation: int
    coset_level: int


def _check_measure(dx):
    if not cyc_is_unit(dx.volume):
        raise ValueError(f"measure volume {dx.volume} is not a unit of Z[1/{dx.field.p}]; "
                         f"epsilon_0 would not be a unit")


def _check_inputs(chi, psi, dx, certify=False):
    if psi.is_trivial():
        raise ValueError("epsilon_0 needs a nontrivial additive character")
    if certify:
        _check_measure(dx)
    if chi.field != psi.field or chi.field != dx.field:
        raise UnsupportedError(f"character, additive character and measure on different fields: "
                               f"{chi.field}, {psi.field}, {dx.field}")


def gauss_sum(chi, psi):
    """
    Exponent histogram of sum_u chi^-1(u) psi(pi^-v u) over the units of O/pi^M

    Returns:
        GaussSum with v = Sw(chi) + n(psi) + 1 and M = max(a(chi), 1)
    """
    v = chi.swan + psi.level + 1
    m = max(chi.conductor, 1)
    psi_order, psi_exps = psi_exponents(psi, m, chi.swan + 1)
    chi_order = chi.unit_level
    chi_exps = chi.unit_exponents_over(m)
    level = lcm(psi_order, chi_order)
    exps = (psi_exps * (level // psi_order) - chi_exps * (level // chi_order)) % level
    counts = np.bincount(exps, minlength=level)
    return GaussSum(level, counts, v, m)


def _prefactor(chi, dx, v, m):
    """m_0 * q^(v - M) * chi(pi)^v"""
    return dx.volume * Fraction(chi.field.q) ** (v - m) * chi.pi_value ** v


def _certify(value, certify, context):
    if not certify:
        return Eps0Result(value, None, context)
    if not cyc_is_unit(value):
        raise InvariantViolation(f"epsilon_0 value {value} is not a unit of "
                                 f"Z[1/{value.p}][zeta_{value.level}] ({context})")
    return Eps0Result(value, True, context)


def epsilon0_char(chi, psi, dx, gamma=None, certify=True):
    """
    eps_0(chi, psi, dx) for a character chi of K^x

    Args:
        chi: MulChar
        psi: nontrivial AddChar on the same field
        dx: HaarMeasure
        gamma: optional KElement; only its valuation enters, which must be
            Sw(chi) + n(psi) + 1
        certify: reject a non-unit volume with ValueError, then raise
            InvariantViolation unless the value is a unit of Z[1/p][zeta_N]

    Returns:
        Eps0Result
    """
    _check_inputs(chi, psi, dx, certify)
    terms = gauss_sum(chi, psi)
    if gamma is not None and gamma.normalized().valuation != terms.gamma_valuation:
        raise ValueError(f"gamma has valuation {gamma.normalized().valuation}, "
                         f"expected {terms.gamma_valuation}")
    total = cyc_from_exponents(terms.level, terms.counts.tolist(), chi.field.p)
    value = total * _prefactor(chi, dx, terms.gamma_valuation, terms.coset_level)
    context = {'field': str(chi.field), 'char': str(chi), 'n_psi': psi.level,
               'gamma_valuation': terms.gamma_valuation, 'coset_level': terms.coset_level}
    return _certify(value, certify, context)


def epsilon0_char_naive(chi, psi, dx):
    """
    Independent evaluation of the same integral

    Enumerates every unit of O/pi^(M+1) (cosets one step finer than needed)
    and evaluates each integrand value through the KElement API.
    """
    _check_inputs(chi, psi, dx)
    v = chi.swan + psi.level + 1
    precision = max(chi.conductor, 1) + 1
    ring = quot_ring(chi.field, precision)
    roots = []
    for u in ring.units:
        x = KElement(chi.field, -v, u, precision)
        roots.append(addchar_root(psi, x))
        inverse = k_inv(x)
        order, exponent = mulchar_unit_root(chi, inverse.mantissa)
        roots.append((order, exponent))
    level = lcm(*(order for order, _ in roots))
    counts = [0] * level
    for i in range(0, len(roots), 2):
        (o1, e1), (o2, e2) = roots[i], roots[i + 1]
        counts[(e1 * (level // o1) + e2 * (level // o2)) % level] += 1
    total = cyc_from_exponents(level, counts, chi.field.p)
    return total * _prefactor(chi, dx, v, precision)


def epsilon0_unramified(theta, psi, dx):
    """Closed form -theta(pi)^(n+1) q^n m_0 for an unramified theta"""
    if not theta.is_unramified():
        raise UnsupportedError("closed form applies to unramified characters only")
    n = psi.level
    return -(theta.pi_value ** (n + 1)) * Fraction(theta.field.q) ** n * dx.volume


def epsilon0_atom(atom, psi, dx):
    """
    eps_0 of one monomial atom

    Ind_{L/K} chi_L is split as Ind(chi_L - 1_L) + Ind 1_L.  The rank-zero
    part is computed on L with psi o Tr_{L/K} and vol(O_L) = m_0; Ind 1_L is
    the sum of the unramified characters eta with eta(pi)^[L:K] = 1.
    """
    if atom.degree == 1:
        return epsilon0_char(atom.char, psi, dx, certify=False).value
    ext = atom.char.field
    psi_l = addchar_compose_trace(psi, ext)
    dx_l = HaarMeasure(ext, dx.volume)
    main = epsilon0_char(atom.char, psi_l, dx_l, certify=False).value
    correction = epsilon0_char(trivial_character(ext), psi_l, dx_l, certify=False).value
    value = main / correction
    for j in range(atom.degree):
        eta = unramified_character(atom.base, root_of_unity(atom.degree, j, atom.base.p))
        value = value * epsilon0_char(eta, psi, dx, certify=False).value
    return value


def epsilon0_virtual(rep, psi, dx, certify=True):
    """
    eps_0 of a virtual representation sum c_i [atom_i], multiplicative in the terms

    Returns:
        Eps0Result
    """
    if psi.is_trivial():
        raise ValueError("epsilon_0 needs a nontrivial additive character")
    if rep.base != psi.field or rep.base != dx.field:
        raise UnsupportedError(f"virtual representation over {rep.base}, psi over {psi.field}")
    if certify:
        _check_measure(dx)
    value = cyc_from_rational(1, rep.base.p)
    for coef, atom in rep.terms:
        atom_value = epsilon0_atom(atom, psi, dx)
        value = value * atom_value ** coef
    context = {'field': str(rep.base), 'rank': vr_rank(rep), 'swan': vr_swan(rep),
               'n_psi': psi.level, 'terms': len(rep.terms)}
    return _certify(value, certify, context)


def epsilon0_twist_formula(rep, theta, psi, dx):
    """
    Right-hand side of the unramified twist formulas

    theta a MulChar:  theta(pi)^(Sw V + rk V (n + 1)) eps_0(V)
    theta a VirtualRep W of unramified base atoms:
        det W(pi)^(Sw V + rk V (n + 1)) eps_0(V)^(rk W)
    """
    base = epsilon0_virtual(rep, psi, dx, certify=False).value
    exponent = vr_swan(rep) + vr_rank(rep) * (psi.level + 1)
    if isinstance(theta, VirtualRep):
        det = cyc_from_rational(1, rep.base.p)
        for coef, atom in theta.terms:
            if atom.degree != 1 or not atom.char.is_unramified():
                raise UnsupportedError("twisting representation must be a sum of unramified characters")
            det = det * atom.char.pi_value ** coef
        return det ** exponent * base ** vr_rank(theta)
    if not theta.is_unramified():
        raise UnsupportedError("twist formula needs an unramified character")
    return theta.pi_value ** exponent * base


def twisted_directly(rep, theta, psi, dx):
    """eps_0 of V (x) theta (or V (x) W) computed by the engine itself"""
    if isinstance(theta, VirtualRep):
        twisted = vr_tensor_unramified(rep, theta)
    else:
        twisted = vr_twist(rep, theta)
    return epsilon0_virtual(twisted, psi, dx, certify=False).value


def inertia_determinant(atom):
    """det(-Frob | atom^I): -chi(pi) for unramified chi (also after induction), else 1"""
    if atom.char.is_unramified():
        return -atom.char.pi_value
    return cyc_from_rational(1, atom.base.p)


def epsilon_full(rep, psi, dx, certify=True):
    """eps = eps_0 * det(-Frob | V^I)^-1"""
    value = epsilon0_virtual(rep, psi, dx, certify=certify).value
    for coef, atom in rep.terms:
        value = value / inertia_determinant(atom) ** coef
    return value


def explicit_inverse_check(chi, psi, dx):
    """
    eps_0(chi, psi, dx) * eps_0(chi^-1 |.|, -psi, dual dx) against q^(-rk chi^I)

    Returns:
        (first factor, second factor, identity holds)
    """
    first = epsilon0_char(chi, psi, dx).value
    partner = mulchar_abs_twist(mulchar_inverse(chi))
    second = epsilon0_char(partner, addchar_negate(psi), dual_measure(dx, psi)).value
    invariants = 1 if chi.is_unramified() else 0
    target = Fraction(chi.field.q) ** (-invariants)
    return first, second, first * second == target


def explicit_inverse_check_virtual(rep, psi, dx, residue_char_l=0):
    """The same identity for an atom sum, against q^(-rk V^I')"""
    first = epsilon0_virtual(rep, psi, dx).value
    partner = vr_abs_twist(vr_dual(rep))
    second = epsilon0_virtual(partner, addchar_negate(psi), dual_measure(dx, psi)).value
    target = Fraction(rep.base.q) ** (-vr_inertia_invariants_rank(rep, residue_char_l))
    return first, second, first * second == target
