"""
Reduction of cyclotomic coefficients modulo primes l != p

A reduction map Z[1/p][zeta_N] -> F_{l^d} is fixed by an irreducible factor g
of Phi_{N'} over F_l, N' the prime-to-l part of N; zeta_N goes to the class
of x in F_l[x]/(g).  l-power roots of unity reduce to 1, and Phi_N is a power
of Phi_{N'} mod l, so this is a ring homomorphism.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import lcm

import sympy
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_ddf_zassenhaus, gf_edf_zassenhaus, gf_from_int_poly, gf_rem

from .cyclotomic import cyclotomic_coeffs
from .epsilon import epsilon0_char, gauss_sum
from .errors import InvariantViolation, UnsupportedError
from .finite_field import FinFieldElem, check_modulus, ff_from_int, ff_generator

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ReductionMap:
    """zeta_N -> x in F_l[x]/(modulus); modulus is highest degree first"""
    N: int
    p: int
    l: int
    modulus: tuple

    @property
    def d(self):
        return len(self.modulus) - 1

    @property
    def prime_to_l_level(self):
        n = self.N
        while n % self.l == 0:
            n //= self.l
        return n

    @property
    def zeta_image(self):
        return ff_generator(self.l, self.modulus)

    @cached_property
    def zeta_powers(self):
        """Images of zeta_N^k for k = 0, ..., N - 1"""
        zeta = self.zeta_image
        powers = [ff_from_int(self.l, self.modulus, 1)]
        for _ in range(self.N - 1):
            powers.append(powers[-1] * zeta)
        return tuple(powers)

    def to_json(self):
        return {'N': self.N, 'p': self.p, 'l': self.l, 'd': self.d,
                'modulus': list(self.modulus), 'zeta_image': str(self.zeta_image)}


def _cyclotomic_mod_l(level, l):
    return gf_from_int_poly(list(reversed(cyclotomic_coeffs(level))), l)


def factor_cyclotomic_mod_l(level, l):
    """
    Irreducible factors of Phi_level over F_l (level prime to l)

    Distinct-degree splitting followed by equal-degree splitting; sorted by
    their low-degree-first coefficient lists.
    """
    poly = _cyclotomic_mod_l(level, l)
    factors = []
    for block, degree in gf_ddf_zassenhaus(poly, l, ZZ):
        if len(block) - 1 == degree:
            factors.append(block)
        else:
            factors.extend(gf_edf_zassenhaus(block, degree, l, ZZ))
    factors = [tuple(int(c) for c in g) for g in factors]
    return sorted(factors, key=lambda g: tuple(reversed(g)))


@lru_cache(maxsize=None)
def make_reduction(N, p, l, modulus=None):
    """
    Reduction map for level N

    Args:
        N: level of the cyclotomic ring
        p: banned prime
        l: residue characteristic, a prime other than p
        modulus: optional factor of Phi_{N'} mod l (highest degree first) to
            use instead of the lexicographically smallest one

    Returns:
        ReductionMap
    """
    if not sympy.isprime(l):
        raise ValueError(f"{l} is not prime")
    if l == p:
        raise UnsupportedError(f"reduction needs l different from p={p}")
    level = N
    while level % l == 0:
        level //= l
    if modulus is not None:
        modulus = check_modulus(l, modulus)
        if gf_rem(_cyclotomic_mod_l(level, l), list(modulus), l, ZZ):
            raise ValueError(f"{list(modulus)} does not divide Phi_{level} mod {l}")
    else:
        modulus = factor_cyclotomic_mod_l(level, l)[0]
    logger.debug("reduction map N=%d l=%d: modulus %s", N, l, modulus)
    return ReductionMap(N, p, l, tuple(modulus))


def reduce_rational(r, value):
    """Image of a rational with p-power denominator"""
    value_num, value_den = value.numerator, value.denominator
    if value_den % r.l == 0:
        raise InvariantViolation(f"denominator {value_den} is divisible by l={r.l}")
    return value_num * pow(value_den, -1, r.l) % r.l


def reduce_cyc(r, a):
    """
    Ring homomorphism Z[1/p][zeta_N] -> F_{l^d}

    a's level must divide r.N; a is lifted to level N first.
    """
    if a.p != r.p:
        raise ValueError(f"element has banned prime {a.p}, map has p={r.p}")
    if r.N % a.level:
        raise ValueError(f"level {a.level} does not divide the reduction level {r.N}")
    lifted = a.lift(r.N)
    coeffs = [reduce_rational(r, c) for c in lifted.coeffs]
    return FinFieldElem(r.l, r.modulus, tuple(reversed(coeffs)))


def reduce_int(r, n):
    return ff_from_int(r.l, r.modulus, n)


def reduction_level(chi, psi):
    """Smallest N carrying every root of unity in the epsilon_0 sum of chi"""
    return lcm(gauss_sum(chi, psi).level, chi.pi_value.level)


def epsilon0_mod_l(chi, psi, dx, r, char_zero=None):
    """
    eps_0(chi, psi, dx) with coefficients in F_{l^d}

    The Gauss sum histogram is pushed through r term by term: each
    zeta_level^k becomes zeta_image^(k N / level), and the measure, the power
    of q and chi(pi)^v are reduced before they multiply.

    Args:
        char_zero: optional Eps0Result of the same data; the valuation of
            gamma and the coset level used here must agree with it

    Raises:
        ValueError: r.N is not a multiple of reduction_level(chi, psi)
        InvariantViolation: the reduced value is zero, or the Swan data
            differs from the characteristic-zero computation
    """
    if chi.field.p != r.p:
        raise ValueError(f"character over p={chi.field.p}, reduction map for p={r.p}")
    terms = gauss_sum(chi, psi)
    if char_zero is not None:
        used = (char_zero.context.get('gamma_valuation'), char_zero.context.get('coset_level'))
        if used != (terms.gamma_valuation, terms.coset_level):
            raise InvariantViolation(f"mod {r.l} sum uses v={terms.gamma_valuation}, "
                                     f"M={terms.coset_level}; characteristic zero used v={used[0]}, "
                                     f"M={used[1]}")
    needed = lcm(terms.level, chi.pi_value.level)
    if r.N % needed:
        raise ValueError(f"reduction level {r.N} does not carry the roots of unity of level {needed}")
    step = r.N // terms.level
    powers = r.zeta_powers
    total = reduce_int(r, 0)
    for k, count in enumerate(terms.counts.tolist()):
        if count % r.l:
            total = total + powers[k * step] * (count % r.l)
    q_power = Fraction(chi.field.q) ** (terms.gamma_valuation - terms.coset_level)
    prefactor = (reduce_cyc(r, dx.volume)
                 * reduce_rational(r, q_power)
                 * reduce_cyc(r, chi.pi_value) ** terms.gamma_valuation)
    value = total * prefactor
    if value.is_zero():
        raise InvariantViolation(f"epsilon_0 of {chi} reduced to zero modulo {r.l}")
    return value


def reduction_commutes(chi, psi, dx, l, modulus=None, char_zero=None):
    """
    Compare epsilon0_mod_l with the reduction of the characteristic-zero value

    char_zero, an Eps0Result of epsilon0_char(chi, psi, dx), is computed when
    not given; callers looping over several l pass it in.

    Returns:
        dict with both sides, the map used, and a pass flag
    """
    N = reduction_level(chi, psi)
    r = make_reduction(N, chi.field.p, l, modulus)
    if char_zero is None:
        char_zero = epsilon0_char(chi, psi, dx)
    reduced = reduce_cyc(r, char_zero.value)
    direct = epsilon0_mod_l(chi, psi, dx, r, char_zero)
    if direct != reduced:
        logger.warning("reduction mismatch for %s mod %d: %s != %s", chi, l, direct, reduced)
    return {
        'map': r.to_json(),
        'epsilon0': str(char_zero.value),
        'reduced': str(reduced),
        'mod_l': str(direct),
        'pass': direct == reduced,
    }
