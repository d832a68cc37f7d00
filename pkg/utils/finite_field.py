"""
Finite fields F_{l^d} = F_l[x]/(g) for the mod-l reduction theory

Polynomials follow the sympy galoistools convention (dense lists, highest
degree first).  The modulus g is whatever irreducible factor the reduction
map selected, so the class of x is the image of the root of unity.
"""
import logging
from dataclasses import dataclass

from sympy.polys.domains import ZZ
from sympy.polys.galoistools import (
    gf_add, gf_sub, gf_mul, gf_rem, gf_neg, gf_pow_mod, gf_strip, gf_from_int_poly,
    gf_irreducible_p,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FinFieldElem:
    """Element of F_l[x]/(modulus); rep is reduced, highest degree first"""
    l: int
    modulus: tuple
    rep: tuple

    def __post_init__(self):
        rep = gf_rem(gf_from_int_poly(list(self.rep), self.l), list(self.modulus), self.l, ZZ)
        object.__setattr__(self, 'rep', tuple(int(c) for c in gf_strip(rep)))

    @property
    def d(self):
        return len(self.modulus) - 1

    @property
    def field_size(self):
        return self.l ** self.d

    def _check(self, other):
        if isinstance(other, int):
            return ff_from_int(self.l, self.modulus, other)
        if not isinstance(other, FinFieldElem):
            return NotImplemented
        if other.l != self.l or other.modulus != self.modulus:
            raise ValueError(f"elements of different finite fields: {self.modulus} mod {self.l} "
                             f"vs {other.modulus} mod {other.l}")
        return other

    def _make(self, rep):
        return FinFieldElem(self.l, self.modulus, tuple(rep))

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return self._make(gf_add(list(self.rep), list(other.rep), self.l, ZZ))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return self._make(gf_sub(list(self.rep), list(other.rep), self.l, ZZ))

    def __neg__(self):
        return self._make(gf_neg(list(self.rep), self.l, ZZ))

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        product = gf_mul(list(self.rep), list(other.rep), self.l, ZZ)
        return self._make(gf_rem(product, list(self.modulus), self.l, ZZ))

    __rmul__ = __mul__

    def __pow__(self, exponent):
        exponent = int(exponent)
        if exponent < 0:
            return self.inverse() ** (-exponent)
        return self._make(gf_pow_mod(list(self.rep), exponent, list(self.modulus), self.l, ZZ))

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("zero has no inverse in a finite field")
        return self ** (self.field_size - 2)

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def is_zero(self):
        return not self.rep

    def frobenius(self):
        """x -> x^l"""
        return self ** self.l

    def multiplicative_order(self):
        if self.is_zero():
            raise ValueError("zero has no multiplicative order")
        order = 1
        power = self
        while power != ff_from_int(self.l, self.modulus, 1):
            power = power * self
            order += 1
        return order

    def coefficients(self):
        """Low-degree-first coefficient list padded to length d"""
        low = list(reversed(self.rep))
        return low + [0] * (self.d - len(low))

    def __str__(self):
        if self.d == 1:
            return str(self.rep[0] if self.rep else 0)
        terms = []
        for i, c in enumerate(self.coefficients()):
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                power = "w" if i == 1 else f"w^{i}"
                terms.append(power if c == 1 else f"{c}*{power}")
        return " + ".join(terms) if terms else "0"

    def to_json(self):
        return {'l': self.l, 'modulus': list(self.modulus), 'coeffs': self.coefficients(),
                'text': str(self)}


def ff_from_int(l, modulus, n):
    return FinFieldElem(l, tuple(modulus), (int(n) % l,))


def ff_generator(l, modulus):
    """The class of x in F_l[x]/(modulus)"""
    return FinFieldElem(l, tuple(modulus), (1, 0))


def check_modulus(l, modulus):
    """Raise ValueError unless modulus is a monic irreducible polynomial over F_l"""
    poly = gf_from_int_poly(list(modulus), l)
    if not poly or poly[0] != 1 or len(poly) != len(modulus):
        raise ValueError(f"modulus {list(modulus)} is not monic over F_{l}")
    if not gf_irreducible_p(poly, l, ZZ):
        raise ValueError(f"modulus {list(modulus)} is reducible over F_{l}")
    return tuple(int(c) for c in poly)
