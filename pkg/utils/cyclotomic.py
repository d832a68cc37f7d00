"""
Exact arithmetic in cyclotomic coefficient rings Z[1/p][zeta_N]

Elements live in the power basis 1, z, ..., z^(phi(N)-1) reduced modulo the
N-th cyclotomic polynomial.  Coefficients are Fractions whose denominators are
powers of the banned prime p.  Levels are harmonized by lifting to the lcm,
with zeta_N identified with zeta_L^(L/N); no descent is ever attempted.
"""
import logging
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

import numpy as np
import sympy
from sympy.ntheory.modular import crt

logger = logging.getLogger(__name__)

# Norm primes stay below 2^26 so that products of two residues fit in int64.
_PRIME_CEILING = 1 << 26
_PRIME_BANK = {}
_BANK_LOCK = threading.Lock()


def is_power_of(n, p):
    """Return True if |n| is p^k for some k >= 0"""
    n = abs(int(n))
    if n == 0:
        return False
    while n % p == 0:
        n //= p
    return n == 1


@lru_cache(maxsize=None)
def cyclotomic_coeffs(level):
    """Integer coefficients of Phi_N, lowest degree first (monic)"""
    x = sympy.Symbol('x')
    poly = sympy.Poly(sympy.cyclotomic_poly(level, x), x)
    return tuple(int(c) for c in reversed(poly.all_coeffs()))


def degree(level):
    return len(cyclotomic_coeffs(level)) - 1


@lru_cache(maxsize=None)
def power_table(level):
    """
    Reduction table of the powers of zeta_N

    Row k holds the power-basis coordinates of z^k mod Phi_N for
    k = 0, ..., N - 1.  Stored with object dtype so that sums of big-integer
    multiples of rows stay exact.
    """
    phi = cyclotomic_coeffs(level)
    deg = len(phi) - 1
    row = [0] * deg
    row[0] = 1
    rows = []
    for _ in range(level):
        rows.append(list(row))
        top = row[-1]
        row = [0] + row[:-1]
        if top:
            row = [r - top * c for r, c in zip(row, phi[:-1])]
    logger.debug("power table built for level %d (degree %d)", level, deg)
    return np.array(rows, dtype=object).reshape(level, deg)


@lru_cache(maxsize=None)
def _mobius(n):
    exponents = sympy.factorint(n)
    if any(e > 1 for e in exponents.values()):
        return 0
    return -1 if len(exponents) % 2 else 1


@lru_cache(maxsize=None)
def _normalized_trace_weights(level):
    # Tr(z^i) / phi(N) = mu(N/g) / phi(N/g) with g = gcd(i, N)
    weights = []
    for i in range(degree(level)):
        g = gcd(i, level)
        weights.append(Fraction(_mobius(level // g), int(sympy.totient(level // g))))
    return tuple(weights)


def _fold_integral(level, entries):
    """Sum of c * (row k of the power table) over (k, c) pairs with integer c"""
    table = power_table(level)
    total = np.zeros(table.shape[1], dtype=object)
    for k, c in entries:
        total += c * table[k]
    return total


def _fold(level, vector, p):
    """Reduce a length-N vector of exponent weights to a CycNum"""
    entries = [(k, Fraction(c)) for k, c in enumerate(vector) if c]
    den = lcm(*(c.denominator for _, c in entries))
    coeffs = _fold_integral(level, [(k, int(c * den)) for k, c in entries])
    return CycNum(level, tuple(Fraction(int(c), den) for c in coeffs), p)


@dataclass(frozen=True, eq=False)
class CycNum:
    """Element of Z[1/p][zeta_N] in canonical reduced power-basis form"""
    level: int
    coeffs: tuple
    p: int

    def __post_init__(self):
        if self.level < 1:
            raise ValueError(f"level must be positive, got {self.level}")
        coeffs = tuple(Fraction(c) for c in self.coeffs)
        if len(coeffs) != degree(self.level):
            raise ValueError(
                f"level {self.level} needs {degree(self.level)} coefficients, got {len(coeffs)}")
        for c in coeffs:
            if c.denominator != 1 and not is_power_of(c.denominator, self.p):
                raise ValueError(f"coefficient {c} has a denominator that is not a power of {self.p}")
        object.__setattr__(self, 'coeffs', coeffs)

    # -- structure -------------------------------------------------------
    def is_zero(self):
        return not any(self.coeffs)

    def is_rational(self):
        return not any(self.coeffs[1:])

    def rational_value(self):
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def lift(self, level):
        """Re-express at a multiple of the current level"""
        if level == self.level:
            return self
        if level % self.level:
            raise ValueError(f"cannot lift level {self.level} to {level}")
        step = level // self.level
        vector = [0] * level
        for i, c in enumerate(self.coeffs):
            if c:
                vector[i * step] = c
        return _fold(level, vector, self.p)

    def _coerce(self, other):
        if isinstance(other, CycNum):
            if other.p != self.p:
                raise ValueError(f"mismatched banned primes {self.p} and {other.p}")
            return other
        if isinstance(other, (int, Fraction)):
            return cyc_from_rational(other, self.p)
        return NotImplemented

    def _harmonize(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented, NotImplemented
        common = lcm(self.level, other.level)
        return self.lift(common), other.lift(common)

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        a, b = self._harmonize(other)
        if a is NotImplemented:
            return NotImplemented
        return CycNum(a.level, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)), a.p)

    __radd__ = __add__

    def __neg__(self):
        return CycNum(self.level, tuple(-c for c in self.coeffs), self.p)

    def __sub__(self, other):
        a, b = self._harmonize(other)
        if a is NotImplemented:
            return NotImplemented
        return CycNum(a.level, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)), a.p)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._harmonize(other)
        if a is NotImplemented:
            return NotImplemented
        if b.is_rational():
            a, b = b, a
        if a.is_rational():
            scale = a.coeffs[0]
            return CycNum(b.level, tuple(scale * c for c in b.coeffs), b.p)
        level = a.level
        left, left_den = _integral(a)
        right, right_den = _integral(b)
        vector = [0] * level
        for i, x in enumerate(left):
            if not x:
                continue
            for j, y in enumerate(right):
                if y:
                    vector[(i + j) % level] += x * y
        folded = _fold_integral(level, [(k, c) for k, c in enumerate(vector) if c])
        den = left_den * right_den
        return CycNum(level, tuple(Fraction(int(c), den) for c in folded), a.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * cyc_inv(other)

    def __rtruediv__(self, other):
        return cyc_inv(self) * other

    def __pow__(self, exponent):
        exponent = int(exponent)
        base = self
        if exponent < 0:
            base = cyc_inv(self)
            exponent = -exponent
        result = cyc_from_rational(1, self.p, self.level)
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    # -- comparison ------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, CycNum) or other.p != self.p:
            return NotImplemented if not isinstance(other, CycNum) else False
        a, b = self._harmonize(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        # The normalized trace does not depend on the level of representation.
        weights = _normalized_trace_weights(self.level)
        return hash((self.p, sum(c * w for c, w in zip(self.coeffs, weights))))

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
                continue
            power = f"z{self.level}" if i == 1 else f"z{self.level}^{i}"
            if c == 1:
                terms.append(power)
            elif c == -1:
                terms.append(f"-{power}")
            else:
                terms.append(f"{c}*{power}")
        if not terms:
            return "0"
        return " + ".join(terms).replace("+ -", "- ")

    def __repr__(self):
        return f"CycNum({self}, level={self.level}, p={self.p})"


def _integral(a):
    """Scale coefficients to integers; returns (ints, common denominator)"""
    den = lcm(*(c.denominator for c in a.coeffs)) if a.coeffs else 1
    return [int(c * den) for c in a.coeffs], den


def cyc_from_rational(value, p, level=1):
    value = Fraction(value)
    coeffs = [Fraction(0)] * degree(level)
    coeffs[0] = value
    return CycNum(level, tuple(coeffs), p)


def cyc_from_exponents(level, counts, p):
    """
    Build sum_k counts[k] * zeta_N^k

    Args:
        level: the root-of-unity order N
        counts: length-N sequence of integer or Fraction weights
        p: banned prime

    Returns:
        CycNum at level N
    """
    if len(counts) != level:
        raise ValueError(f"expected {level} exponent weights, got {len(counts)}")
    return _fold(level, [int(c) if isinstance(c, (np.integer,)) else c for c in counts], p)


def root_of_unity(order, exponent, p):
    """Canonical CycNum for zeta_order^exponent at level order"""
    vector = [0] * order
    vector[exponent % order] = 1
    return _fold(order, vector, p)


def cyc_arith(a, b, op):
    """
    Ring operation on two CycNums after lifting both to the lcm level

    Args:
        a, b: CycNum with the same banned prime
        op: 'add', 'sub' or 'mul'

    Returns:
        canonical reduced CycNum
    """
    if a.p != b.p:
        raise ValueError(f"mismatched banned primes {a.p} and {b.p}")
    if op == 'add':
        return a + b
    if op == 'sub':
        return a - b
    if op == 'mul':
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def _norm_prime(level, index):
    """The index-th prime l = 1 mod N (descending from 2^26) with its primitive N-th roots"""
    with _BANK_LOCK:
        bank, cursor = _PRIME_BANK.setdefault(level, ([], [(_PRIME_CEILING - 1) // level]))
        while len(bank) <= index:
            j = cursor[0]
            cursor[0] -= 1
            if j < 1:
                raise RuntimeError(f"ran out of norm primes for level {level}")
            ell = 1 + j * level
            if not sympy.isprime(ell):
                continue
            g = int(sympy.primitive_root(ell))
            w = pow(g, (ell - 1) // level, ell)
            roots = np.array(
                [pow(w, k, ell) for k in range(1, level + 1) if gcd(k, level) == 1],
                dtype=np.int64)
            bank.append((ell, roots))
            logger.debug("norm prime %d added for level %d", ell, level)
        return bank[index]


def cyc_norm(a):
    """
    Field norm from Q(zeta_N) to Q

    Computed as Res(Phi_N, A) with Phi_N monic as the first argument, which
    equals the product of A over the primitive N-th roots of unity with no
    extra sign.  The resultant is evaluated multimodularly: A is evaluated at
    the primitive N-th roots modulo primes l = 1 (mod N) and the residues are
    recombined by CRT past the bound (sum |a_i|)^phi(N).

    Args:
        a: CycNum

    Returns:
        Fraction
    """
    deg = len(a.coeffs)
    if a.is_zero():
        return Fraction(0)
    if deg == 1:
        return a.coeffs[0]
    ints, den = _integral(a)
    bound = 2 * sum(abs(c) for c in ints) ** deg
    moduli, residues = [], []
    modulus = 1
    index = 0
    while modulus <= bound:
        ell, roots = _norm_prime(a.level, index)
        index += 1
        values = np.zeros(deg, dtype=np.int64)
        for c in reversed(ints):
            values = (values * roots + (c % ell)) % ell
        residue = 1
        for v in values.tolist():
            residue = residue * v % ell
        moduli.append(ell)
        residues.append(residue)
        modulus *= ell
    value, _ = crt(moduli, residues, symmetric=True)
    return Fraction(int(value), den ** deg)


def cyc_is_unit(a):
    """
    True iff a is a unit of Z[zeta_N][1/p]

    The coordinates already have p-power denominators, so a is a unit exactly
    when the norm of the numerator-scaled element is +-p^k.
    """
    if a.is_zero():
        return False
    norm = cyc_norm(a)
    return is_power_of(norm.numerator, a.p) and is_power_of(norm.denominator, a.p)


def cyc_inv(a):
    """
    Inverse in Z[1/p][zeta_N]

    Raises:
        ZeroDivisionError: a is zero
        ValueError: a is not invertible in Z[1/p][zeta_N]
    """
    if a.is_zero():
        raise ZeroDivisionError("zero has no inverse")
    support = [(i, c) for i, c in enumerate(a.coeffs) if c]
    if len(support) == 1:
        i, c = support[0]
        inverse = Fraction(1) / c
        if inverse.denominator != 1 and not is_power_of(inverse.denominator, a.p):
            raise ValueError(f"{a} is not invertible in Z[1/{a.p}][zeta_{a.level}]")
        return root_of_unity(a.level, -i, a.p).lift(a.level) * inverse
    x = sympy.Symbol('x')
    numerator = sympy.Poly(
        [sympy.Rational(c.numerator, c.denominator) for c in reversed(a.coeffs)], x, domain=sympy.QQ)
    modulus = sympy.Poly(list(reversed(cyclotomic_coeffs(a.level))), x, domain=sympy.QQ)
    inverse = sympy.invert(numerator, modulus)
    coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(inverse.all_coeffs())]
    coeffs += [Fraction(0)] * (degree(a.level) - len(coeffs))
    try:
        return CycNum(a.level, tuple(coeffs), a.p)
    except ValueError:
        raise ValueError(f"{a} is not invertible in Z[1/{a.p}][zeta_{a.level}]") from None


def cyc_galois(a, k):
    """Apply the automorphism zeta_N -> zeta_N^k (k prime to N)"""
    if gcd(k, a.level) != 1:
        raise ValueError(f"{k} is not prime to the level {a.level}")
    vector = [0] * a.level
    for i, c in enumerate(a.coeffs):
        if c:
            vector[(i * k) % a.level] += c
    return _fold(a.level, vector, a.p)


def root_of_unity_index(a, max_level=1000):
    """
    Return (order, exponent) if a is a root of unity zeta_order^exponent at
    a's level (or its double), else None.  Only used for serialization.
    """
    level = a.level if a.level % 2 == 0 else 2 * a.level
    if level > max_level:
        return None
    lifted = a.lift(level)
    for k in range(level):
        if root_of_unity(level, k, a.p) == lifted:
            g = gcd(k, level)
            return level // g, k // g
    return None


def cyc_to_json(a):
    """Serialize as {level, p, coeffs: ["num/den", ...]}"""
    record = {
        'level': a.level,
        'p': a.p,
        'coeffs': [f"{c.numerator}/{c.denominator}" for c in a.coeffs],
    }
    root = root_of_unity_index(a)
    if root is not None:
        record['root'] = list(root)
    return record


def cyc_from_json(data, p=None):
    """
    Parse a CycNum from its JSON form

    Accepts {level, p, coeffs}, {"root": [order, exponent]}, an integer, or a
    rational string such as "1/3".  p is required for the shorthand forms.
    """
    if isinstance(data, dict):
        banned = data.get('p', p)
        if banned is None:
            raise ValueError("banned prime p is missing")
        if 'root' in data:
            order, exponent = data['root']
            return root_of_unity(int(order), int(exponent), int(banned))
        coeffs = tuple(Fraction(str(c)) for c in data['coeffs'])
        return CycNum(int(data['level']), coeffs, int(banned))
    if p is None:
        raise ValueError("banned prime p is missing")
    return cyc_from_rational(Fraction(str(data)), int(p))
