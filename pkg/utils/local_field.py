"""
Local fields through their finite quotient rings O_K / pi^m

Two kinds of field are modelled:
    padic   - the degree-f unramified extension of Q_p, uniformizer p.
              O_K / p^m is the Galois ring GR(p^m, f), written in the power
              basis of a Teichmueller root of unity alpha.
    laurent - F_q((t)) with uniformizer t.  O_K / t^m = F_q[t] / t^m,
              elements are tuples of m residue-field indices.

Everything here is finite and exact; unit groups are enumerated and their
discrete logarithms tabulated eagerly.
"""
import logging
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import lcm, prod

import numpy as np
import sympy
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_irreducible_p

from .errors import InvariantViolation, PrecisionError, UnsupportedError

logger = logging.getLogger(__name__)

FIELD_KINDS = ('padic', 'laurent')

# Monic irreducible polynomials over F_p fixing the residue-field basis,
# highest degree first.  Keys are (p, f).
CONWAY_POLYNOMIALS = {
    (2, 1): (1, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 0, 1, 1),
    (2, 4): (1, 0, 0, 1, 1),
    (2, 6): (1, 0, 1, 1, 0, 1, 1),
    (3, 1): (1, 1),
    (3, 2): (1, 2, 2),
    (3, 3): (1, 0, 2, 1),
    (3, 4): (1, 2, 0, 0, 2),
    (3, 6): (1, 0, 2, 0, 1, 2, 2),
    (5, 1): (1, 3),
    (5, 2): (1, 4, 2),
    (5, 3): (1, 0, 3, 3),
    (5, 4): (1, 0, 4, 4, 2),
    (7, 1): (1, 4),
    (7, 2): (1, 6, 3),
    (7, 3): (1, 6, 0, 4),
    (11, 1): (1, 9),
    (11, 2): (1, 7, 2),
    (13, 1): (1, 11),
    (13, 2): (1, 12, 2),
}

FIELD_PATTERN = re.compile(
    r'^\s*(?P<kind>padic|laurent)\s*:\s*p\s*=\s*(?P<p>\d+)\s*(?:,\s*f\s*=\s*(?P<f>\d+)\s*)?$',
    re.IGNORECASE)


@dataclass(frozen=True)
class LocalFieldSpec:
    """A nonarchimedean local field: unramified over Q_p, or F_q((t))"""
    kind: str
    p: int
    f: int = 1

    def __post_init__(self):
        if self.kind not in FIELD_KINDS:
            raise ValueError(f"unknown field kind {self.kind!r}; expected one of {FIELD_KINDS}")
        if not sympy.isprime(self.p):
            raise ValueError(f"residue characteristic {self.p} is not prime")
        if self.f < 1:
            raise ValueError(f"residue degree must be positive, got {self.f}")

    @property
    def q(self):
        return self.p ** self.f

    @property
    def descriptor(self):
        return f"{self.kind}:p={self.p},f={self.f}"

    def __str__(self):
        return self.descriptor


def parse_field(descriptor):
    """Parse "padic:p=3,f=1" / "laurent:p=2,f=2" (f defaults to 1)"""
    match = FIELD_PATTERN.match(str(descriptor))
    if not match:
        raise ValueError(f"cannot parse field descriptor {descriptor!r}")
    return LocalFieldSpec(match.group('kind').lower(), int(match.group('p')),
                          int(match.group('f') or 1))


def unramified_extension(field, degree):
    """The unramified extension of the given degree"""
    if degree < 1:
        raise ValueError(f"extension degree must be positive, got {degree}")
    return LocalFieldSpec(field.kind, field.p, field.f * degree)


def relative_degree(base, ext):
    """[L:K] for L unramified over K; UnsupportedError if L is not such an extension"""
    if base.kind != ext.kind or base.p != ext.p or ext.f % base.f:
        raise UnsupportedError(f"{ext} is not an unramified extension of {base}")
    return ext.f // base.f


# ----------------------------
# Polynomial helpers (coefficients low degree first)
# ----------------------------
def _mulmod(a, b, modulus, mod):
    """Product of two length-f coordinate vectors modulo a monic polynomial"""
    f = len(modulus) - 1
    product = [0] * (2 * f - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    product[i + j] += x * y
    for k in range(2 * f - 2, f - 1, -1):
        c = product[k]
        if c:
            for i in range(f):
                product[k - f + i] -= c * modulus[i]
    return tuple(c % mod for c in product[:f])


def _powmod(a, n, modulus, mod):
    f = len(modulus) - 1
    result = tuple([1 % mod] + [0] * (f - 1))
    base = a
    while n:
        if n & 1:
            result = _mulmod(result, base, modulus, mod)
        n >>= 1
        if n:
            base = _mulmod(base, base, modulus, mod)
    return result


def _search_irreducible(p, f):
    """Lexicographically first monic irreducible polynomial of degree f over F_p"""
    for index in range(p ** f):
        tail = []
        for _ in range(f):
            tail.append(index % p)
            index //= p
        poly = [1] + list(reversed(tail))
        if poly[-1] and gf_irreducible_p(poly, p, ZZ):
            return tuple(poly)
    raise InvariantViolation(f"no irreducible polynomial of degree {f} over F_{p}")


@lru_cache(maxsize=None)
def residue_modulus(p, f):
    """Fixed irreducible polynomial defining F_{p^f}, highest degree first"""
    poly = CONWAY_POLYNOMIALS.get((p, f))
    if poly is None or not gf_irreducible_p(list(poly), p, ZZ):
        poly = _search_irreducible(p, f)
        logger.debug("no tabulated polynomial for (p=%d, f=%d); using %s", p, f, poly)
    return poly


@lru_cache(maxsize=None)
def teichmuller_modulus(p, f, m):
    """
    Minimal polynomial over Z/p^m of the Teichmueller lift of a root of the
    residue polynomial, lowest degree first (monic, length f + 1).

    The lift is x^(q^(m-1)) computed in Z/p^m[x]/(C) for C the residue
    polynomial read with integer coefficients; its minimal polynomial is the
    product over its Frobenius conjugates tau^(p^j).  The result reduces to
    the residue polynomial mod p and to the precision-m' modulus mod p^m'.
    """
    base = tuple(reversed(residue_modulus(p, f)))
    mod = p ** m
    if f == 1:
        generator = ((-base[0]) % mod,)
    else:
        generator = tuple(1 if i == 1 else 0 for i in range(f))
    tau = _powmod(generator, p ** (f * (m - 1)), base, mod)
    conjugates = [tau]
    for _ in range(f - 1):
        conjugates.append(_powmod(conjugates[-1], p, base, mod))

    zero = tuple([0] * f)
    one = tuple([1 % mod] + [0] * (f - 1))
    poly = [one]
    for c in conjugates:
        shifted = [zero] + poly
        for i, coef in enumerate(poly):
            term = _mulmod(c, coef, base, mod)
            shifted[i] = tuple((s - t) % mod for s, t in zip(shifted[i], term))
        poly = shifted
    coeffs = []
    for coef in poly:
        if any(coef[1:]):
            raise InvariantViolation(f"Teichmueller minimal polynomial for (p={p}, f={f}) "
                                     f"has non-constant coefficients")
        coeffs.append(coef[0])
    return tuple(coeffs)


# ----------------------------
# Quotient rings
# ----------------------------
class QuotRing:
    """
    The finite ring O_K / pi^m

    Elements are plain tuples of ints; the ring object carries the
    arithmetic.  Enumeration order (element_at / elements) is fixed and
    every derived table follows it.
    """

    def __init__(self, field, m):
        if m < 1:
            raise ValueError(f"precision must be at least 1, got {m}")
        self.field = field
        self.m = m
        self.p = field.p
        self.q = field.q
        self.size = self.q ** m
        self.unit_count = self.q ** m - self.q ** (m - 1)

    def __repr__(self):
        return f"QuotRing({self.field}, m={self.m})"

    # generic operations -------------------------------------------------
    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def pow(self, x, n):
        if n < 0:
            return self.pow(self.inv(x), -n)
        result = self.one
        base = x
        while n:
            if n & 1:
                result = self.mul(result, base)
            n >>= 1
            if n:
                base = self.mul(base, base)
        return result

    def inv(self, x):
        if not self.is_unit(x):
            raise ValueError(f"{x} is not a unit of {self}")
        return self.pow(x, self.unit_count - 1)

    def elements(self):
        for index in range(self.size):
            yield self.element_at(index)

    @cached_property
    def units(self):
        return tuple(x for x in self.elements() if self.is_unit(x))

    @cached_property
    def unit_coordinates(self):
        """Integer matrix whose rows are the coordinate tuples of self.units"""
        return np.array(self.units, dtype=np.int64).reshape(len(self.units), -1)

    def frobenius_power(self, x, power):
        for _ in range(power):
            x = self.frobenius(x)
        return x

    def canonical(self, x):
        """Coerce a coordinate tuple from any precision into this ring"""
        if len(x) >= len(self.zero):
            return self.reduce_from(x)
        return self.lift_from(x)


class GaloisRing(QuotRing):
    """GR(p^m, f) = O_K / p^m for K unramified of degree f over Q_p"""

    def __init__(self, field, m):
        super().__init__(field, m)
        self.f = field.f
        self.mod = self.p ** m
        self.modulus = teichmuller_modulus(self.p, self.f, m)
        self.zero = tuple([0] * self.f)
        self.one = tuple([1 % self.mod] + [0] * (self.f - 1))
        alpha = tuple(1 if i == 1 else 0 for i in range(self.f)) if self.f > 1 \
            else ((-self.modulus[0]) % self.mod,)
        powers = [self.one]
        for _ in range(self.p * self.f):
            powers.append(self.mul(powers[-1], alpha))
        self.alpha = alpha
        # sigma(alpha^i) = alpha^(p*i)
        self.frobenius_images = tuple(powers[self.p * i] for i in range(self.f))
        basis = [powers[i] for i in range(self.f)]
        self.trace_basis = tuple(self._trace_element(b)[0] for b in basis)

    def add(self, x, y):
        return tuple((a + b) % self.mod for a, b in zip(x, y))

    def neg(self, x):
        return tuple((-a) % self.mod for a in x)

    def mul(self, x, y):
        if self.f == 1:
            return (x[0] * y[0] % self.mod,)
        return _mulmod(x, y, self.modulus, self.mod)

    def from_int(self, n):
        return tuple([int(n) % self.mod] + [0] * (self.f - 1))

    def is_unit(self, x):
        return any(c % self.p for c in x)

    def valuation(self, x):
        best = self.m
        for c in x:
            if c:
                v = 0
                while c % self.p == 0:
                    c //= self.p
                    v += 1
                best = min(best, v)
        return best

    def shift_down(self, x, k):
        """x / p^k as an element of precision m - k (x must be divisible by p^k)"""
        if self.valuation(x) < k:
            raise ValueError(f"{x} is not divisible by p^{k}")
        step = self.p ** k
        return tuple((c // step) % (self.mod // step) for c in x)

    def shift_up(self, x, k):
        step = self.p ** k
        return tuple(c * step % self.mod for c in x)

    def reduce_from(self, x):
        return tuple(int(c) % self.mod for c in x)

    def lift_from(self, x):
        return tuple(int(c) % self.mod for c in x)

    def frobenius(self, x):
        result = self.zero
        for c, image in zip(x, self.frobenius_images):
            if c:
                result = self.add(result, tuple(c * e for e in image))
        return result

    def _trace_element(self, x):
        total = self.zero
        y = x
        for _ in range(self.f):
            total = self.add(total, y)
            y = self.frobenius(y)
        return total

    def trace_to_prime(self, x):
        """Tr from GR(p^m, f) to Z/p^m, as an int in [0, p^m)"""
        return sum(c * t for c, t in zip(x, self.trace_basis)) % self.mod

    def residue_index(self, x):
        return sum((c % self.p) * self.p ** i for i, c in enumerate(x))

    def element_at(self, index):
        coords = []
        for _ in range(self.f):
            coords.append(index % self.mod)
            index //= self.mod
        return tuple(coords)

    def index_of(self, x):
        return sum(c * self.mod ** i for i, c in enumerate(x))


@dataclass(frozen=True, eq=False)
class ResidueField:
    """Addition/multiplication tables of F_q indexed like GR(p, f)"""
    p: int
    f: int
    ring: GaloisRing
    add: np.ndarray
    mul: np.ndarray
    neg: np.ndarray
    frob: np.ndarray
    trace: np.ndarray

    @property
    def q(self):
        return self.p ** self.f


@lru_cache(maxsize=None)
def residue_field(p, f):
    ring = GaloisRing(LocalFieldSpec('padic', p, f), 1)
    q = ring.size
    elements = [ring.element_at(i) for i in range(q)]
    add = np.zeros((q, q), dtype=np.int64)
    mul = np.zeros((q, q), dtype=np.int64)
    for i, x in enumerate(elements):
        for j in range(i, q):
            y = elements[j]
            add[i, j] = add[j, i] = ring.index_of(ring.add(x, y))
            mul[i, j] = mul[j, i] = ring.index_of(ring.mul(x, y))
    neg = np.array([ring.index_of(ring.neg(x)) for x in elements], dtype=np.int64)
    frob = np.array([ring.index_of(ring.frobenius(x)) for x in elements], dtype=np.int64)
    trace = np.array([ring.trace_to_prime(x) for x in elements], dtype=np.int64)
    logger.debug("residue field tables built for F_%d", q)
    return ResidueField(p, f, ring, add, mul, neg, frob, trace)


class TruncatedSeriesRing(QuotRing):
    """F_q[t] / t^m = O_K / t^m for K = F_q((t))"""

    def __init__(self, field, m):
        super().__init__(field, m)
        self.residue = residue_field(field.p, field.f)
        self.zero = tuple([0] * m)
        self.one = tuple([1] + [0] * (m - 1))
        self._add = self.residue.add.tolist()
        self._mul = self.residue.mul.tolist()
        self._neg = self.residue.neg.tolist()
        self._frob = self.residue.frob.tolist()

    def add(self, x, y):
        table = self._add
        return tuple(table[a][b] for a, b in zip(x, y))

    def neg(self, x):
        return tuple(self._neg[a] for a in x)

    def mul(self, x, y):
        add, mul = self._add, self._mul
        result = [0] * self.m
        for i, a in enumerate(x):
            if not a:
                continue
            for j in range(self.m - i):
                b = y[j]
                if b:
                    result[i + j] = add[result[i + j]][mul[a][b]]
        return tuple(result)

    def from_int(self, n):
        return tuple([int(n) % self.p] + [0] * (self.m - 1))

    def is_unit(self, x):
        return x[0] != 0

    def valuation(self, x):
        for i, a in enumerate(x):
            if a:
                return i
        return self.m

    def shift_down(self, x, k):
        if self.valuation(x) < k:
            raise ValueError(f"{x} is not divisible by t^{k}")
        return tuple(x[k:])

    def shift_up(self, x, k):
        return tuple([0] * k + list(x[:self.m - k]))

    def reduce_from(self, x):
        return tuple(int(a) for a in x[:self.m])

    def lift_from(self, x):
        return tuple(int(a) for a in x) + tuple([0] * (self.m - len(x)))

    def frobenius(self, x):
        return tuple(self._frob[a] for a in x)

    def residue_index(self, x):
        return x[0]

    def element_at(self, index):
        coords = []
        for _ in range(self.m):
            coords.append(index % self.q)
            index //= self.q
        return tuple(coords)

    def index_of(self, x):
        return sum(a * self.q ** i for i, a in enumerate(x))


@lru_cache(maxsize=None)
def quot_ring(field, m):
    """
    The ring O_K / pi^m

    Args:
        field: LocalFieldSpec
        m: precision exponent, at least 1

    Returns:
        GaloisRing for padic fields, TruncatedSeriesRing for laurent fields
    """
    if field.kind == 'padic':
        ring = GaloisRing(field, m)
    else:
        ring = TruncatedSeriesRing(field, m)
    logger.debug("quotient ring %s built (%d elements)", ring, ring.size)
    return ring


# ----------------------------
# Unit groups
# ----------------------------
def _power(x, n, mul, identity):
    result = identity
    base = x
    while n:
        if n & 1:
            result = mul(result, base)
        n >>= 1
        if n:
            base = mul(base, base)
    return result


def _quotient_order(x, bound, subgroup, mul, identity, primes):
    order = bound
    for prime in primes:
        while order % prime == 0 and _power(x, order // prime, mul, identity) in subgroup:
            order //= prime
    return order


def invariant_basis(elements, mul, identity):
    """
    Independent generators of a finite abelian group

    Greedy: repeatedly take the first element (in the given order) of maximal
    order modulo the subgroup generated so far, then correct it by an element
    of that subgroup so that its order equals its quotient order.  The
    subgroup generated at every stage is a direct summand, which makes the
    correction exact.

    Args:
        elements: every group element, in enumeration order
        mul: group operation
        identity: neutral element

    Returns:
        tuple (generators, orders, table) where table maps each element to
        its exponent tuple on the generators
    """
    elements = list(elements)
    total = len(elements)
    generators, orders = [], []
    subgroup = {identity: ()}
    while len(subgroup) < total:
        quotient = total // len(subgroup)
        primes = sorted(sympy.factorint(quotient))
        best, best_order = None, 0
        for x in elements:
            if x in subgroup:
                continue
            r = _quotient_order(x, quotient, subgroup, mul, identity, primes)
            if r > best_order:
                best, best_order = x, r
                if r == quotient:
                    break
        image = subgroup[_power(best, best_order, mul, identity)]
        correction = identity
        for g, n, e in zip(generators, orders, image):
            if e % best_order:
                raise InvariantViolation(f"exponent {e} not divisible by {best_order} "
                                         f"while building an invariant basis")
            correction = mul(correction, _power(g, (n - e // best_order) % n, mul, identity))
        generator = mul(best, correction)
        extended = {}
        power = identity
        for k in range(best_order):
            for h, exps in subgroup.items():
                extended[mul(h, power)] = exps + (k,)
            power = mul(power, generator)
        subgroup = extended
        generators.append(generator)
        orders.append(best_order)
    return generators, orders, subgroup


@dataclass(frozen=True, eq=False)
class UnitGroupPresentation:
    """(O_K / pi^m)^x as a product of cyclic groups, with a full dlog table"""
    ring: QuotRing
    generators: tuple
    orders: tuple
    units: tuple
    index: dict
    dlog_matrix: np.ndarray

    def dlog(self, u):
        try:
            return tuple(int(e) for e in self.dlog_matrix[self.index[u]])
        except KeyError:
            raise ValueError(f"{u} is not a unit of {self.ring}") from None

    def exp(self, exponents):
        result = self.ring.one
        for g, e in zip(self.generators, exponents):
            result = self.ring.mul(result, self.ring.pow(g, int(e)))
        return result

    @property
    def order(self):
        return prod(self.orders)

    @property
    def exponent(self):
        return lcm(*self.orders) if self.orders else 1


@lru_cache(maxsize=None)
def unit_group(field, m):
    """
    Presentation of (O_K / pi^m)^x for m >= 0 (m = 0 gives the trivial group)

    Returns:
        UnitGroupPresentation whose dlog table is complete on construction
    """
    if m == 0:
        ring = quot_ring(field, 1)
        return UnitGroupPresentation(ring, (), (), (ring.one,), {ring.one: 0},
                                     np.zeros((1, 0), dtype=np.int64))
    ring = quot_ring(field, m)
    units = ring.units
    generators, orders, table = invariant_basis(units, ring.mul, ring.one)
    if prod(orders) != ring.unit_count:
        raise InvariantViolation(f"unit group of {ring} has order {prod(orders)}, "
                                 f"expected {ring.unit_count}")
    index = {u: i for i, u in enumerate(units)}
    dlog_matrix = np.array([table[u] for u in units], dtype=np.int64).reshape(len(units), len(orders))
    logger.debug("unit group of %s: orders %s", ring, orders)
    return UnitGroupPresentation(ring, tuple(generators), tuple(orders), units, index, dlog_matrix)


@lru_cache(maxsize=None)
def reduction_index(field, m_from, m_to):
    """Position in unit_group(field, m_to).units of each unit of precision m_from"""
    source = unit_group(field, m_from)
    target = unit_group(field, m_to)
    if m_to == 0:
        return np.zeros(len(source.units), dtype=np.int64)
    ring_to = target.ring
    return np.array([target.index[ring_to.reduce_from(u)] for u in source.units], dtype=np.int64)


def one_units(field, m, k):
    """Units of precision m congruent to 1 modulo pi^k (k >= 1), in enumeration order"""
    ring = quot_ring(field, m)
    one = ring.one
    return [u for u in ring.units if ring.valuation(ring.sub(u, one)) >= k]


# ----------------------------
# Unramified extensions: embedding, trace and norm
# ----------------------------
@lru_cache(maxsize=None)
def _residue_root(base, ext):
    """Smallest (in enumeration order) root in F_{q_L} of the residue polynomial of K"""
    residue = quot_ring(LocalFieldSpec('padic', ext.p, ext.f), 1)
    poly = residue_modulus(base.p, base.f)
    for index in range(residue.size):
        x = residue.element_at(index)
        value = residue.zero
        for c in poly:
            value = residue.add(residue.mul(value, x), residue.from_int(c))
        if value == residue.zero:
            return x
    raise InvariantViolation(f"residue polynomial of {base} has no root in F_{ext.q}")


@lru_cache(maxsize=None)
def _alpha_image(base, ext, m):
    """Powers 1, tau, ..., tau^(f_K - 1) of the image of the base generator"""
    if base.kind == 'padic':
        ring = quot_ring(ext, m)
        lift = ring.lift_from(_residue_root(base, ext))
        tau = ring.pow(lift, ext.q ** (m - 1))
        powers = [ring.one]
        for _ in range(base.f - 1):
            powers.append(ring.mul(powers[-1], tau))
        return tuple(powers)
    residue_k = residue_field(base.p, base.f).ring
    residue_l = residue_field(ext.p, ext.f).ring
    root = _residue_root(base, ext)
    table = []
    for index in range(residue_k.size):
        x = residue_k.element_at(index)
        value = residue_l.zero
        power = residue_l.one
        for c in x:
            value = residue_l.add(value, tuple(c * e for e in power))
            power = residue_l.mul(power, root)
        table.append(residue_l.index_of(residue_l.reduce_from(value)))
    return tuple(table)


def embed(ring_k, ring_l, x):
    """
    Canonical embedding O_K/pi^m -> O_L/pi^m for L unramified over K

    The base generator alpha_K goes to the Teichmueller lift of the first
    root of K's residue polynomial in F_{q_L}; for L = K this is the identity.
    """
    if ring_k.m != ring_l.m:
        raise UnsupportedError(f"precision mismatch: {ring_k} vs {ring_l}")
    degree = relative_degree(ring_k.field, ring_l.field)
    if degree == 1:
        return x
    image = _alpha_image(ring_k.field, ring_l.field, ring_k.m)
    if ring_k.field.kind == 'laurent':
        return tuple(image[a] for a in x)
    result = ring_l.zero
    for c, power in zip(x, image):
        if c:
            result = ring_l.add(result, tuple(c * e for e in power))
    return result


@lru_cache(maxsize=None)
def _descent_table(base, ext, m):
    ring_k, ring_l = quot_ring(base, m), quot_ring(ext, m)
    return {embed(ring_k, ring_l, x): x for x in ring_k.elements()}


def descend(ring_k, ring_l, y):
    """Inverse of embed on its image; ValueError if y does not come from K"""
    if relative_degree(ring_k.field, ring_l.field) == 1:
        return y
    try:
        return _descent_table(ring_k.field, ring_l.field, ring_k.m)[y]
    except KeyError:
        raise ValueError(f"{y} does not lie in {ring_k.field}") from None


def relative_frobenius(ring_k, ring_l, x):
    """The generator of Gal(L/K): lifts x -> x^(q_K) on residues"""
    return ring_l.frobenius_power(x, ring_k.field.f)


def trace_to_base(ring_l, ring_k, x):
    """
    Tr_{L/K}(x) for L unramified over K at the same precision m

    Sum of the [L:K] conjugates under the Frobenius lifting x -> x^(q_K),
    descended into the base ring.
    """
    if ring_l.m != ring_k.m:
        raise UnsupportedError(f"precision mismatch: {ring_l} vs {ring_k}")
    degree = relative_degree(ring_k.field, ring_l.field)
    total = ring_l.zero
    y = x
    for _ in range(degree):
        total = ring_l.add(total, y)
        y = relative_frobenius(ring_k, ring_l, y)
    return descend(ring_k, ring_l, total)


def norm_to_base(ring_l, ring_k, x):
    """N_{L/K}(x): product of the Frobenius conjugates, descended into the base ring"""
    if ring_l.m != ring_k.m:
        raise UnsupportedError(f"precision mismatch: {ring_l} vs {ring_k}")
    degree = relative_degree(ring_k.field, ring_l.field)
    total = ring_l.one
    y = x
    for _ in range(degree):
        total = ring_l.mul(total, y)
        y = relative_frobenius(ring_k, ring_l, y)
    return descend(ring_k, ring_l, total)


# ----------------------------
# Elements of K at finite precision
# ----------------------------
@dataclass(frozen=True)
class KElement:
    """
    x = pi^valuation * mantissa, the mantissa known modulo pi^precision

    The mantissa is a unit for multiplicative use; sums may leave a
    non-unit mantissa, which normalized() shifts into the valuation.
    """
    field: LocalFieldSpec
    valuation: int
    mantissa: tuple
    precision: int

    def __post_init__(self):
        if self.precision < 1:
            raise PrecisionError(f"element of {self.field} known to precision {self.precision}")
        ring = quot_ring(self.field, self.precision)
        object.__setattr__(self, 'mantissa', ring.canonical(tuple(self.mantissa)))

    @property
    def ring(self):
        return quot_ring(self.field, self.precision)

    @property
    def absolute_precision(self):
        return self.valuation + self.precision

    def is_normalized(self):
        return self.ring.is_unit(self.mantissa)

    def normalized(self):
        """Same element with a unit mantissa (PrecisionError if it is zero to known precision)"""
        ring = self.ring
        shift = ring.valuation(self.mantissa)
        if shift == 0:
            return self
        if shift >= self.precision:
            raise PrecisionError(f"element is zero modulo pi^{self.absolute_precision}")
        return KElement(self.field, self.valuation + shift,
                        ring.shift_down(self.mantissa, shift), self.precision - shift)

    def at_precision(self, precision):
        """Reduce the mantissa to a lower precision"""
        if precision > self.precision:
            raise PrecisionError(f"mantissa known to precision {self.precision}, {precision} requested")
        return KElement(self.field, self.valuation,
                        quot_ring(self.field, precision).reduce_from(self.mantissa), precision)

    def to_json(self):
        return {'valuation': self.valuation, 'unit': list(self.mantissa), 'precision': self.precision}


def k_element(field, unit=1, valuation=0, precision=6):
    """
    Build pi^valuation * unit

    unit may be an int or a coordinate tuple of the quotient ring; an int
    divisible by p is normalized for padic fields.
    """
    if isinstance(unit, int) and field.kind == 'padic' and unit:
        while unit % field.p == 0:
            unit //= field.p
            valuation += 1
    ring = quot_ring(field, precision)
    mantissa = ring.from_int(unit) if isinstance(unit, int) else ring.canonical(tuple(unit))
    return KElement(field, valuation, mantissa, precision)


def _common(a, b):
    if a.field != b.field:
        raise UnsupportedError(f"elements of different fields {a.field} and {b.field}")


def k_mul(a, b):
    """Valuations add, mantissas multiply at the smaller precision"""
    _common(a, b)
    precision = min(a.precision, b.precision)
    ring = quot_ring(a.field, precision)
    mantissa = ring.mul(ring.reduce_from(a.mantissa), ring.reduce_from(b.mantissa))
    return KElement(a.field, a.valuation + b.valuation, mantissa, precision)


def k_inv(a):
    a = a.normalized()
    return KElement(a.field, -a.valuation, a.ring.inv(a.mantissa), a.precision)


def k_neg(a):
    return KElement(a.field, a.valuation, a.ring.neg(a.mantissa), a.precision)


def k_add(a, b):
    """Sum at the smaller absolute precision; the mantissa may come out a non-unit"""
    _common(a, b)
    low = min(a.valuation, b.valuation)
    absolute = min(a.absolute_precision, b.absolute_precision)
    precision = absolute - low
    if precision < 1:
        raise PrecisionError(f"sum known only modulo pi^{absolute}")
    ring = quot_ring(a.field, precision)
    total = ring.zero
    for x in (a, b):
        shift = x.valuation - low
        if shift < precision:
            total = ring.add(total, ring.shift_up(ring.canonical(x.mantissa), shift))
    return KElement(a.field, low, total, precision)
