"""
Artin and Swan characters of a finite quotient J of inertia

The group is given by its multiplication table and the ramification
filtration J = J_0 >= J_1 >= ... >= J_r = 1 in the lower numbering.  With u_i
the augmentation character of J_i,

    a_J  = sum_{i>=0} 1/[J_0 : J_i] Ind_{J_i}^{J_0} u_i
    Sw_J = sum_{i>=1} 1/[J_0 : J_i] Ind_{J_i}^{J_0} u_i

Both must come out integer valued.  Filtrations of Gal(Q_p(zeta_{p^n})/Q_p)
are built in, and JSON fixtures can be loaded from data/filtrations.
"""
import itertools
import json
import logging
import os
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

import numpy as np

from .characters import mulchar_from_unit_exponents
from .cyclotomic import cyc_from_exponents, cyc_from_rational, root_of_unity_index
from .errors import InvariantViolation, UnsupportedError
from .local_field import LocalFieldSpec, invariant_basis, unit_group

logger = logging.getLogger(__name__)

FIXTURE_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))),
                           'data', 'filtrations')


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """Elements 0..n-1 (0 the identity) with a multiplication table"""
    labels: tuple
    table: np.ndarray

    @property
    def order(self):
        return len(self.labels)

    def mul(self, a, b):
        return int(self.table[a, b])

    @property
    def inverse(self):
        return np.argmin(self.table, axis=1)

    def is_abelian(self):
        return bool((self.table == self.table.T).all())

    def conjugacy_classes(self):
        inverse = self.inverse
        seen, classes = set(), []
        for g in range(self.order):
            if g in seen:
                continue
            orbit = sorted({int(self.table[self.table[x, g], inverse[x]]) for x in range(self.order)})
            seen.update(orbit)
            classes.append(tuple(orbit))
        return classes

    def to_json(self):
        return {'labels': list(self.labels), 'table': self.table.tolist()}


def finite_group(labels, table):
    """
    Validate a multiplication table

    Raises:
        ValueError: identity is not element 0, a row or column is not a
            permutation, or associativity fails
    """
    table = np.asarray(table, dtype=np.int64)
    n = len(labels)
    if table.shape != (n, n):
        raise ValueError(f"table has shape {table.shape}, expected ({n}, {n})")
    expected = np.arange(n)
    if not (table[0] == expected).all() or not (table[:, 0] == expected).all():
        raise ValueError("element 0 is not the identity")
    for row in range(n):
        if not (np.array_equal(np.sort(table[row]), expected)
                and np.array_equal(np.sort(table[:, row]), expected)):
            raise ValueError(f"row or column {row} is not a permutation")
    for a in range(n):
        # (ab)c against a(bc) for all b, c
        if not (table[table[a]] == table[a][table]).all():
            raise ValueError(f"associativity fails for element {a}")
    return FiniteGroup(tuple(labels), table)


@dataclass(frozen=True, eq=False)
class RamFiltration:
    """Lower-numbering filtration J_0 = J >= J_1 >= ... >= J_r = {1}"""
    group: FiniteGroup
    chain: tuple
    p: int
    name: str = ''

    def __post_init__(self):
        chain = tuple(tuple(sorted(int(g) for g in step)) for step in self.chain)
        object.__setattr__(self, 'chain', chain)
        group = self.group
        if not chain or len(chain[0]) != group.order:
            raise ValueError("J_0 must be the whole group")
        if chain[-1] != (0,):
            raise ValueError("filtration must end with the trivial group")
        inverse = group.inverse
        for i, step in enumerate(chain):
            members = set(step)
            for a in step:
                for b in step:
                    if group.mul(a, b) not in members:
                        raise ValueError(f"J_{i} is not closed under multiplication")
            for x in range(group.order):
                for h in step:
                    if int(group.table[group.table[x, h], inverse[x]]) not in members:
                        raise UnsupportedError(f"J_{i} is not normal in J_0")
            if i and not members <= set(chain[i - 1]):
                raise ValueError(f"J_{i} is not contained in J_{i - 1}")

    def to_json(self):
        return {'name': self.name, 'p': self.p, **self.group.to_json(),
                'chain': [list(step) for step in self.chain]}


@dataclass(frozen=True)
class ClassFunction:
    """Rational values per element, constant on conjugacy classes"""
    values: tuple

    def __sub__(self, other):
        return ClassFunction(tuple(a - b for a, b in zip(self.values, other.values)))

    def is_integral(self):
        return all(v.denominator == 1 for v in self.values)

    def class_values(self, group):
        return [(cls, self.values[cls[0]]) for cls in group.conjugacy_classes()]


def augmentation(group, subgroup):
    """u_H on H: |H| - 1 at the identity, -1 elsewhere on H (0 off H)"""
    values = [Fraction(0)] * group.order
    for h in subgroup:
        values[h] = Fraction(-1)
    values[0] = Fraction(len(subgroup) - 1)
    return values


def induce(group, subgroup, values):
    """Ind_H^G phi(g) = 1/|H| sum_x phi(x g x^-1), phi extended by zero off H"""
    inverse = group.inverse
    members = set(subgroup)
    induced = []
    for g in range(group.order):
        total = Fraction(0)
        for x in range(group.order):
            conjugate = int(group.table[group.table[x, g], inverse[x]])
            if conjugate in members:
                total += values[conjugate]
        induced.append(total / len(subgroup))
    return induced


def _filtration_sum(filtration, start):
    group = filtration.group
    total = [Fraction(0)] * group.order
    for step in filtration.chain[start:]:
        if len(step) == 1:
            break
        weight = Fraction(len(step), group.order)
        induced = induce(group, step, augmentation(group, step))
        total = [t + weight * v for t, v in zip(total, induced)]
    result = ClassFunction(tuple(total))
    if not result.is_integral():
        raise InvariantViolation(f"filtration sum is not integer valued: {result.values}")
    return result


def artin_character(filtration):
    return _filtration_sum(filtration, 0)


def swan_character(filtration):
    sw = _filtration_sum(filtration, 1)
    inertia_one = set(filtration.chain[1]) if len(filtration.chain) > 1 else {0}
    for g, value in enumerate(sw.values):
        if g not in inertia_one and value:
            raise InvariantViolation(f"Swan character is nonzero off J_1 at element {g}")
    return sw


@dataclass(frozen=True)
class GroupCharacter:
    """A one-dimensional character j -> zeta_order^exponents[j]"""
    order: int
    exponents: tuple


def group_characters(group):
    """All characters of an abelian group, in lexicographic order of generator exponents"""
    if not group.is_abelian():
        raise UnsupportedError("characters are only enumerated for abelian groups")
    generators, orders, table = invariant_basis(range(group.order), group.mul, 0)
    level = lcm(*orders) if orders else 1
    dlog = np.array([table[g] for g in range(group.order)], dtype=np.int64)
    dlog = dlog.reshape(group.order, len(orders))
    characters = []
    for exps in itertools.product(*(range(n) for n in orders)):
        weights = np.array([e * level // n for e, n in zip(exps, orders)], dtype=np.int64)
        values = dlog.dot(weights) % level
        characters.append(_reduced_character(level, values))
    return characters


def _reduced_character(level, values):
    values = np.asarray(values, dtype=np.int64) % level
    g = level
    for v in values:
        g = gcd(g, int(v))
    return GroupCharacter(level // g, tuple(int(v) // g for v in values))


def character_from_values(group, values):
    """Convert a list of CycNum root-of-unity values into a GroupCharacter"""
    roots = [root_of_unity_index(v) for v in values]
    if any(r is None for r in roots):
        raise ValueError("character values must be roots of unity")
    level = lcm(*(order for order, _ in roots))
    return _reduced_character(level, [e * (level // o) for o, e in roots])


def check_homomorphism(group, chi):
    exps = np.array(chi.exponents, dtype=np.int64)
    expected = (exps[:, None] + exps[None, :]) % chi.order
    if not (exps[group.table] == expected).all():
        raise ValueError("character values do not define a homomorphism")


def conductor_pairing(filtration, chi, kind="artin"):
    """
    <f, chi> = 1/|J| sum_j f(j) chi(j) for f = a_J or Sw_J

    Returns:
        Fraction (a nonnegative integer for these pairings)
    """
    group = filtration.group
    check_homomorphism(group, chi)
    function = artin_character(filtration) if kind == 'artin' else swan_character(filtration)
    weights = [Fraction(0)] * chi.order
    for j, value in enumerate(function.values):
        weights[chi.exponents[j]] += value
    total = cyc_from_exponents(chi.order, weights, filtration.p)
    if not total.is_rational():
        raise InvariantViolation(f"pairing with {kind} character is not rational: {total}")
    return total.rational_value() / group.order


# ----------------------------
# Built-in and fixture filtrations
# ----------------------------
def builtin_cyclotomic_filtration(p, n):
    """
    Gal(Q_p(zeta_{p^n})/Q_p) = (Z/p^n)^x in the lower numbering

    Elements are the units of Z/p^n in increasing order; J_i is the subgroup
    of a = 1 mod p^k for p^(k-1) <= i <= p^k - 1, trivial from i = p^(n-1) on.
    """
    if p == 2 or n < 1 or n > 3:
        raise UnsupportedError(f"built-in cyclotomic filtration needs an odd prime and 1 <= n <= 3, "
                               f"got p={p}, n={n}")
    modulus = p ** n
    labels = [a for a in range(1, modulus) if a % p]
    position = {a: i for i, a in enumerate(labels)}
    table = [[position[a * b % modulus] for b in labels] for a in labels]
    chain = [list(range(len(labels)))]
    i = 1
    while True:
        k = 1
        while p ** k - 1 < i:
            k += 1
        step = [position[a] for a in labels if a % p ** k == 1] if k <= n else [0]
        chain.append(step)
        if len(step) == 1:
            break
        i += 1
    return RamFiltration(finite_group(labels, table), tuple(chain), p,
                         f"cyclotomic p={p} n={n}")


def load_filtration(path):
    """Read a {name, p, labels, table, chain} fixture"""
    if not os.path.isabs(path) and not os.path.exists(path):
        path = os.path.join(FIXTURE_DIR, path)
    with open(path, encoding='utf-8') as handle:
        data = json.load(handle)
    group = finite_group(data['labels'], data['table'])
    return RamFiltration(group, tuple(data['chain']), int(data['p']), data.get('name', ''))


def list_fixtures():
    if not os.path.isdir(FIXTURE_DIR):
        return []
    return sorted(name for name in os.listdir(FIXTURE_DIR) if name.endswith('.json'))


def quotient_filtration(filtration, kernel):
    """
    Filtration of J/H for a normal subgroup H

    Lower numbering passes to quotients through the Herbrand function of H:
    (J/H)_v = J_u H / H with v = phi_H(u), phi_H(u) = sum_{1<=i<=u} 1/[H_0 : H_i].
    """
    group = filtration.group
    kernel = tuple(sorted(int(h) for h in kernel))
    members = set(kernel)
    cosets, coset_of = [], {}
    for g in range(group.order):
        if g in coset_of:
            continue
        coset = tuple(sorted(int(group.table[g, h]) for h in kernel))
        for x in coset:
            coset_of[x] = len(cosets)
        cosets.append(coset)
    if len(coset_of) != group.order or any(len(c) != len(kernel) for c in cosets):
        raise ValueError("kernel does not partition the group into cosets")
    table = [[coset_of[int(group.table[a[0], b[0]])] for b in cosets] for a in cosets]
    quotient = finite_group([group.labels[c[0]] for c in cosets], table)

    def lower(i):
        return filtration.chain[i] if i < len(filtration.chain) else (0,)

    h0 = len(members & set(lower(0)))
    # Herbrand function of H at integers
    phi = [Fraction(0)]
    t = 0
    chain = []
    v = 0
    while True:
        while phi[-1] < v:
            t += 1
            phi.append(phi[-1] + Fraction(len(members & set(lower(t))), h0))
        # smallest integer u with phi(u) >= v
        step = sorted({coset_of[g] for g in lower(t)})
        chain.append(step)
        if len(step) == 1:
            break
        v += 1
    return RamFiltration(quotient, tuple(chain), filtration.p, f"{filtration.name} / H")


def local_character(filtration, chi, n):
    """
    The character of Q_p^x matching chi on Gal(Q_p(zeta_{p^n})/Q_p)

    chi~(p) = 1 and chi~(u) = chi(u^-1 mod p^n); labels must be the units of Z/p^n.
    """
    p = filtration.p
    field = LocalFieldSpec('padic', p, 1)
    group = unit_group(field, n)
    modulus = p ** n
    position = {label: i for i, label in enumerate(filtration.group.labels)}
    exps = [chi.exponents[position[pow(int(u[0]), -1, modulus)]] for u in group.units]
    return mulchar_from_unit_exponents(field, n, chi.order, exps, cyc_from_rational(1, p))
