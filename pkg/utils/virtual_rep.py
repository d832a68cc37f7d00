"""
Virtual representations as integer combinations of monomial atoms

An atom is Ind_{L/K} chi_L for L/K unramified of degree f' (f' = 1 is a
character of K itself).  Brauer induction guarantees these span the
Grothendieck group; only unramified L is supported.
"""
import logging
from dataclasses import dataclass

from .characters import (
    MulChar, mulchar_abs_twist, mulchar_eval, mulchar_inverse, mulchar_norm_inflate,
    mulchar_product, unramified_character,
)
from .cyclotomic import cyc_from_rational, root_of_unity
from .errors import UnsupportedError
from .local_field import relative_degree, unramified_extension

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Atom:
    """Ind_{L/K} chi for L the unramified extension of K of the given degree"""
    base: object
    degree: int
    char: MulChar

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError(f"extension degree must be positive, got {self.degree}")
        expected = unramified_extension(self.base, self.degree)
        if self.char.field != expected:
            raise UnsupportedError(f"atom character lives on {self.char.field}; "
                                   f"only the unramified extension {expected} is supported")

    @property
    def rank(self):
        return self.degree

    @property
    def swan(self):
        return self.degree * self.char.swan

    def sort_key(self):
        return (self.degree, self.char.conductor, self.char.unit_exps,
                str(self.char.pi_value), self.char.pi_value.level)


@dataclass(frozen=True)
class VirtualRep:
    """sum c_i [atom_i] with identical atoms merged and zero terms dropped"""
    base: object
    terms: tuple = ()

    def __post_init__(self):
        merged = {}
        for coef, atom in self.terms:
            if atom.base != self.base:
                raise UnsupportedError(f"atom over {atom.base} in a representation over {self.base}")
            merged[atom] = merged.get(atom, 0) + int(coef)
        terms = tuple(sorted(((c, a) for a, c in merged.items() if c),
                             key=lambda term: term[1].sort_key()))
        object.__setattr__(self, 'terms', terms)

    def __add__(self, other):
        if other.base != self.base:
            raise UnsupportedError(f"cannot add representations over {self.base} and {other.base}")
        return VirtualRep(self.base, self.terms + other.terms)

    def __neg__(self):
        return VirtualRep(self.base, tuple((-c, a) for c, a in self.terms))

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, k):
        return VirtualRep(self.base, tuple((k * c, a) for c, a in self.terms))

    def is_zero(self):
        return not self.terms

    def has_only_base_atoms(self):
        return all(atom.degree == 1 for _, atom in self.terms)


def char_rep(chi, coef=1):
    """[chi] for a character of the base field"""
    return VirtualRep(chi.field, ((coef, Atom(chi.field, 1, chi)),))


def induced_rep(base, chi, coef=1):
    """[Ind_{L/K} chi] for a character chi of an unramified extension L of base"""
    degree = relative_degree(base, chi.field)
    return VirtualRep(base, ((coef, Atom(base, degree, chi)),))


def vr_rank(rep):
    return sum(c * atom.rank for c, atom in rep.terms)


def vr_swan(rep):
    return sum(c * atom.swan for c, atom in rep.terms)


def vr_det_at(rep, a):
    """(det V)(a) = prod chi_i(a)^c_i for a sum of base-field characters"""
    if not rep.has_only_base_atoms():
        raise UnsupportedError("determinant is only available for sums of base-field characters")
    value = cyc_from_rational(1, rep.base.p)
    for coef, atom in rep.terms:
        value = value * mulchar_eval(atom.char, a) ** coef
    return value


def vr_inertia_invariants_rank(rep, residue_char_l=0):
    """
    rk V^I (l = 0) or rk V^I' (l a prime other than p)

    A character atom contributes its rank exactly when it is unramified: tame
    character values have order prime to p, so the pro-l quotient changes
    nothing for characters.
    """
    if residue_char_l and residue_char_l == rep.base.p:
        raise UnsupportedError(f"coefficient characteristic must differ from p={rep.base.p}")
    return sum(c * atom.rank for c, atom in rep.terms if atom.char.is_unramified())


def vr_artin_conductor(rep):
    """a(V) = Sw(V) + rk V - rk V^I"""
    return vr_swan(rep) + vr_rank(rep) - vr_inertia_invariants_rank(rep)


def vr_twist(rep, theta):
    """V (x) theta for a character theta of the base; Ind chi_L (x) theta = Ind(chi_L . theta o N)"""
    if theta.field != rep.base:
        raise UnsupportedError(f"twisting character on {theta.field}, representation over {rep.base}")
    terms = []
    for coef, atom in rep.terms:
        lifted = mulchar_norm_inflate(theta, atom.char.field)
        terms.append((coef, Atom(rep.base, atom.degree, mulchar_product(atom.char, lifted))))
    return VirtualRep(rep.base, tuple(terms))


def vr_tensor_unramified(rep, other):
    """V (x) W for W a sum of unramified base-field characters"""
    result = VirtualRep(rep.base)
    for coef, atom in other.terms:
        if atom.degree != 1 or not atom.char.is_unramified():
            raise UnsupportedError("only tensoring with sums of unramified characters is supported")
        result = result + coef * vr_twist(rep, atom.char)
    return result


def vr_dual(rep):
    """V* : every atom character inverted"""
    return VirtualRep(rep.base, tuple((c, Atom(rep.base, a.degree, mulchar_inverse(a.char)))
                                      for c, a in rep.terms))


def vr_abs_twist(rep):
    """V (x) |.|_K; on induced atoms |.|_K o N_{L/K} = |.|_L"""
    return VirtualRep(rep.base, tuple((c, Atom(rep.base, a.degree, mulchar_abs_twist(a.char)))
                                      for c, a in rep.terms))


def decompose_galois_invariant_induction(base, degree, chi):
    """
    Ind_{L/K}(chi o N_{L/K}) = sum over eta of [chi . eta], eta unramified with eta(pi)^degree = 1
    """
    terms = []
    for j in range(degree):
        eta = unramified_character(base, root_of_unity(degree, j, base.p))
        terms.append((1, Atom(base, 1, mulchar_product(chi, eta))))
    return VirtualRep(base, tuple(terms))


def induced_regular(base, degree):
    """Ind_{L/K} 1_L decomposed into the unramified characters of order dividing degree"""
    return decompose_galois_invariant_induction(base, degree, unramified_character(base, 1))
