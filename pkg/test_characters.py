#!/usr/bin/env python3
"""
가법 / 곱셈 지표 테스트
"""
from fractions import Fraction

from utils.characters import (
    AddChar, HaarMeasure, MulChar, addchar_compose_trace, addchar_eval, addchar_from_int,
    addchar_negate, addchar_root, addchar_standard, addchar_trivial, addchar_twist,
    character_family, dual_measure, mulchar_abs_twist, mulchar_eval, mulchar_inverse,
    mulchar_norm_inflate, mulchar_power, mulchar_product, standard_measure, trivial_character,
    unramified_character,
)
from utils.cyclotomic import cyc_from_rational, root_of_unity
from utils.errors import PrecisionError
from utils.local_field import (
    KElement, LocalFieldSpec, k_add, k_element, k_mul, quot_ring, trace_to_base,
    unramified_extension,
)
from utils.test_data import (
    DEFAULT_FIELDS, make_rng, random_character, random_k_element, random_psi, random_unit,
)

Q3 = LocalFieldSpec('padic', 3, 1)
Q5 = LocalFieldSpec('padic', 5, 1)
F4T = LocalFieldSpec('laurent', 2, 2)
ONE = cyc_from_rational(1, 3)


def quadratic_q3():
    return MulChar(Q3, 1, ONE, (1,))


def test_standard_psi_level_and_values():
    psi = addchar_standard(Q3)
    assert psi.level == 0
    assert addchar_eval(psi, k_element(Q3, 1, -1)) == root_of_unity(3, 1, 3)
    assert addchar_eval(psi, k_element(Q3, 1, 0)) == 1
    assert addchar_eval(psi, k_element(Q3, 1, -2)) == root_of_unity(9, 1, 3)
    assert addchar_trivial(Q3).is_trivial()


def test_twisted_psi_level():
    psi = addchar_standard(Q3)
    assert addchar_twist(psi, k_element(Q3, 1, -1)).level == -1
    assert addchar_twist(psi, k_element(Q3, 3)).level == 1
    assert addchar_negate(psi).level == 0


def test_psi_is_additive():
    psi = addchar_standard(Q5)
    x, y = k_element(Q5, 7, -2), k_element(Q5, 11, -1)
    assert addchar_eval(psi, k_add(x, y)) == addchar_eval(psi, x) * addchar_eval(psi, y)


def test_laurent_psi_reads_residue_coefficient():
    psi = addchar_standard(LocalFieldSpec('laurent', 3, 1))
    field = psi.field
    assert addchar_eval(psi, k_element(field, 1, -1)) == root_of_unity(3, 1, 3)
    assert addchar_eval(psi, k_element(field, 2, -1)) == root_of_unity(3, 2, 3)
    assert addchar_eval(psi, k_element(field, 1, -2)) == 1


def test_psi_composed_with_trace():
    ext = unramified_extension(Q3, 2)
    psi = addchar_standard(Q3)
    psi_l = addchar_compose_trace(psi, ext)
    ring_k, ring_l = quot_ring(Q3, 2), quot_ring(ext, 2)
    for u in ring_l.units[:15]:
        x = k_element(ext, u, -2, 2)
        down = k_element(Q3, trace_to_base(ring_l, ring_k, u), -2, 2)
        assert addchar_eval(psi_l, x) == addchar_eval(psi, down)


def test_quadratic_character_values():
    chi = quadratic_q3()
    assert chi.swan == 0
    assert not chi.is_unramified()
    assert mulchar_eval(chi, k_element(Q3, 2)) == -1
    assert mulchar_eval(chi, k_element(Q3, 4)) == 1
    assert mulchar_eval(chi, k_element(Q3, 3)) == 1


def test_non_minimal_conductor_is_rejected():
    try:
        MulChar(Q3, 2, ONE, (3,))
    except ValueError:
        pass
    else:
        raise AssertionError("the cube of a generator of (Z/9)^x kills 1 + 3Z")


def test_character_families():
    assert len(character_family(Q3, 1, 1)) == 2
    family = character_family(Q3, 2, 1)
    assert len(family) == 6
    assert sorted(chi.conductor for chi in family) == [0, 1, 2, 2, 2, 2]
    assert len(character_family(Q5, 1, 1)) == 4
    assert len(character_family(F4T, 1, 1)) == 3


def test_character_group_laws():
    family = character_family(Q3, 2, 1)
    chi = family[1]
    assert mulchar_product(chi, mulchar_inverse(chi)) == trivial_character(Q3)
    assert mulchar_power(chi, 6) == trivial_character(Q3)
    assert mulchar_power(chi, 3) == quadratic_q3()
    twisted = mulchar_abs_twist(chi)
    assert twisted.pi_value == Fraction(1, 3)


def test_norm_inflation_keeps_conductor():
    ext = unramified_extension(Q3, 2)
    for chi in character_family(Q3, 2, 1):
        lifted = mulchar_norm_inflate(chi, ext)
        assert lifted.conductor == chi.conductor
        assert lifted.field == ext
    eta = unramified_character(Q3, root_of_unity(2, 1, 3))
    assert mulchar_norm_inflate(eta, ext) == trivial_character(ext)


def test_measures():
    dx = standard_measure(Q3)
    assert dx.ball(1) == Fraction(1, 3)
    psi = addchar_twist(addchar_standard(Q3), k_element(Q3, 9))
    dual = dual_measure(HaarMeasure(Q3, Fraction(1, 3)), psi)
    assert dual.volume == Fraction(1, 3)
    assert isinstance(AddChar(Q3).is_trivial(), bool)


def test_standard_psi_on_deep_arguments():
    psi = addchar_standard(Q3)
    x = KElement(Q3, -8, (1,), 10)
    assert addchar_root(psi, x) == (3 ** 8, 1)
    assert addchar_root(addchar_negate(psi), x) == (3 ** 8, 3 ** 8 - 1)
    assert addchar_root(addchar_from_int(Q3, 2, -1), x) == (3 ** 9, 2)
    ext = unramified_extension(Q3, 2)
    psi_l = addchar_compose_trace(psi, ext)
    assert addchar_root(psi_l, KElement(ext, -8, (1, 0), 10)) == (3 ** 8, 2)


def test_inexact_twist_needs_precision():
    psi = AddChar(Q3, k_element(Q3, (2,), 0, 3))
    assert addchar_root(psi, KElement(Q3, -3, (1,), 5)) == (27, 2)
    try:
        addchar_root(psi, KElement(Q3, -8, (1,), 10))
    except PrecisionError:
        pass
    else:
        raise AssertionError("a twist known modulo pi^3 cannot see pi^-8")


def test_psi_is_additive_on_random_pairs():
    rng = make_rng(7)
    for _ in range(100):
        field = DEFAULT_FIELDS[int(rng.integers(len(DEFAULT_FIELDS)))]
        psi = random_psi(rng, field)
        x = random_k_element(rng, field, valuations=(-3, -2, -1, 0), precision=4)
        y = random_k_element(rng, field, valuations=(-3, -2, -1, 0), precision=4)
        roots = [addchar_root(psi, z) for z in (x, y, k_add(x, y))]
        (ox, ex), (oy, ey), (oz, ez) = roots
        assert (Fraction(ez, oz) - Fraction(ex, ox) - Fraction(ey, oy)).denominator == 1


def test_level_shifts_by_twist_valuation():
    rng = make_rng(11)
    for _ in range(40):
        field = DEFAULT_FIELDS[int(rng.integers(len(DEFAULT_FIELDS)))]
        psi = random_psi(rng, field)
        a = random_k_element(rng, field, valuations=(-3, -2, -1, 0, 1, 2, 3), precision=4)
        twisted = addchar_twist(psi, a)
        n = twisted.level
        assert n == psi.level + a.valuation
        u = random_unit(rng, field, 4)
        assert addchar_root(twisted, KElement(field, -n, u, 4))[1] == 0
        deeper = [addchar_root(twisted, KElement(field, -n - 1, w, 1))[1]
                  for w in quot_ring(field, 1).units]
        assert any(deeper)


def test_mulchar_is_multiplicative():
    rng = make_rng(13)
    for _ in range(100):
        field = DEFAULT_FIELDS[int(rng.integers(len(DEFAULT_FIELDS)))]
        chi = random_character(rng, field, max_conductor=2)
        x = random_k_element(rng, field, valuations=(-2, -1, 0, 1, 2), precision=3)
        y = random_k_element(rng, field, valuations=(-2, -1, 0, 1, 2), precision=3)
        assert mulchar_eval(chi, k_mul(x, y)) == mulchar_eval(chi, x) * mulchar_eval(chi, y)


if __name__ == '__main__':
    tests = [(name, fn) for name, fn in list(globals().items()) if name.startswith('test_')]
    print("=== 지표 테스트 ===\n")
    passed = 0
    for name, fn in tests:
        try:
            fn()
            print(f"  ✅ {name}")
            passed += 1
        except Exception as e:
            print(f"  ❌ {name}: {e}")
    print(f"\n총 {len(tests)}개 중 {passed}개 성공")
