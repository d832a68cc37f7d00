#!/usr/bin/env python3
"""
원분체 계수 연산 테스트
"""
from fractions import Fraction
from math import gcd

import numpy as np

from utils.cyclotomic import (
    CycNum, cyc_arith, cyc_from_exponents, cyc_from_json, cyc_from_rational, cyc_galois, cyc_inv,
    cyc_is_unit, cyc_norm, cyc_to_json, degree, root_of_unity, root_of_unity_index,
)
from utils.finite_field import FinFieldElem, check_modulus, ff_from_int, ff_generator

Z3 = root_of_unity(3, 1, 3)


def test_roots_of_three_sum_to_minus_one():
    assert Z3 + Z3 ** 2 == -1
    assert cyc_arith(Z3, root_of_unity(3, 2, 3), 'add') == -1


def test_quadratic_gauss_norm():
    a = 1 + 2 * Z3
    b = 1 + 2 * root_of_unity(3, 2, 3)
    assert a * b == 3
    assert cyc_norm(a) == 3
    assert cyc_galois(a, 2) == b


def test_levels_are_harmonized():
    z6 = root_of_unity(6, 1, 3)
    # zeta_6 = -zeta_3^2
    assert z6 == -(Z3 ** 2)
    assert (z6 * Z3).level == 6
    assert root_of_unity(4, 2, 3) == -1


def test_units_of_z_one_third():
    assert cyc_is_unit(cyc_from_rational(Fraction(1, 3), 3))
    assert cyc_is_unit(1 + 2 * Z3)
    assert not cyc_is_unit(cyc_from_rational(5, 3))
    assert not cyc_is_unit(cyc_from_rational(0, 3))


def test_inverse():
    a = 1 + 2 * Z3
    inverse = cyc_inv(a)
    assert a * inverse == 1
    assert inverse == a * Fraction(-1, 3)
    assert cyc_inv(Z3) == Z3 ** 2
    try:
        cyc_inv(cyc_from_rational(5, 3))
    except ValueError:
        pass
    else:
        raise AssertionError("5 is not invertible in Z[1/3]")


def test_negative_powers():
    assert Z3 ** -1 == Z3 ** 2
    assert cyc_from_rational(3, 3) ** -2 == Fraction(1, 9)


def test_denominators_must_be_p_powers():
    try:
        CycNum(1, (Fraction(1, 2),), 3)
    except ValueError:
        pass
    else:
        raise AssertionError("1/2 is not in Z[1/3]")


def test_root_of_unity_index():
    assert root_of_unity_index(Z3) == (3, 1)
    assert root_of_unity_index(-1 + 0 * Z3) == (2, 1)
    assert root_of_unity_index(1 + 2 * Z3) is None


def test_json_forms():
    a = (1 + 2 * Z3) * Fraction(1, 9)
    assert cyc_from_json(cyc_to_json(a)) == a
    assert cyc_from_json({'root': [3, 1]}, p=3) == Z3
    assert cyc_from_json("1/3", p=3) == Fraction(1, 3)
    assert cyc_to_json(Z3)['root'] == [3, 1]


def test_finite_field_arithmetic():
    w = ff_generator(2, (1, 1, 1))
    one = ff_from_int(2, (1, 1, 1), 1)
    # w is a primitive cube root of unity in F_4
    assert w * w + w + one == ff_from_int(2, (1, 1, 1), 0)
    assert w.multiplicative_order() == 3
    assert w.inverse() == w * w
    assert str(FinFieldElem(7, (1, 3), (5,))) == "5"
    assert check_modulus(2, (1, 1, 1)) == (1, 1, 1)
    try:
        check_modulus(2, (1, 0, 1))
    except ValueError:
        pass
    else:
        raise AssertionError("x^2 + 1 = (x + 1)^2 over F_2")


def test_folding_keeps_p_power_denominators():
    lifted = CycNum(3, (Fraction(1, 3), 2), 3).lift(6)
    assert lifted.coeffs == (Fraction(-5, 3), Fraction(2))
    assert cyc_from_exponents(4, [Fraction(1, 3), 0, Fraction(1, 9), 0], 3).coeffs == \
        (Fraction(2, 9), Fraction(0))


def random_cyc(rng, level, p):
    shift = p ** int(rng.integers(2))
    coeffs = [Fraction(int(c), shift) for c in rng.integers(-2, 3, size=degree(level))]
    return CycNum(level, tuple(coeffs), p)


def random_cyc_unit(rng, level, p):
    """+-p^j zeta^k (1 - zeta^a) / (1 - zeta) with gcd(a, N) = 1"""
    a = int(rng.integers(1, level))
    while gcd(a, level) != 1:
        a = int(rng.integers(1, level))
    cyclotomic_unit = cyc_from_exponents(level, [1] * a + [0] * (level - a), p)
    scale = Fraction(p) ** int(rng.integers(-2, 3)) * (1 if rng.integers(2) else -1)
    return root_of_unity(level, int(rng.integers(level)), p) * cyclotomic_unit * scale


def test_norm_is_multiplicative():
    rng = np.random.default_rng(36)
    for _ in range(200):
        level = int(rng.integers(1, 37))
        p = int(rng.choice([2, 3, 5]))
        a, b = random_cyc(rng, level, p), random_cyc(rng, level, p)
        assert cyc_norm(a * b) == cyc_norm(a) * cyc_norm(b)


def test_units_multiply_to_units():
    rng = np.random.default_rng(5)
    for _ in range(60):
        level = int(rng.integers(3, 37))
        p = int(rng.choice([2, 3, 5]))
        u, v = random_cyc_unit(rng, level, p), random_cyc_unit(rng, level, p)
        assert cyc_is_unit(u) and cyc_is_unit(v)
        assert cyc_is_unit(u * v)
        assert cyc_inv(u) * u == 1


if __name__ == '__main__':
    tests = [(name, fn) for name, fn in list(globals().items()) if name.startswith('test_')]
    print("=== 원분체 연산 테스트 ===\n")
    passed = 0
    for name, fn in tests:
        try:
            fn()
            print(f"  ✅ {name}")
            passed += 1
        except Exception as e:
            print(f"  ❌ {name}: {e}")
    print(f"\n총 {len(tests)}개 중 {passed}개 성공")
