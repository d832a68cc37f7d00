#!/usr/bin/env python3
"""
국소체 몫환 / 단위군 테스트
"""
import numpy as np

from utils.errors import PrecisionError, UnsupportedError
from utils.local_field import (
    KElement, LocalFieldSpec, embed, k_add, k_element, k_inv, k_mul, norm_to_base, parse_field,
    quot_ring, relative_degree, relative_frobenius, residue_modulus, teichmuller_modulus,
    trace_to_base, unit_group, unramified_extension,
)

Q3 = LocalFieldSpec('padic', 3, 1)
Q9 = LocalFieldSpec('padic', 3, 2)
F4T = LocalFieldSpec('laurent', 2, 2)


def test_parse_field():
    assert parse_field("padic:p=3") == Q3
    assert parse_field("Laurent: p=2, f=2") == F4T
    assert parse_field("laurent:p=2,f=2").q == 4
    for bad in ("padic:p=4", "adic:p=3", "padic:p=3,f=0", ""):
        try:
            parse_field(bad)
        except ValueError:
            continue
        raise AssertionError(f"{bad!r} should not parse")


def test_unramified_extension():
    assert unramified_extension(Q3, 2) == Q9
    assert relative_degree(Q3, Q9) == 2
    try:
        relative_degree(Q9, LocalFieldSpec('padic', 3, 3))
    except UnsupportedError:
        pass
    else:
        raise AssertionError("F_27 does not contain F_9")


def test_unit_group_of_z_mod_9():
    group = unit_group(Q3, 2)
    assert group.orders == (6,)
    assert group.generators == ((2,),)
    assert group.order == 6


def test_unit_group_of_z_mod_8():
    group = unit_group(LocalFieldSpec('padic', 2, 1), 3)
    assert group.orders == (2, 2)
    assert group.generators == ((3,), (5,))


def test_unit_group_orders():
    assert unit_group(LocalFieldSpec('padic', 5, 1), 2).order == 20
    assert unit_group(F4T, 3).order == 48
    assert unit_group(F4T, 1).orders == (3,)
    assert unit_group(Q3, 0).order == 1


def test_dlog_inverts_exp():
    group = unit_group(Q9, 2)
    for u in group.units:
        assert group.exp(group.dlog(u)) == u


def test_teichmuller_modulus_reduces_to_residue_polynomial():
    low_first = tuple(reversed(residue_modulus(3, 2)))
    for m in (1, 2, 3):
        assert tuple(c % 3 for c in teichmuller_modulus(3, 2, m)) == low_first
    assert tuple(c % 9 for c in teichmuller_modulus(3, 2, 3)) == teichmuller_modulus(3, 2, 2)


def test_frobenius_is_multiplicative():
    ring = quot_ring(Q9, 2)
    units = ring.units[:20]
    for x in units:
        for y in units[:5]:
            assert ring.frobenius(ring.mul(x, y)) == ring.mul(ring.frobenius(x), ring.frobenius(y))


def test_norm_and_trace_of_base_elements():
    ring_k, ring_l = quot_ring(Q3, 2), quot_ring(Q9, 2)
    for x in ring_k.units:
        image = embed(ring_k, ring_l, x)
        assert norm_to_base(ring_l, ring_k, image) == ring_k.mul(x, x)
        assert trace_to_base(ring_l, ring_k, image) == ring_k.add(x, x)


def test_norm_and_trace_on_laurent_extension():
    base = LocalFieldSpec('laurent', 2, 1)
    ring_k, ring_l = quot_ring(base, 2), quot_ring(F4T, 2)
    for x in ring_k.units:
        image = embed(ring_k, ring_l, x)
        assert norm_to_base(ring_l, ring_k, image) == ring_k.mul(x, x)
        assert trace_to_base(ring_l, ring_k, image) == ring_k.zero


def test_k_elements():
    nine = k_element(Q3, 9)
    assert (nine.valuation, nine.mantissa) == (2, (1,))
    inverse = k_inv(k_element(Q3, 2, -1))
    assert inverse.valuation == 1
    assert inverse.mantissa == (365,)
    product = k_mul(k_element(Q3, 2, 1), k_element(Q3, 5, -3))
    assert product.valuation == -2
    assert product.mantissa == (10,)


def test_k_add_shifts_into_valuation():
    three = k_add(k_element(Q3, 1), k_element(Q3, 2)).normalized()
    assert three.valuation == 1
    assert three.mantissa == (1,)
    assert three.precision == 5


def test_zero_has_no_valuation():
    try:
        KElement(Q3, 0, (0,), 3).normalized()
    except PrecisionError:
        pass
    else:
        raise AssertionError("zero cannot be normalized")


# (base field, [L:K]) pairs for the relative Frobenius checks
EXTENSION_PAIRS = (
    (Q3, 3),
    (Q9, 2),
    (LocalFieldSpec('laurent', 2, 1), 4),
    (LocalFieldSpec('laurent', 3, 1), 2),
)


def random_elements(rng, ring, count):
    return [ring.element_at(int(rng.integers(ring.size))) for _ in range(count)]


def test_relative_frobenius_has_exact_order():
    rng = np.random.default_rng(3)
    for base, degree in EXTENSION_PAIRS:
        ring_k, ring_l = quot_ring(base, 2), quot_ring(unramified_extension(base, degree), 2)

        def conjugate(x, times):
            for _ in range(times):
                x = relative_frobenius(ring_k, ring_l, x)
            return x

        for x in random_elements(rng, ring_l, 30):
            assert conjugate(x, degree) == x
        for d in range(1, degree):
            assert any(conjugate(x, d) != x for x in ring_l.units), (base, degree, d)


def test_trace_is_additive():
    rng = np.random.default_rng(4)
    for base, degree in EXTENSION_PAIRS:
        ring_k, ring_l = quot_ring(base, 2), quot_ring(unramified_extension(base, degree), 2)
        for _ in range(30):
            x, y = random_elements(rng, ring_l, 2)
            assert trace_to_base(ring_l, ring_k, ring_l.add(x, y)) == \
                ring_k.add(trace_to_base(ring_l, ring_k, x), trace_to_base(ring_l, ring_k, y))


if __name__ == '__main__':
    tests = [(name, fn) for name, fn in list(globals().items()) if name.startswith('test_')]
    print("=== 국소체 테스트 ===\n")
    passed = 0
    for name, fn in tests:
        try:
            fn()
            print(f"  ✅ {name}")
            passed += 1
        except Exception as e:
            print(f"  ❌ {name}: {e}")
    print(f"\n총 {len(tests)}개 중 {passed}개 성공")
