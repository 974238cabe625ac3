# backend/tests/test_ideals.py
import random
from fractions import Fraction

import pytest
from sympy import Matrix, Rational

from backend.app.core.exceptions import InvalidInputError, NotCoprime, ZeroElement, ZeroIdeal
from backend.app.core.ideals import (
    FractionalIdeal,
    colon_unit,
    conductor,
    factor_coprime_ideal,
    ideal_arith,
    is_coprime_to_conductor,
    is_gorenstein,
    is_invertible,
    primes_above,
    prime_residue_characteristic,
    residue_structure,
    trace_dual,
)
from backend.app.core.orders import NumberField, NumberFieldOrder, maximal_order, order_construct, ring_closure
from backend.app.core.tools.polynomials import IntPolynomial


def test_residue_structures(zpi_m2):
    pi = zpi_m2.field.generator()
    assert residue_structure(zpi_m2, zpi_m2.field.scalar(3)).invariants == (3, 3)
    assert residue_structure(zpi_m2, pi + 1).invariants == (3,)
    assert residue_structure(zpi_m2, zpi_m2.field.scalar(-1)).invariants == ()
    with pytest.raises(ZeroElement):
        residue_structure(zpi_m2, zpi_m2.field.scalar(0))


def test_residue_cardinality_is_norm():
    rng = random.Random(5)
    for modulus in [(2, 0, 1), (3, 0, 1), (2, 1, 1), (5, -2, 1)]:
        field = NumberField(IntPolynomial(modulus))
        order = ring_closure(field, [field.generator()])
        for _ in range(10):
            s = field.element([rng.randint(-7, 7), rng.randint(-7, 7)])
            if s.is_zero():
                continue
            assert residue_structure(order, s).cardinality == abs(s.norm())


def test_principal_ideal_norm_and_membership(zpi_m2):
    field = zpi_m2.field
    ideal = FractionalIdeal.principal(zpi_m2, field.generator() + 1)
    assert ideal.norm() == 3
    assert ideal.is_integral()
    assert ideal.contains(field.scalar(3))
    assert not ideal.contains(field.one())
    assert ideal.residue_structure().invariants == (3,)
    with pytest.raises(ZeroIdeal):
        FractionalIdeal.principal(zpi_m2, field.scalar(0))


def test_ideal_arithmetic(zpi_m2):
    field = zpi_m2.field
    a = FractionalIdeal.generated_by(zpi_m2, [field.scalar(3), field.generator() + 1])
    b = FractionalIdeal.principal(zpi_m2, field.scalar(3))
    assert ideal_arith("sum", a, b) == a
    assert ideal_arith("product", a, b).norm() == a.norm() * 9
    assert a.contains_ideal(b)
    assert is_invertible(a)
    assert a * colon_unit(a) == FractionalIdeal.unit(zpi_m2)
    assert ideal_arith("quotient", b, a).contains_ideal(b)
    with pytest.raises(InvalidInputError):
        ideal_arith("power", a, b)


def test_conductor(weil_sqrt_m3, zpi_m2):
    order = order_construct(weil_sqrt_m3, "zpi")
    f = conductor(order)
    assert f.norm() == 2
    assert conductor(zpi_m2) == FractionalIdeal.unit(zpi_m2)
    assert not is_invertible(f)


def test_coprime_to_conductor(weil_sqrt_m3):
    order = order_construct(weil_sqrt_m3, "zpi")
    field = order.field
    pi = field.generator()
    assert is_coprime_to_conductor(field.scalar(3), order)
    assert not is_coprime_to_conductor(pi - 1, order)
    assert not is_coprime_to_conductor(field.scalar(2), order)


def test_quadratic_orders_are_gorenstein():
    rng = random.Random(3)
    for _ in range(8):
        d = rng.choice([-7, -5, -3, -2, -1, 2, 3, 5, 6, 7])
        f = rng.randint(1, 5)
        field = NumberField(IntPolynomial.of(-d, 0, 1))
        order = ring_closure(field, [field.generator() * f])
        assert is_gorenstein(order)


def test_non_gorenstein_cubic_order():
    field = NumberField(IntPolynomial.of(-2, 0, 0, 1))
    order = NumberFieldOrder.from_rows(field, [[1, 0, 0], [0, 2, 0], [0, 0, 2]])
    assert not is_gorenstein(order)
    assert is_gorenstein(maximal_order(field))
    assert trace_dual(maximal_order(field)).norm() == Fraction(1, 108)


def test_primes_above(zpi_m2):
    split = primes_above(3, zpi_m2)
    assert [(int(p.norm()), e) for p, e in split] == [(3, 1), (3, 1)]
    inert = primes_above(5, zpi_m2)
    assert [(int(p.norm()), e) for p, e in inert] == [(25, 1)]
    ramified = primes_above(2, zpi_m2)
    assert [(int(p.norm()), e) for p, e in ramified] == [(2, 2)]


def test_factor_coprime_ideal(zpi_m2):
    field = zpi_m2.field
    factors = factor_coprime_ideal(zpi_m2, field.scalar(3))
    assert [(int(p.norm()), e) for p, e in factors] == [(3, 1), (3, 1)]
    assert prime_residue_characteristic(factors[0][0]) == 3

    factors = factor_coprime_ideal(zpi_m2, field.scalar(9) * (field.generator() + 1))
    assert sorted(e for _, e in factors) == [2, 3]


def test_factor_requires_coprime(weil_sqrt_m3):
    order = order_construct(weil_sqrt_m3, "zpi")
    with pytest.raises(NotCoprime):
        factor_coprime_ideal(order, order.field.scalar(2))


def _assert_factorization_round_trip(order, s):
    factors = factor_coprime_ideal(order, s)
    product_ideal = FractionalIdeal.unit(order)
    for prime, e in factors:
        assert prime.is_integral()
        assert is_invertible(prime)
        assert abs(s.norm()) % prime_residue_characteristic(prime) == 0
        product_ideal = product_ideal * prime ** e
    assert product_ideal == FractionalIdeal.principal(order, s)
    return factors


def test_factorization_in_non_maximal_quadratic_order(weil_sqrt_m3):
    order = order_construct(weil_sqrt_m3, "zpi")
    field = order.field
    assert order != maximal_order(field)
    factors = _assert_factorization_round_trip(order, field.scalar(7))
    assert [(int(p.norm()), e) for p, e in factors] == [(7, 1), (7, 1)]
    factors = _assert_factorization_round_trip(order, field.scalar(5))
    assert [(int(p.norm()), e) for p, e in factors] == [(25, 1)]

    rng = random.Random(11)
    tried = 0
    while tried < 8:
        s = field.element([rng.randint(-9, 9), rng.randint(-9, 9)])
        if s.is_zero() or abs(s.norm()) == 1 or s.norm() % 2 == 0:
            continue
        _assert_factorization_round_trip(order, s)
        tried += 1


def test_factorization_in_cubic_orders():
    field = NumberField(IntPolynomial.of(-2, 0, 0, 1))
    alpha = field.generator()
    small = NumberFieldOrder.from_rows(field, [[1, 0, 0], [0, 2, 0], [0, 0, 2]])
    for order in (maximal_order(field), small):
        factors = _assert_factorization_round_trip(order, field.scalar(5))
        assert sorted(int(p.norm()) for p, _ in factors) == [5, 25]
        factors = _assert_factorization_round_trip(order, field.scalar(3))
        assert [(int(p.norm()), e) for p, e in factors] == [(3, 3)]
        _assert_factorization_round_trip(order, alpha * 2 + 1)
        _assert_factorization_round_trip(order, alpha * alpha * 2 + 3)
    with pytest.raises(NotCoprime):
        factor_coprime_ideal(small, alpha * 2)


def _trace_dual_basis(field, elems):
    gram = Matrix([[Rational(str((a * b).trace())) for b in elems] for a in elems])
    inv = gram.inv()
    n = len(elems)
    return [
        sum((elems[j] * Fraction(int(inv[k, j].p), int(inv[k, j].q)) for j in range(n)), field.scalar(0))
        for k in range(n)
    ]


def _times_colon_of_dual(order):
    """O†·(O : O†), with (O : I) computed as the trace dual of I·O†"""
    field = order.field
    dual = _trace_dual_basis(field, order.basis())
    dual_squared = FractionalIdeal.generated_by(order, [a * b for a in dual for b in dual])
    colon = _trace_dual_basis(field, dual_squared.elements())
    assert FractionalIdeal.from_rows(order, [c.coords for c in colon]) == colon_unit(trace_dual(order))
    return FractionalIdeal.generated_by(order, [a * b for a in dual for b in colon])


def test_gorenstein_against_trace_dual_products():
    field = NumberField(IntPolynomial.of(-2, 0, 0, 1))
    small = NumberFieldOrder.from_rows(field, [[1, 0, 0], [0, 2, 0], [0, 0, 2]])
    big = maximal_order(field)
    unit = FractionalIdeal.unit(small)

    product_ideal = _times_colon_of_dual(small)
    assert product_ideal != unit
    assert unit.contains_ideal(product_ideal)
    assert not is_gorenstein(small)

    assert _times_colon_of_dual(big) == FractionalIdeal.unit(big)
    assert is_gorenstein(big)
