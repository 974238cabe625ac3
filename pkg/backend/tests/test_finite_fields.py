# backend/tests/test_finite_fields.py
import pytest

from backend.app.config import Settings, use_settings
from backend.app.core.exceptions import FieldTooLarge, InvalidInputError, ZeroElement
from backend.app.core.tools.finite_fields import (
    FFPolynomial,
    embed,
    ff_poly_factor,
    finite_field,
    first_irreducible,
    monic_polynomials,
    poly_gcd,
    poly_xgcd,
    prime_field,
)


def test_first_irreducible():
    assert first_irreducible(2, 2) == (1, 1, 1)
    assert first_irreducible(3, 1) == (0, 1)


def test_f4_arithmetic():
    f4 = finite_field(2, 2)
    t = 2
    assert f4.mul(t, t) == 3
    assert f4.mul(t, 3) == 1
    assert f4.inv(t) == 3
    assert f4.add(t, 3) == 1
    assert f4.pow(t, 3) == 1


def test_field_axioms_f9():
    f9 = finite_field(3, 2)
    for a in f9.elements():
        assert f9.add(a, f9.neg(a)) == 0
        if a:
            assert f9.mul(a, f9.inv(a)) == 1
            assert f9.pow(a, 8) == 1
    with pytest.raises(ZeroElement):
        f9.inv(0)


@pytest.mark.parametrize("p, k", [(3, 1), (7, 1), (3, 2), (2, 3), (5, 2)])
def test_sqrt(p, k):
    field = finite_field(p, k)
    squares = 0
    for a in range(1, field.order):
        r = field.sqrt(a)
        if r is not None:
            assert field.mul(r, r) == a
            squares += 1
    expected = field.order - 1 if p == 2 else (field.order - 1) // 2
    assert squares == expected


def test_trace_to_prime():
    f4 = finite_field(2, 2)
    assert f4.trace_to_prime(1) == 0
    assert f4.trace_to_prime(2) == 1


def test_embed_respects_minimal_polynomial():
    f4, f16 = finite_field(2, 2), finite_field(2, 4)
    r = embed(f4, f16, 2)
    assert f16.add(f16.add(f16.mul(r, r), r), 1) == 0
    for a in f4.elements():
        for b in f4.elements():
            assert embed(f4, f16, f4.mul(a, b)) == f16.mul(embed(f4, f16, a), embed(f4, f16, b))
    with pytest.raises(InvalidInputError):
        embed(f4, finite_field(2, 3), 2)


def test_field_cap():
    use_settings(Settings(field_cap=100))
    with pytest.raises(FieldTooLarge):
        finite_field(2, 7)
    assert prime_field(101).order == 101


def test_finite_field_rejects_composite():
    with pytest.raises(InvalidInputError):
        finite_field(6)


def test_polynomial_division_and_gcd():
    f5 = finite_field(5)
    f = FFPolynomial.from_ints(f5, [-1, 0, 1])
    g = FFPolynomial.from_ints(f5, [1, 1])
    q, r = divmod(f, g)
    assert q.coeffs == (4, 1)
    assert r.is_zero()
    assert poly_gcd(f, FFPolynomial.from_ints(f5, [2, 2])) == g
    d, s, t = poly_xgcd(f, FFPolynomial.from_ints(f5, [2, 1]))
    assert d.is_one()
    assert s * f + t * FFPolynomial.from_ints(f5, [2, 1]) == d


def test_ff_poly_factor_splitting():
    fac = ff_poly_factor(FFPolynomial.from_ints(finite_field(5), [1, 0, 1]))
    assert [g.coeffs for g, _ in fac.factors] == [(2, 1), (3, 1)]

    fac = ff_poly_factor(FFPolynomial.from_ints(finite_field(3), [1, 0, 1]))
    assert [(g.coeffs, e) for g, e in fac.factors] == [((1, 0, 1), 1)]

    fac = ff_poly_factor(FFPolynomial.from_ints(finite_field(3), [0, -1, 0, 1]))
    assert [g.coeffs for g, _ in fac.factors] == [(0, 1), (1, 1), (2, 1)]


def test_ff_poly_factor_repeated_and_unit():
    f3 = finite_field(3)
    cube = FFPolynomial.from_ints(f3, [1, 0, 0, 1])
    fac = ff_poly_factor(cube)
    assert [(g.coeffs, e) for g, e in fac.factors] == [((1, 1), 3)]

    f = FFPolynomial.from_ints(f3, [2, 0, 2, 0, 1, 2])
    assert ff_poly_factor(f).expand() == f


def test_ff_poly_factor_extension_field():
    f4 = finite_field(2, 2)
    for f in monic_polynomials(f4, 3):
        if f.coeffs[0] == 0:
            continue
        assert ff_poly_factor(f, seed=3).expand() == f
