# backend/tests/test_hyperelliptic.py
import pytest

from backend.app.config import Settings, use_settings
from backend.app.core.curves.hyperelliptic import (
    HyperellipticCurve,
    cantor_add,
    jac_enumerate,
    jac_frobenius,
    jac_group,
    negate,
)
from backend.app.core.exceptions import (
    ConsistencyError,
    CurveSingular,
    FieldTooLarge,
    InvalidInputError,
    OutOfTheoremScope,
)


@pytest.fixture
def x5_plus_1():
    """y^2 = x^5 + 1 over F_3"""
    return HyperellipticCurve.from_lower(3, [1, 0, 0, 0, 0])


def test_curve_counts(x5_plus_1):
    assert x5_plus_1.over(1).affine_points() == [(0, 1), (0, 2), (2, 0)]
    assert x5_plus_1.over(1).curve_count() == 4
    assert x5_plus_1.over(2).curve_count() == 10


def test_divisor_enumeration(x5_plus_1):
    divisors = x5_plus_1.over(1).divisors()
    assert len(divisors) == 10
    assert len(set(divisors)) == 10
    assert sum(1 for d in divisors if d.degree == 2) == 6


def test_cantor_group_law(x5_plus_1):
    jac = x5_plus_1.over(1)
    divisors = jac.divisors()
    members = set(divisors)
    zero = jac.identity
    for a in divisors:
        assert jac.add(a, zero) == a
        assert jac.add(a, negate(a)).is_identity()
        for b in divisors:
            ab = jac.add(a, b)
            assert ab in members
            assert ab == jac.add(b, a)
            for c in divisors:
                assert jac.add(ab, c) == jac.add(a, jac.add(b, c))


def test_jacobian_structure(x5_plus_1):
    count, structure = jac_enumerate(x5_plus_1)
    assert count == 10
    assert structure.invariants == (10,)
    assert jac_group(x5_plus_1).torsion(2) == x5_plus_1.over(1).two_torsion_expected() == 2


def test_frobenius_of_supersingular_curve(x5_plus_1):
    weil = jac_frobenius(x5_plus_1)
    assert weil.coeffs == (9, 0, 0, 0, 1)
    assert weil.poly(1) == 10


def test_frobenius_constant_term_and_trace():
    curve = HyperellipticCurve.from_lower(5, [0, 1, 0, 0, 0])
    assert curve.over(1).curve_count() == 6
    weil = jac_frobenius(curve)
    assert weil.coeffs[0] == 25
    assert weil.coeffs[3] == 0
    assert weil.poly(1) == jac_group(curve).count


def test_split_jacobian_is_out_of_scope():
    # y^2 = x^5 + x over F_3: P = (t^2 + 2t + 3)(t^2 - 2t + 3)
    curve = HyperellipticCurve.from_lower(3, [0, 1, 0, 0, 0])
    assert curve.over(1).curve_count() == 4
    with pytest.raises(OutOfTheoremScope) as info:
        jac_frobenius(curve)
    assert not isinstance(info.value, ConsistencyError)
    assert info.value.exit_code == 1


def test_group_over_extension(x5_plus_1):
    weil = jac_frobenius(x5_plus_1)
    group = jac_group(x5_plus_1, 2)
    # P_2 = (t^2 + 9)^2, so #J(F_9) = 100
    assert group.count == 100
    assert group.structure.cardinality == 100
    assert weil.poly(1) * weil.poly(-1) == 100


def test_cantor_on_identity(x5_plus_1):
    jac = x5_plus_1.over(1)
    assert cantor_add(jac.identity, jac.identity, x5_plus_1).is_identity()


def test_rejections():
    with pytest.raises(CurveSingular):
        HyperellipticCurve.from_lower(3, [0, 0, 0, 0, 0])
    with pytest.raises(InvalidInputError):
        HyperellipticCurve.from_lower(2, [1, 0, 0, 0, 0])
    with pytest.raises(InvalidInputError):
        HyperellipticCurve.from_lower(3, [1, 0, 0])


def test_jacobian_cap(x5_plus_1):
    use_settings(Settings(jacobian_cap=100))
    assert len(x5_plus_1.over(1).divisors()) == 10
    with pytest.raises(FieldTooLarge):
        x5_plus_1.over(2).divisors()
