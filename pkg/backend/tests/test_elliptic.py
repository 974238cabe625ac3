# backend/tests/test_elliptic.py
import random

import pytest

from backend.app.config import Settings, use_settings
from backend.app.core.curves import point_counts
from backend.app.core.curves.elliptic import (
    INFINITY,
    EllipticCurve,
    all_curves,
    ec_enumerate,
    ec_frobenius,
    ec_group,
    has_integral_frobenius,
)
from backend.app.core.curves.groups import structure_from_element_orders
from backend.app.core.exceptions import CurveSingular, FieldTooLarge, InvalidInputError
from backend.app.core.weil import base_extension


def curve(p, k, coeffs):
    return EllipticCurve.from_coefficients(p, k, coeffs)


def test_structure_from_element_orders():
    assert structure_from_element_orders([1, 2, 2, 2, 4, 4, 4, 4]).invariants == (2, 4)
    assert structure_from_element_orders([1, 3, 3]).invariants == (3,)
    assert structure_from_element_orders([1]).invariants == ()


def test_supersingular_curve_over_f2():
    e = curve(2, 1, [0, 0, 1, 0, 0])
    assert ec_enumerate(e, 1) == (3, ec_group(e, 1).structure)
    assert ec_group(e, 1).structure.invariants == (3,)
    assert ec_group(e, 2).structure.invariants == (3, 3)
    assert ec_group(e, 2).count == 9
    assert ec_frobenius(e).coeffs == (2, 0, 1)


def test_cyclic_group_of_order_four():
    e = curve(3, 1, [0, 0, 0, 1, 0])
    points = e.over(1).points()
    assert points == [INFINITY, (0, 0), (2, 1), (2, 2)]
    assert ec_group(e).structure.invariants == (4,)
    assert ec_frobenius(e).coeffs == (3, 0, 1)


def test_frobenius_from_point_count():
    e = curve(5, 1, [0, 0, 0, 1, 1])
    assert e.over(1).count() == 9
    assert ec_frobenius(e).coeffs == (5, 3, 1)


def test_group_law():
    e = curve(7, 1, [0, 0, 0, 3, 2]).over(1)
    points = e.points()
    assert all(e.is_on_curve(pt) for pt in points)
    for a in points:
        assert e.add(a, e.neg(a)) is INFINITY
        assert e.add(a, INFINITY) == a
        for b in points:
            assert e.add(a, b) == e.add(b, a)
            assert e.is_on_curve(e.add(a, b))
    for a in points[:5]:
        for b in points[:5]:
            for c in points[:5]:
                assert e.add(e.add(a, b), c) == e.add(a, e.add(b, c))


def test_group_law_in_characteristic_two():
    e = curve(2, 2, [1, 0, 0, 0, 1]).over(1)
    points = e.points()
    for a in points:
        assert e.add(a, e.neg(a)) is INFINITY
        for b in points:
            assert e.is_on_curve(e.add(a, b))


def test_point_counts_match_frobenius():
    e = curve(3, 1, [0, 0, 0, 2, 1])
    weil = ec_frobenius(e)
    counts = point_counts(e, [1, 2, 3])
    for n, count in counts.items():
        assert base_extension(weil, n)[1] == count


def test_torsion_counts():
    group = ec_group(curve(3, 1, [0, 0, 0, 1, 0]))
    assert group.torsion_tower(2, 2) == [2, 4]
    assert group.torsion(1) == 1


def test_integral_frobenius_detection():
    e = curve(2, 2, [0, 0, 1, 0, 0])
    weil = ec_frobenius(e)
    assert weil.coeffs == (4, 4, 1)
    assert has_integral_frobenius(weil)
    assert ec_group(e).structure.invariants == (3, 3)
    assert not has_integral_frobenius(ec_frobenius(curve(2, 1, [0, 0, 1, 0, 0])))


def test_rejections():
    with pytest.raises(CurveSingular):
        curve(3, 1, [0, 0, 0, 0, 0])
    with pytest.raises(InvalidInputError):
        curve(3, 1, [0, 0, 0, 3, 0])
    with pytest.raises(InvalidInputError):
        curve(3, 1, [0, 0, 1])
    with pytest.raises(InvalidInputError):
        curve(3, 1, [0, 0, 0, 1, 0]).over(0)


def test_field_cap_applies_to_extensions():
    e = curve(3, 1, [0, 0, 0, 1, 0])
    use_settings(Settings(field_cap=50))
    with pytest.raises(FieldTooLarge):
        e.over(4)


def test_all_curves_over_f2():
    curves = list(all_curves(2))
    assert len(curves) == 16
    assert all(c.discriminant != 0 for c in curves)


def _sample_curves(p, k, count, seed):
    rng = random.Random(seed)
    q = p ** k
    found = []
    while len(found) < count:
        try:
            found.append(curve(p, k, [rng.randrange(q) for _ in range(5)]))
        except CurveSingular:
            continue
    return found


@pytest.mark.parametrize("p, k", [(5, 1), (7, 1), (11, 1), (2, 2), (3, 2)])
def test_enumeration_matches_frobenius_over_larger_fields(p, k):
    for e in _sample_curves(p, k, 5, seed=100 * p + k):
        weil = ec_frobenius(e)
        assert weil.q == p ** k
        for n in (1, 2):
            count, structure = ec_enumerate(e, n)
            assert base_extension(weil, n)[1] == count
            assert structure.cardinality == count
            # the smaller invariant divides q^n - 1
            if len(structure.invariants) == 2:
                assert (e.q ** n - 1) % structure.invariants[0] == 0
