# backend/tests/test_linalg.py
import random
from fractions import Fraction

import pytest

from backend.app.core.exceptions import InvalidInputError, NotFullRank, SingularMatrix
from backend.app.core.tools.linalg import (
    IntMatrix,
    canonical_lattice,
    hnf,
    lattice_contains,
    lattice_intersection,
    preimage_lattice,
    rational_det,
    rational_inverse,
    snf_invariants,
    full_rank_lattice,
)


def test_hnf_small():
    m = IntMatrix.from_rows([[2, 4], [6, 8]])
    h, u = hnf(m)
    assert h.to_rows() == [[2, 0], [0, 4]]
    assert u @ m == h
    assert abs(u.det()) == 1


def test_hnf_random_transform_is_unimodular():
    rng = random.Random(7)
    for _ in range(20):
        m = IntMatrix.from_rows([[rng.randint(-9, 9) for _ in range(3)] for _ in range(4)])
        h, u = hnf(m)
        assert u @ m == h
        assert abs(u.det()) == 1
        assert h.is_upper_triangular()


def test_snf_invariants():
    assert snf_invariants(IntMatrix.from_rows([[2, 0], [0, 3]])) == [1, 6]
    assert snf_invariants(IntMatrix.from_rows([[2, 4], [6, 8]])) == [2, 4]
    assert snf_invariants(IntMatrix.diagonal([4, 6, 1])) == [1, 2, 12]


def test_snf_product_is_determinant():
    rng = random.Random(11)
    for _ in range(20):
        m = IntMatrix.from_rows([[rng.randint(-6, 6) for _ in range(3)] for _ in range(3)])
        if m.det() == 0:
            continue
        inv = snf_invariants(m)
        product = 1
        for d in inv:
            product *= d
        assert product == abs(m.det())
        assert all(b % a == 0 for a, b in zip(inv, inv[1:]))


def test_snf_rejects_singular_and_non_square():
    with pytest.raises(SingularMatrix):
        snf_invariants(IntMatrix.from_rows([[1, 2], [2, 4]]))
    with pytest.raises(InvalidInputError):
        snf_invariants(IntMatrix.from_rows([[1, 2, 3], [4, 5, 6]]))


def test_rational_helpers():
    assert rational_det([[1, 2], [3, 4]]) == -2
    inv = rational_inverse([[2, 0], [0, Fraction(1, 3)]])
    assert inv == [[Fraction(1, 2), 0], [0, 3]]
    with pytest.raises(SingularMatrix):
        rational_inverse([[1, 2], [2, 4]])


def test_canonical_lattice_shapes():
    den, num = canonical_lattice([[Fraction(1, 2), 0], [0, 1]], 2)
    assert den == 2
    assert num.to_rows() == [[1, 0], [0, 2]]

    den, num = canonical_lattice([[2, 4], [1, 2]], 2)
    assert den == 1
    assert num.to_rows() == [[1, 2]]

    with pytest.raises(NotFullRank):
        full_rank_lattice([[2, 4], [1, 2]], 2)


def test_lattice_intersection_and_containment():
    first = (1, IntMatrix.from_rows([[2, 0], [0, 1]]))
    second = (1, IntMatrix.from_rows([[1, 0], [0, 3]]))
    den, num = lattice_intersection(first, second, 2)
    assert den == 1
    assert num.to_rows() == [[2, 0], [0, 3]]

    half = (2, IntMatrix.identity(2))
    assert lattice_contains(half, [[Fraction(1, 2), Fraction(3, 2)]])
    assert not lattice_contains(half, [[Fraction(1, 3), 0]])


def test_preimage_lattice():
    den, num = preimage_lattice([[2, 0], [0, 3]], 2)
    assert den == 6
    assert num.to_rows() == [[3, 0], [0, 2]]
