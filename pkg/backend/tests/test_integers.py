# backend/tests/test_integers.py
import pytest

from backend.app.core.exceptions import InvalidInputError, NotPrimePower
from backend.app.core.tools.integers import factor_integer, prime_divisors, prime_power


def test_factor_small():
    assert factor_integer(360) == [(2, 3), (3, 2), (5, 1)]
    assert factor_integer(1) == []
    assert factor_integer(97) == [(97, 1)]


def test_factor_beyond_trial_division():
    assert factor_integer(1000003 * 1000033) == [(1000003, 1), (1000033, 1)]
    assert factor_integer(1000003 ** 2 * 12) == [(2, 2), (3, 1), (1000003, 2)]


def test_factor_rejects_non_positive():
    with pytest.raises(InvalidInputError):
        factor_integer(0)
    with pytest.raises(InvalidInputError):
        factor_integer(-5)


def test_prime_divisors():
    assert prime_divisors(-12) == [2, 3]
    assert prime_divisors(0) == []


@pytest.mark.parametrize("q, expected", [(2, (2, 1)), (8, (2, 3)), (9, (3, 2)), (64, (2, 6)), (3125, (5, 5))])
def test_prime_power(q, expected):
    assert prime_power(q) == expected


@pytest.mark.parametrize("q", [1, 6, 12, 36, 100])
def test_not_prime_power(q):
    with pytest.raises(NotPrimePower):
        prime_power(q)
