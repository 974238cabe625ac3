# backend/tests/conftest.py
import pytest

from backend.app.config import Settings, use_settings
from backend.app.core.orders import order_construct
from backend.app.core.weil import validate_weil


@pytest.fixture(autouse=True)
def default_settings():
    """Every test starts from the built-in caps"""
    use_settings(Settings())
    yield
    use_settings(None)


@pytest.fixture
def weil_sqrt_m2():
    """t^2 + 2 over F_2: pi = sqrt(-2), Z[pi] is maximal"""
    return validate_weil(2, [2, 0, 1])


@pytest.fixture
def weil_sqrt_m3():
    """t^2 + 3 over F_3: Z[pi] has index 2 in O_K"""
    return validate_weil(3, [3, 0, 1])


@pytest.fixture
def weil_square_class():
    """(t^2 - 3)^2 over F_3"""
    return validate_weil(3, [9, 0, -6, 0, 1])


@pytest.fixture
def zpi_m2(weil_sqrt_m2):
    return order_construct(weil_sqrt_m2, "zpi")
