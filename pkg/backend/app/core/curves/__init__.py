# backend/app/core/curves/__init__.py
"""Ground-truth oracles: elliptic curves and genus-2 Jacobians over small finite fields"""

from typing import Dict, Sequence, Union

from ..exceptions import InvalidInputError
from ..graph_state import WeilPolynomial
from .elliptic import EllipticCurve, ec_frobenius, ec_group
from .groups import EnumeratedGroup
from .hyperelliptic import HyperellipticCurve, jac_frobenius, jac_group

Curve = Union[EllipticCurve, HyperellipticCurve]


def build_curve(kind: str, p: int, k: int, coeffs: Sequence[int]) -> Curve:
    """'ec' takes a1,a2,a3,a4,a6 over F_{p^k}; 'jac' takes f0,...,f4 over F_p"""
    if kind == "ec":
        return EllipticCurve.from_coefficients(p, k, coeffs)
    if kind == "jac":
        if k != 1:
            raise InvalidInputError("genus-2 curves are supported over prime fields only")
        return HyperellipticCurve.from_lower(p, coeffs)
    raise InvalidInputError(f"unknown curve kind {kind!r}")


def frobenius_of(curve: Curve) -> WeilPolynomial:
    if isinstance(curve, EllipticCurve):
        return ec_frobenius(curve)
    return jac_frobenius(curve)


def group_of(curve: Curve, n: int) -> EnumeratedGroup:
    if isinstance(curve, EllipticCurve):
        return ec_group(curve, n)
    return jac_group(curve, n)


def count_of(curve: Curve, n: int) -> int:
    """#A(F_{q^n}) without element orders"""
    if isinstance(curve, EllipticCurve):
        return curve.over(n).count()
    return len(curve.over(n).divisors())


def point_counts(curve: Curve, degrees: Sequence[int]) -> Dict[int, int]:
    """#A(F_{q^n}) for each n"""
    return {n: count_of(curve, n) for n in degrees}
