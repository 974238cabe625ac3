# backend/app/core/curves/hyperelliptic.py
"""
Genus-2 Jacobian Oracle

Curves y^2 = f(x) with f monic of degree 5 over an odd prime field, divisor
classes as reduced Mumford pairs (u, v), Cantor composition and reduction,
exhaustive enumeration of J(F_{p^n}), and the characteristic polynomial of
Frobenius from the point counts over F_p and F_{p^2}.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from math import comb, isqrt
from typing import Dict, List, Sequence, Tuple

from ...config import get_settings
from ..exceptions import (
    ConsistencyError,
    CurveSingular,
    FieldTooLarge,
    InvalidInputError,
    NotPrimePowerShape,
    OutOfTheoremScope,
)
from ..graph_state import AbelianGroupStructure, WeilPolynomial
from ..tools.finite_fields import (
    FFPolynomial,
    FiniteField,
    embed,
    ff_poly_factor,
    finite_field,
    poly_gcd,
    poly_xgcd,
)
from ..weil import validate_weil
from .groups import EnumeratedGroup, enumerate_group

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MumfordDivisor:
    """Reduced divisor class: u monic with deg u <= 2, deg v < deg u, u | v^2 - f"""
    u: FFPolynomial
    v: FFPolynomial

    @property
    def degree(self) -> int:
        return self.u.degree

    def is_identity(self) -> bool:
        return self.u.is_one()

    def __str__(self) -> str:
        return f"({list(self.u.coeffs)}, {list(self.v.coeffs)})"


@dataclass(frozen=True)
class HyperellipticCurve:
    """y^2 = x^5 + f4·x^4 + ... + f0 over F_p, p odd"""
    p: int
    f: Tuple[int, ...]

    def __post_init__(self):
        if self.p < 3:
            raise InvalidInputError("the odd model needs characteristic at least 3")
        if len(self.f) != 6 or self.f[-1] != 1:
            raise InvalidInputError("f must be monic of degree 5")
        object.__setattr__(self, "f", tuple(c % self.p for c in self.f))
        poly = self.f_over(finite_field(self.p))
        if poly_gcd(poly, poly.derivative()).degree > 0:
            raise CurveSingular(f"{self} has a repeated root")

    @classmethod
    def from_lower(cls, p: int, lower: Sequence[int]) -> "HyperellipticCurve":
        """From f0, ..., f4"""
        if len(lower) != 5:
            raise InvalidInputError(f"expected f0,...,f4, got {len(lower)} values")
        return cls(p, tuple(lower) + (1,))

    def f_over(self, field: FiniteField) -> FFPolynomial:
        return FFPolynomial.from_ints(field, self.f)

    def over(self, n: int) -> "ExtendedJacobian":
        if n < 1:
            raise InvalidInputError(f"extension degree {n} must be positive")
        return ExtendedJacobian(self, finite_field(self.p, n))

    def identity(self, field: FiniteField) -> MumfordDivisor:
        return MumfordDivisor(FFPolynomial.constant(field, 1), FFPolynomial(field, ()))

    def to_dict(self) -> Dict[str, object]:
        return {"p": self.p, "f": list(self.f)}

    def __str__(self) -> str:
        return f"y^2 = f{list(self.f)} over F_{self.p}"


def negate(divisor: MumfordDivisor) -> MumfordDivisor:
    return MumfordDivisor(divisor.u, -divisor.v)


def cantor_add(first: MumfordDivisor, second: MumfordDivisor, curve: HyperellipticCurve) -> MumfordDivisor:
    """Reduced representative of first + second"""
    field = first.u.field
    f = curve.f_over(field)
    u1, v1, u2, v2 = first.u, first.v, second.u, second.v

    d0, e1, e2 = poly_xgcd(u1, u2)
    d, c1, c2 = poly_xgcd(d0, v1 + v2)
    s1, s2, s3 = c1 * e1, c1 * e2, c2
    u = (u1 * u2) // (d * d)
    v = ((s1 * u1 * v2 + s2 * u2 * v1 + s3 * (v1 * v2 + f)) // d) % u

    while u.degree > 2:
        u = (f - v * v) // u
        v = (-v) % u
    u_monic = u.monic()
    return MumfordDivisor(u_monic, v % u_monic)


@dataclass(frozen=True)
class ExtendedJacobian:
    """J(F_{p^n}) for a fixed curve and n"""
    curve: HyperellipticCurve
    field: FiniteField

    @cached_property
    def f(self) -> FFPolynomial:
        return self.curve.f_over(self.field)

    def add(self, first: MumfordDivisor, second: MumfordDivisor) -> MumfordDivisor:
        return cantor_add(first, second, self.curve)

    @property
    def identity(self) -> MumfordDivisor:
        return self.curve.identity(self.field)

    def affine_points(self) -> List[Tuple[int, int]]:
        F = self.field
        out = []
        for x in F.elements():
            y = F.sqrt(self.f(x))
            if y is None:
                continue
            out.extend(sorted({(x, y), (x, F.neg(y))}))
        return out

    def curve_count(self) -> int:
        """#C(F_{p^n}) including the point at infinity"""
        return 1 + len(self.affine_points())

    def _conjugate_pairs(self) -> List[MumfordDivisor]:
        """Degree-2 classes supported on a point over F_{p^2n} and its conjugate"""
        small = self.field
        big = finite_field(small.p, 2 * small.k)
        back = {embed(small, big, c): c for c in small.elements()}
        f_big = self.curve.f_over(big)
        Q = small.order
        seen = set()
        out = []
        for alpha in big.elements():
            if alpha in back or alpha in seen:
                continue
            conj = big.pow(alpha, Q)
            seen.update((alpha, conj))
            beta = big.sqrt(f_big(alpha))
            if beta is None:
                continue
            u1 = back[big.neg(big.add(alpha, conj))]
            u0 = back[big.mul(alpha, conj)]
            u = FFPolynomial(small, (u0, u1, 1))
            for b in sorted({beta, big.neg(beta)}):
                b_conj = big.pow(b, Q)
                slope = big.div(big.sub(b, b_conj), big.sub(alpha, conj))
                v0 = big.sub(b, big.mul(slope, alpha))
                out.append(MumfordDivisor(u, FFPolynomial(small, (back[v0], back[slope]))))
        return out

    def divisors(self) -> List[MumfordDivisor]:
        """Every reduced divisor class with F_{p^n}-rational (u, v)"""
        F = self.field
        _require_jacobian_cap(F.order)
        points = self.affine_points()
        out = [self.identity]
        for x, y in points:
            out.append(MumfordDivisor(FFPolynomial(F, (F.neg(x), 1)), FFPolynomial(F, (y,))))
        for i, (x1, y1) in enumerate(points):
            for x2, y2 in points[i + 1:]:
                if x1 == x2:
                    continue
                u = FFPolynomial(F, (F.neg(x1), 1)) * FFPolynomial(F, (F.neg(x2), 1))
                slope = F.div(F.sub(y2, y1), F.sub(x2, x1))
                v0 = F.sub(y1, F.mul(slope, x1))
                out.append(MumfordDivisor(u, FFPolynomial(F, (v0, slope))))
        f_prime = self.f.derivative()
        for x, y in points:
            if y == 0:
                continue
            # v = y + v1·(x - a) with 2·y·v1 = f'(a)
            slope = F.div(f_prime(x), F.mul(F.scalar(2), y))
            u = FFPolynomial(F, (F.neg(x), 1)) * FFPolynomial(F, (F.neg(x), 1))
            v0 = F.sub(y, F.mul(slope, x))
            out.append(MumfordDivisor(u, FFPolynomial(F, (v0, slope))))
        out.extend(self._conjugate_pairs())
        return out

    def group(self) -> EnumeratedGroup:
        return enumerate_group(self.divisors(), self.add, self.identity)

    def two_torsion_expected(self) -> int:
        """1 + r1 + C(r1, 2) + r2 from the factorization of f over F_{p^n}"""
        factored = ff_poly_factor(self.f)
        r1 = sum(1 for g, _ in factored.factors if g.degree == 1)
        r2 = sum(1 for g, _ in factored.factors if g.degree == 2)
        return 1 + r1 + comb(r1, 2) + r2


def _require_jacobian_cap(Q: int) -> None:
    bound = (isqrt(Q) + 2) ** 4
    cap = get_settings().jacobian_cap
    if bound > cap:
        raise FieldTooLarge(f"J(F_{Q}) may have up to {bound} elements, over the cap {cap}")


def jac_group(curve: HyperellipticCurve, n: int = 1) -> EnumeratedGroup:
    jacobian = curve.over(n)
    group = jacobian.group()
    if group.structure.rank > 4:
        raise ConsistencyError(f"J(F_{curve.p}^{n}) has rank {group.structure.rank} > 4")
    two_torsion = group.torsion(2)
    if two_torsion != jacobian.two_torsion_expected():
        raise ConsistencyError(
            f"J[2] has {two_torsion} elements but f predicts {jacobian.two_torsion_expected()}"
        )
    logger.debug("%s over degree %d: %d classes, %s", curve, n, group.count, group.structure)
    return group


def jac_enumerate(curve: HyperellipticCurve, n: int = 1) -> Tuple[int, AbelianGroupStructure]:
    """#J(F_{p^n}) and its invariant factors"""
    group = jac_group(curve, n)
    return group.count, group.structure


def jac_frobenius(curve: HyperellipticCurve) -> WeilPolynomial:
    """
    P(t) = t^4 + a1·t^3 + a2·t^2 + p·a1·t + p^2 from #C(F_p) and #C(F_{p^2}).

    With S_n = p^n + 1 - #C(F_{p^n}) the power sums of the Frobenius
    eigenvalues, a1 = -S_1 and a2 = (S_1^2 - S_2)/2. The result must satisfy
    P(1) = #J(F_p), which is checked by enumeration.
    """
    p = curve.p
    s1 = p + 1 - curve.over(1).curve_count()
    s2 = p * p + 1 - curve.over(2).curve_count()
    a1 = -s1
    if (s1 * s1 - s2) % 2:
        raise ConsistencyError(f"power sums {s1}, {s2} of {curve} are inconsistent")
    a2 = (s1 * s1 - s2) // 2
    try:
        weil = validate_weil(p, [p * p, p * a1, a2, a1, 1])
    except NotPrimePowerShape as e:
        raise OutOfTheoremScope(f"J is not simple over F_{p}: {e.detail}")
    except InvalidInputError as e:
        raise ConsistencyError(f"point counts of {curve} give an invalid Weil polynomial: {e}")
    count = len(curve.over(1).divisors())
    if weil.poly(1) != count:
        raise ConsistencyError(f"P(1) = {weil.poly(1)} but #J(F_{p}) = {count}")
    return weil
