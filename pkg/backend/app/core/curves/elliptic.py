# backend/app/core/curves/elliptic.py
"""
Elliptic Curve Oracle

Exhaustive ground truth for dimension one: the points of a general
Weierstrass curve y^2 + a1·xy + a3·y = x^3 + a2·x^2 + a4·x + a6 over
F_{q^n}, the chord-and-tangent group law, the group structure read off from
element orders, and the characteristic polynomial of Frobenius from the
point count over F_q.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from ..exceptions import ConsistencyError, CurveSingular, InvalidInputError
from ..graph_state import AbelianGroupStructure, WeilPolynomial
from ..tools.finite_fields import FiniteField, embed, finite_field
from ..weil import validate_weil
from .groups import EnumeratedGroup, enumerate_group

logger = logging.getLogger(__name__)

Point = Optional[Tuple[int, int]]
INFINITY: Point = None


@dataclass(frozen=True)
class EllipticCurve:
    """Weierstrass curve over F_{p^k}; coefficients are field codes"""
    p: int
    k: int
    a1: int
    a2: int
    a3: int
    a4: int
    a6: int

    def __post_init__(self):
        field = self.base_field
        for name in ("a1", "a2", "a3", "a4", "a6"):
            value = getattr(self, name)
            if not 0 <= value < field.order:
                raise InvalidInputError(f"{name} = {value} is not a code of {field}")
        if self.discriminant == 0:
            raise CurveSingular(f"{self} is singular")

    @classmethod
    def from_coefficients(cls, p: int, k: int, coeffs: Sequence[int]) -> "EllipticCurve":
        if len(coeffs) != 5:
            raise InvalidInputError(f"expected a1,a2,a3,a4,a6, got {len(coeffs)} values")
        return cls(p, k, *coeffs)

    @property
    def base_field(self) -> FiniteField:
        return finite_field(self.p, self.k)

    @property
    def q(self) -> int:
        return self.p ** self.k

    @property
    def coefficients(self) -> Tuple[int, int, int, int, int]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def discriminant(self) -> int:
        F = self.base_field
        a1, a2, a3, a4, a6 = (F.element(c) for c in self.coefficients)
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        disc = -(b2 * b2 * b8) - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6
        return disc.code

    def over(self, n: int) -> "ExtendedCurve":
        if n < 1:
            raise InvalidInputError(f"extension degree {n} must be positive")
        return ExtendedCurve(self, finite_field(self.p, self.k * n))

    def to_dict(self) -> Dict[str, int]:
        return {"p": self.p, "k": self.k, "a1": self.a1, "a2": self.a2,
                "a3": self.a3, "a4": self.a4, "a6": self.a6}

    def __str__(self) -> str:
        return f"E[{','.join(str(c) for c in self.coefficients)}]/F_{self.q}"


@dataclass(frozen=True)
class ExtendedCurve:
    """The curve with its coefficients embedded in F_{q^n}"""
    curve: EllipticCurve
    field: FiniteField

    @cached_property
    def coeffs(self) -> Tuple[int, ...]:
        base = self.curve.base_field
        return tuple(embed(base, self.field, c) for c in self.curve.coefficients)

    @cached_property
    def _artin_schreier(self) -> Dict[int, int]:
        """z^2 + z -> z, one preimage per image (characteristic 2 only)"""
        F = self.field
        table: Dict[int, int] = {}
        for z in F.elements():
            table.setdefault(F.add(F.mul(z, z), z), z)
        return table

    def _solve_y(self, x: int) -> List[int]:
        """All y with y^2 + (a1·x + a3)·y = x^3 + a2·x^2 + a4·x + a6"""
        F = self.field
        a1, a2, a3, a4, a6 = self.coeffs
        b = F.add(F.mul(a1, x), a3)
        xx = F.mul(x, x)
        c = F.add(F.add(F.mul(xx, x), F.mul(a2, xx)), F.add(F.mul(a4, x), a6))
        if F.p == 2:
            if b == 0:
                return [F.sqrt(c)]
            # y = b·z turns the equation into z^2 + z = c/b^2
            z = self._artin_schreier.get(F.div(c, F.mul(b, b)))
            if z is None:
                return []
            return sorted({F.mul(b, z), F.mul(b, F.add(z, 1))})
        disc = F.add(F.mul(b, b), F.mul(F.scalar(4), c))
        root = F.sqrt(disc)
        if root is None:
            return []
        half = F.inv(F.scalar(2))
        return sorted({F.mul(F.sub(root, b), half), F.mul(F.sub(F.neg(root), b), half)})

    def points(self) -> List[Point]:
        """Infinity first, then affine points by (x, y) code"""
        out: List[Point] = [INFINITY]
        for x in self.field.elements():
            out.extend((x, y) for y in self._solve_y(x))
        return out

    def count(self) -> int:
        return 1 + sum(len(self._solve_y(x)) for x in self.field.elements())

    def is_on_curve(self, point: Point) -> bool:
        if point is INFINITY:
            return True
        x, y = point
        return y in self._solve_y(x)

    def neg(self, point: Point) -> Point:
        if point is INFINITY:
            return point
        F = self.field
        a1, _, a3, _, _ = self.coeffs
        x, y = point
        return (x, F.sub(F.neg(y), F.add(F.mul(a1, x), a3)))

    def add(self, first: Point, second: Point) -> Point:
        if first is INFINITY:
            return second
        if second is INFINITY:
            return first
        F = self.field
        a1, a2, a3, a4, a6 = (F.element(c) for c in self.coeffs)
        x1, y1 = (F.element(c) for c in first)
        x2, y2 = (F.element(c) for c in second)
        if x1 == x2:
            if (y1 + y2 + a1 * x2 + a3).is_zero():
                return INFINITY
            denom = 2 * y1 + a1 * x1 + a3
            slope = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / denom
            intercept = (-(x1 * x1 * x1) + a4 * x1 + 2 * a6 - a3 * y1) / denom
        else:
            slope = (y2 - y1) / (x2 - x1)
            intercept = (y1 * x2 - y2 * x1) / (x2 - x1)
        x3 = slope * slope + a1 * slope - a2 - x1 - x2
        y3 = -(slope + a1) * x3 - intercept - a3
        return (x3.code, y3.code)

    def group(self) -> EnumeratedGroup:
        return enumerate_group(self.points(), self.add, INFINITY)


def ec_enumerate(curve: EllipticCurve, n: int = 1) -> Tuple[int, AbelianGroupStructure]:
    """#E(F_{q^n}) and its invariant factors"""
    group = ec_group(curve, n)
    return group.count, group.structure


def ec_group(curve: EllipticCurve, n: int = 1) -> EnumeratedGroup:
    group = curve.over(n).group()
    if len(group.structure.invariants) > 2:
        raise ConsistencyError(f"{curve} over F_{curve.q}^{n} has rank {group.structure.rank} > 2")
    logger.debug("%s over degree %d: %d points, %s", curve, n, group.count, group.structure)
    return group


def ec_frobenius(curve: EllipticCurve) -> WeilPolynomial:
    """t^2 - a·t + q with a = q + 1 - #E(F_q)"""
    q = curve.q
    trace = q + 1 - curve.over(1).count()
    try:
        return validate_weil(q, [q, -trace, 1])
    except InvalidInputError as e:
        raise ConsistencyError(f"point count of {curve} violates the Hasse bound: {e}")


def has_integral_frobenius(weil: WeilPolynomial) -> bool:
    """P = (t - c)^2 with c^2 = q"""
    return weil.field_degree == 1


def all_curves(p: int, k: int = 1) -> Iterator[EllipticCurve]:
    """Every nonsingular Weierstrass curve over F_{p^k}, in lexicographic coefficient order"""
    q = finite_field(p, k).order
    for coeffs in product(range(q), repeat=5):
        try:
            yield EllipticCurve(p, k, *coeffs)
        except CurveSingular:
            continue

