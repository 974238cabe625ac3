# backend/app/core/tools/polynomials.py
"""
Integer Polynomials

IntPolynomial is the low-degree-first coefficient carrier used for Weil
polynomials, minimal polynomials and characteristic polynomials. Resultants,
Sturm chains and factorization over Z are delegated to sympy; everything
stays exact.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple, Union

from sympy import Poly, Rational as SymRational, Symbol, sturm
from sympy import resultant as sym_resultant

from ...config import get_settings
from ..exceptions import DegreeCapExceeded, InvalidInputError

logger = logging.getLogger(__name__)

x = Symbol("x")
Number = Union[int, Fraction]


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial, coefficients low-degree-first with no trailing zeros"""
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        trimmed = tuple(int(c) for c in self.coeffs)
        while trimmed and trimmed[-1] == 0:
            trimmed = trimmed[:-1]
        object.__setattr__(self, "coeffs", trimmed)

    @classmethod
    def of(cls, *coeffs: int) -> "IntPolynomial":
        return cls(tuple(coeffs))

    @classmethod
    def monomial(cls, degree: int, coeff: int = 1) -> "IntPolynomial":
        return cls((0,) * degree + (coeff,))

    @classmethod
    def from_sympy(cls, poly: Poly) -> "IntPolynomial":
        coeffs = [c for c in reversed(poly.all_coeffs())]
        for c in coeffs:
            if not c.is_integer:
                raise InvalidInputError(f"non-integral coefficient {c}")
        return cls(tuple(int(c) for c in coeffs))

    def to_sympy(self, var: Symbol = x) -> Poly:
        return Poly(list(reversed(self.coeffs)) or [0], var, domain="ZZ")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return self.leading == 1

    def __getitem__(self, j: int) -> int:
        return self.coeffs[j] if 0 <= j < len(self.coeffs) else 0

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPolynomial(tuple(self[i] + other[i] for i in range(n)))

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return self + (-other)

    def __mul__(self, other: Union["IntPolynomial", int]) -> "IntPolynomial":
        if isinstance(other, int):
            return IntPolynomial(tuple(c * other for c in self.coeffs))
        if self.is_zero() or other.is_zero():
            return IntPolynomial(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "IntPolynomial":
        result = IntPolynomial((1,))
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __call__(self, value: Number) -> Number:
        acc: Number = 0
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial(tuple(i * c for i, c in enumerate(self.coeffs))[1:])

    def reflect(self) -> "IntPolynomial":
        """h(-y)"""
        return IntPolynomial(tuple(c if i % 2 == 0 else -c for i, c in enumerate(self.coeffs)))

    def __str__(self) -> str:
        return str(self.to_sympy().as_expr()) if self.coeffs else "0"


@dataclass(frozen=True)
class PolyFactorization:
    """unit · ∏ factor^exponent, factors primitive with positive leading coefficient"""
    unit: int
    factors: Tuple[Tuple[IntPolynomial, int], ...]

    def expand(self) -> IntPolynomial:
        result = IntPolynomial((self.unit,))
        for f, e in self.factors:
            result = result * f ** e
        return result


def _require_nonzero(*polys: IntPolynomial) -> None:
    for f in polys:
        if f.is_zero():
            raise InvalidInputError("zero polynomial")


def resultant(f: IntPolynomial, g: IntPolynomial) -> int:
    """Res(f, g) = lc(f)^deg g · ∏ g(α) over the roots α of f"""
    _require_nonzero(f, g)
    if g.degree == 0:
        return g.leading ** f.degree
    if f.degree == 0:
        return f.leading ** g.degree
    return int(sym_resultant(f.to_sympy(), g.to_sympy()))


def power_charpoly(f: IntPolynomial, n: int) -> IntPolynomial:
    """Monic polynomial whose roots are the n-th powers of the roots of the monic f"""
    if n == 1:
        return f
    t = Symbol("t")
    res = sym_resultant(f.to_sympy().as_expr(), x ** n - t, x)
    poly = IntPolynomial.from_sympy(Poly(res, t))
    return -poly if poly.leading < 0 else poly


def _sign(value) -> int:
    # sympy comparisons give BooleanAtom, which does not support arithmetic
    numerator = int(SymRational(value).p)
    return (numerator > 0) - (numerator < 0)


def _sign_changes(chain: List[Poly], point: Fraction) -> int:
    at = SymRational(point.numerator, point.denominator)
    signs = [s for s in (_sign(p.eval(at)) for p in chain) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(h: IntPolynomial, lo: Number, hi: Number) -> int:
    """
    Number of distinct real roots of the squarefree h in (lo, hi].

    lo must not be a root of h.
    """
    _require_nonzero(h)
    if h.degree < 1:
        return 0
    chain = sturm(h.to_sympy())
    return _sign_changes(chain, Fraction(lo)) - _sign_changes(chain, Fraction(hi))


def root_bound(h: IntPolynomial) -> int:
    """Cauchy bound: every complex root has absolute value strictly below it"""
    lead = abs(h.leading)
    return 1 + max((abs(c) + lead - 1) // lead for c in h.coeffs[:-1]) if h.degree > 0 else 1


def squarefree_part(f: IntPolynomial) -> IntPolynomial:
    _require_nonzero(f)
    part = IntPolynomial.from_sympy(f.to_sympy().sqf_part())
    return -part if part.leading < 0 else part


def zz_poly_factor(f: IntPolynomial) -> PolyFactorization:
    """Factor over the integers; factors sorted by (degree, coefficients)"""
    _require_nonzero(f)
    cap = get_settings().poly_degree_cap
    if f.degree > cap:
        raise DegreeCapExceeded(f"degree {f.degree} exceeds the factorization cap {cap}")
    if f.degree == 0:
        return PolyFactorization(f.leading, ())

    content, pieces = f.to_sympy().factor_list()
    unit = int(content)
    factors = []
    for piece, e in pieces:
        g = IntPolynomial.from_sympy(piece)
        if g.leading < 0:
            g = -g
            unit *= (-1) ** e
        factors.append((g, int(e)))
    factors.sort(key=lambda fe: (fe[0].degree, fe[0].coeffs, fe[1]))
    logger.debug("factored %s into %d pieces", f, len(factors))
    return PolyFactorization(unit, tuple(factors))


def is_irreducible(f: IntPolynomial) -> bool:
    if f.degree < 1:
        return False
    fac = zz_poly_factor(f)
    return len(fac.factors) == 1 and fac.factors[0][1] == 1 and abs(fac.unit) == 1


def poly_from_text(text: str) -> IntPolynomial:
    """Parse comma-separated low-degree-first integer coefficients"""
    try:
        coeffs = [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as e:
        raise InvalidInputError(f"bad coefficient list {text!r}: {e}")
    if not coeffs:
        raise InvalidInputError("empty coefficient list")
    return IntPolynomial(tuple(coeffs))


def norm_from_coefficients(m: IntPolynomial, coeffs: Sequence[Number]) -> Fraction:
    """N(s) = Res(m, s) for s = Σ coeffs[i]·t^i in Q[t]/(m), m monic"""
    _require_nonzero(m)
    values = [Fraction(c) for c in coeffs]
    while values and values[-1] == 0:
        values.pop()
    if not values:
        return Fraction(0)
    if len(values) == 1:
        return values[0] ** m.degree
    s = Poly([SymRational(c.numerator, c.denominator) for c in reversed(values)], x, domain="QQ")
    res = sym_resultant(Poly(list(reversed(m.coeffs)), x, domain="QQ"), s)
    res = SymRational(res)
    return Fraction(int(res.p), int(res.q))
