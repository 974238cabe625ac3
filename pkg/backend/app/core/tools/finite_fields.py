# backend/app/core/tools/finite_fields.py
"""
Finite Field Arithmetic

Elements of F_{p^k} are integer codes c0 + c1·p + ... + c_{k-1}·p^{k-1} of their
coordinate vector with respect to the field's modulus, the lexicographically
first monic irreducible of degree k over F_p. Multiplication goes through
exp/log tables built once per field; FFPolynomial carries polynomials over a
field and ff_poly_factor factors them (squarefree, distinct-degree, then
Cantor-Zassenhaus equal-degree splitting).
"""

import logging
import random
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import Poly, Symbol, isprime, sqrt_mod

from ...config import get_settings
from ..exceptions import FieldTooLarge, InvalidInputError, ZeroElement
from .integers import factor_integer

logger = logging.getLogger(__name__)

_t = Symbol("t")


def _is_irreducible_mod_p(coeffs: Sequence[int], p: int) -> bool:
    """coeffs low-first, monic"""
    return Poly(list(reversed(coeffs)), _t, modulus=p).is_irreducible


def first_irreducible(p: int, k: int) -> Tuple[int, ...]:
    """Lexicographically first monic irreducible of degree k over F_p (lower coefficients as a base-p code)"""
    if k == 1:
        return (0, 1)
    for code in range(p ** k):
        lower = [(code // p ** i) % p for i in range(k)]
        if lower[0] == 0:
            continue
        candidate = tuple(lower) + (1,)
        if _is_irreducible_mod_p(candidate, p):
            return candidate
    raise InvalidInputError(f"no irreducible polynomial of degree {k} over F_{p}")


@dataclass(frozen=True)
class FiniteField:
    """F_{p^k} with elements encoded as integers in [0, p^k)"""
    p: int
    k: int
    modulus: Tuple[int, ...]

    @property
    def order(self) -> int:
        return self.p ** self.k

    def __str__(self) -> str:
        return f"F_{self.order}"

    # coordinate codes

    def digits(self, a: int) -> List[int]:
        out = []
        for _ in range(self.k):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def from_digits(self, digits: Sequence[int]) -> int:
        code = 0
        for d in reversed(digits):
            code = code * self.p + d % self.p
        return code

    def _slow_mul(self, a: int, b: int) -> int:
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * self.k - 1)
        for i, u in enumerate(da):
            if u:
                for j, v in enumerate(db):
                    prod[i + j] = (prod[i + j] + u * v) % self.p
        for i in range(len(prod) - 1, self.k - 1, -1):
            c = prod[i]
            if c:
                for j in range(self.k):
                    prod[i - self.k + j] = (prod[i - self.k + j] - c * self.modulus[j]) % self.p
        return self.from_digits(prod[:self.k])

    def _slow_pow(self, a: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = self._slow_mul(result, a)
            a = self._slow_mul(a, a)
            e >>= 1
        return result

    @cached_property
    def generator(self) -> int:
        """Smallest code generating the multiplicative group"""
        n = self.order - 1
        if n == 1:
            return 1
        cofactors = [n // r for r, _ in factor_integer(n)]
        for g in range(2, self.order):
            if all(self._slow_pow(g, c) != 1 for c in cofactors):
                return g
        raise InvalidInputError(f"{self} has no primitive element")

    @cached_property
    def _tables(self) -> Tuple[List[int], List[int]]:
        n = self.order - 1
        exp = [0] * (2 * n)
        log = [0] * self.order
        g = self.generator
        value = 1
        for i in range(n):
            exp[i] = value
            log[value] = i
            value = self._slow_mul(value, g)
        for i in range(n, 2 * n):
            exp[i] = exp[i - n]
        return exp, log

    # field operations on codes

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.k == 1:
            return (a + b) % self.p
        return self.from_digits([u + v for u, v in zip(self.digits(a), self.digits(b))])

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        if self.k == 1:
            return -a % self.p
        return self.from_digits([-u for u in self.digits(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        exp, log = self._tables
        return exp[log[a] + log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroElement(f"zero has no inverse in {self}")
        if self.k == 1:
            return pow(a, -1, self.p)
        exp, log = self._tables
        return exp[(self.order - 1 - log[a]) % (self.order - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroElement("zero to a negative power")
            return 1 if e == 0 else 0
        if self.k == 1:
            return pow(a, e, self.p)
        exp, log = self._tables
        return exp[(log[a] * e) % (self.order - 1)]

    def scalar(self, c: int) -> int:
        """Image of the integer c under Z -> F_p -> F_{p^k}"""
        return c % self.p

    def sqrt(self, a: int) -> Optional[int]:
        """A square root of a, or None if a is not a square"""
        if a == 0:
            return 0
        if self.k == 1:
            return a if self.p == 2 else sqrt_mod(a, self.p)
        exp, log = self._tables
        la = log[a]
        if self.p == 2:
            # squaring is bijective; halve the log modulo the odd group order
            n = self.order - 1
            return exp[(la * ((n + 1) // 2)) % n] if n > 1 else a
        if la % 2:
            return None
        return exp[la // 2]

    def is_square(self, a: int) -> bool:
        return self.sqrt(a) is not None

    def trace_to_prime(self, a: int) -> int:
        """Absolute trace a + a^p + ... + a^{p^{k-1}}, a code in F_p"""
        total, term = 0, a
        for _ in range(self.k):
            total = self.add(total, term)
            term = self.pow(term, self.p)
        return total

    def elements(self) -> range:
        return range(self.order)

    def element(self, code: int) -> "FFElement":
        return FFElement(self, code % self.order)


def finite_field(p: int, k: int = 1) -> FiniteField:
    """The shared F_{p^k} instance (tables are built lazily and cached with it)"""
    if not isprime(p) or k < 1:
        raise InvalidInputError(f"F_{p}^{k} is not a finite field")
    cap = get_settings().field_cap
    if p ** k > cap:
        raise FieldTooLarge(f"field of size {p}^{k} exceeds the cap {cap}")
    return _shared_field(p, k)


@lru_cache(maxsize=64)
def _shared_field(p: int, k: int) -> FiniteField:
    return FiniteField(p, k, first_irreducible(p, k))


@lru_cache(maxsize=64)
def _embedding_root(small: FiniteField, big: FiniteField) -> int:
    for r in big.elements():
        acc = 0
        for c in reversed(small.modulus):
            acc = big.add(big.mul(acc, r), big.scalar(c))
        if acc == 0:
            return r
    raise InvalidInputError(f"{small} does not embed into {big}")


def embed(small: FiniteField, big: FiniteField, code: int) -> int:
    """Image of an element of F_{p^k} in F_{p^K}, k | K, via a fixed root of the small modulus"""
    if small.p != big.p or big.k % small.k:
        raise InvalidInputError(f"{small} is not a subfield of {big}")
    if small.k == 1:
        return big.scalar(code)
    root = _embedding_root(small, big)
    acc = 0
    for d in reversed(small.digits(code)):
        acc = big.add(big.mul(acc, root), big.scalar(d))
    return acc


@dataclass(frozen=True)
class FFElement:
    field: FiniteField
    code: int

    def _other(self, other) -> int:
        if isinstance(other, FFElement):
            if other.field != self.field:
                raise InvalidInputError("elements of different fields")
            return other.code
        return self.field.scalar(int(other))

    def __add__(self, other) -> "FFElement":
        return FFElement(self.field, self.field.add(self.code, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other) -> "FFElement":
        return FFElement(self.field, self.field.sub(self.code, self._other(other)))

    def __neg__(self) -> "FFElement":
        return FFElement(self.field, self.field.neg(self.code))

    def __mul__(self, other) -> "FFElement":
        return FFElement(self.field, self.field.mul(self.code, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "FFElement":
        return FFElement(self.field, self.field.div(self.code, self._other(other)))

    def __pow__(self, e: int) -> "FFElement":
        return FFElement(self.field, self.field.pow(self.code, e))

    def is_zero(self) -> bool:
        return self.code == 0

    def __repr__(self) -> str:
        return f"{self.field}({self.code})"


@dataclass(frozen=True)
class FFPolynomial:
    """Polynomial over a finite field, coefficient codes low-degree-first, no trailing zeros"""
    field: FiniteField
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        trimmed = tuple(self.coeffs)
        while trimmed and trimmed[-1] == 0:
            trimmed = trimmed[:-1]
        object.__setattr__(self, "coeffs", trimmed)

    @classmethod
    def from_ints(cls, field: FiniteField, coeffs: Sequence[int]) -> "FFPolynomial":
        """Integer coefficients reduced into the prime field"""
        return cls(field, tuple(field.scalar(c) for c in coeffs))

    @classmethod
    def constant(cls, field: FiniteField, c: int) -> "FFPolynomial":
        return cls(field, (c,))

    @classmethod
    def x(cls, field: FiniteField) -> "FFPolynomial":
        return cls(field, (0, 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == (1,)

    def __getitem__(self, j: int) -> int:
        return self.coeffs[j] if 0 <= j < len(self.coeffs) else 0

    def __add__(self, other: "FFPolynomial") -> "FFPolynomial":
        f = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        return FFPolynomial(f, tuple(f.add(self[i], other[i]) for i in range(n)))

    def __neg__(self) -> "FFPolynomial":
        return FFPolynomial(self.field, tuple(self.field.neg(c) for c in self.coeffs))

    def __sub__(self, other: "FFPolynomial") -> "FFPolynomial":
        f = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        return FFPolynomial(f, tuple(f.sub(self[i], other[i]) for i in range(n)))

    def __mul__(self, other: "FFPolynomial") -> "FFPolynomial":
        if self.is_zero() or other.is_zero():
            return FFPolynomial(self.field, ())
        f = self.field
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] = f.add(out[i + j], f.mul(a, b))
        return FFPolynomial(f, tuple(out))

    def scale(self, c: int) -> "FFPolynomial":
        return FFPolynomial(self.field, tuple(self.field.mul(c, a) for a in self.coeffs))

    def monic(self) -> "FFPolynomial":
        if self.is_zero():
            return self
        return self.scale(self.field.inv(self.leading))

    def __divmod__(self, other: "FFPolynomial") -> Tuple["FFPolynomial", "FFPolynomial"]:
        if other.is_zero():
            raise ZeroElement("polynomial division by zero")
        f = self.field
        rem = list(self.coeffs)
        dq = other.degree
        inv_lead = f.inv(other.leading)
        quot = [0] * max(len(rem) - dq, 0)
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i]
            if c == 0:
                continue
            c = f.mul(c, inv_lead)
            quot[i - dq] = c
            for j, b in enumerate(other.coeffs):
                rem[i - dq + j] = f.sub(rem[i - dq + j], f.mul(c, b))
        return FFPolynomial(f, tuple(quot)), FFPolynomial(f, tuple(rem[:dq]) if dq > 0 else ())

    def __floordiv__(self, other: "FFPolynomial") -> "FFPolynomial":
        return divmod(self, other)[0]

    def __mod__(self, other: "FFPolynomial") -> "FFPolynomial":
        return divmod(self, other)[1]

    def __call__(self, a: int) -> int:
        f = self.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = f.add(f.mul(acc, a), c)
        return acc

    def derivative(self) -> "FFPolynomial":
        f = self.field
        return FFPolynomial(f, tuple(f.mul(f.scalar(i), c) for i, c in enumerate(self.coeffs))[1:])

    def powmod(self, e: int, modulus: "FFPolynomial") -> "FFPolynomial":
        result = FFPolynomial.constant(self.field, 1) % modulus
        base = self % modulus
        while e:
            if e & 1:
                result = (result * base) % modulus
            base = (base * base) % modulus
            e >>= 1
        return result

    def roots(self) -> List[int]:
        return [a for a in self.field.elements() if self(a) == 0]

    def __repr__(self) -> str:
        return f"FFPolynomial({self.field}, {list(self.coeffs)})"


def poly_gcd(a: FFPolynomial, b: FFPolynomial) -> FFPolynomial:
    """Monic gcd (zero only when both inputs are zero)"""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a: FFPolynomial, b: FFPolynomial) -> Tuple[FFPolynomial, FFPolynomial, FFPolynomial]:
    """(g, s, t) with s·a + t·b = g monic"""
    field = a.field
    zero, one = FFPolynomial(field, ()), FFPolynomial.constant(field, 1)
    r0, r1, s0, s1, t0, t1 = a, b, one, zero, zero, one
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    c = field.inv(r0.leading)
    return r0.scale(c), s0.scale(c), t0.scale(c)


@dataclass(frozen=True)
class FFFactorization:
    field: FiniteField
    unit: int
    factors: Tuple[Tuple[FFPolynomial, int], ...]

    def expand(self) -> FFPolynomial:
        result = FFPolynomial.constant(self.field, self.unit)
        for g, e in self.factors:
            for _ in range(e):
                result = result * g
        return result


def _pth_root(f: FFPolynomial) -> FFPolynomial:
    field = f.field
    p = field.p
    # inverse Frobenius on coefficients: a -> a^(p^(k-1))
    e = field.order // p
    return FFPolynomial(field, tuple(field.pow(f.coeffs[i], e) for i in range(0, len(f.coeffs), p)))


def _squarefree(f: FFPolynomial) -> List[Tuple[FFPolynomial, int]]:
    out: List[Tuple[FFPolynomial, int]] = []
    c = poly_gcd(f, f.derivative())
    w = f // c
    i = 1
    while not w.is_one():
        y = poly_gcd(w, c)
        fac = w // y
        if not fac.is_one():
            out.append((fac, i))
        w, c = y, c // y
        i += 1
    if not c.is_one():
        for g, e in _squarefree(_pth_root(c)):
            out.append((g, e * f.field.p))
    return out


def _distinct_degree(f: FFPolynomial) -> List[Tuple[FFPolynomial, int]]:
    field = f.field
    x = FFPolynomial.x(field)
    out = []
    h = x % f
    rest = f
    d = 1
    while rest.degree >= 2 * d:
        h = h.powmod(field.order, rest)
        g = poly_gcd(rest, h - x)
        if not g.is_one():
            out.append((g, d))
            rest = rest // g
            h = h % rest
        d += 1
    if rest.degree > 0:
        out.append((rest, rest.degree))
    return out


def _equal_degree(f: FFPolynomial, d: int, rng: random.Random) -> List[FFPolynomial]:
    if f.degree == d:
        return [f]
    field = f.field
    while True:
        a = FFPolynomial(field, tuple(rng.randrange(field.order) for _ in range(f.degree)))
        if a.degree < 1:
            continue
        if field.p == 2:
            # trace map down to F_2
            b = a % f
            term = b
            for _ in range(field.k * d - 1):
                term = (term * term) % f
                b = b + term
        else:
            b = a.powmod((field.order ** d - 1) // 2, f) - FFPolynomial.constant(field, 1)
        g = poly_gcd(f, b)
        if 0 < g.degree < f.degree:
            return _equal_degree(g, d, rng) + _equal_degree(f // g, d, rng)


def ff_poly_factor(f: FFPolynomial, seed: int = 0) -> FFFactorization:
    """Monic irreducible factors with multiplicities, sorted by (degree, coefficients)"""
    if f.is_zero():
        raise ZeroElement("cannot factor the zero polynomial")
    unit = f.leading
    monic = f.monic()
    rng = random.Random(seed)
    collected: Dict[Tuple[int, ...], int] = {}
    for part, e in _squarefree(monic):
        for block, d in _distinct_degree(part):
            for g in _equal_degree(block, d, rng):
                collected[g.coeffs] = collected.get(g.coeffs, 0) + e
    factors = sorted(
        ((FFPolynomial(f.field, coeffs), e) for coeffs, e in collected.items()),
        key=lambda ge: (ge[0].degree, ge[0].coeffs),
    )
    return FFFactorization(f.field, unit, tuple(factors))


def monic_polynomials(field: FiniteField, degree: int):
    """All monic polynomials of the given degree"""
    for lower in product(range(field.order), repeat=degree):
        yield FFPolynomial(field, tuple(reversed(lower)) + (1,))


def prime_field(p: int) -> FiniteField:
    """F_p without the enumeration cap; prime fields need no tables"""
    if not isprime(p):
        raise InvalidInputError(f"{p} is not prime")
    return _shared_field(p, 1)
