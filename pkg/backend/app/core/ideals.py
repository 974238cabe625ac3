# backend/app/core/ideals.py
"""
Fractional Ideals of Orders

Ideals are stored in the order's own basis coordinates as a canonical
(denominator, HNF numerator) pair, so two ideals are equal exactly when
their dataclass fields are. Provides sums, products, colon ideals, the
invertibility and Gorenstein tests, the conductor, and factorization of
principal ideals coprime to the conductor through O_K (Kummer-Dedekind
followed by contraction).
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterator, List, Sequence, Tuple

from ..config import get_settings
from .exceptions import (
    BadPrime,
    ConsistencyError,
    InvalidInputError,
    NotCoprime,
    NotFullRank,
    NotInvertiblePrime,
    ZeroElement,
    ZeroIdeal,
)
from .graph_state import AbelianGroupStructure
from .orders import FieldElement, NumberFieldOrder, maximal_order
from .tools.finite_fields import FFPolynomial, ff_poly_factor, prime_field
from .tools.integers import factor_integer
from .tools.linalg import (
    IntMatrix,
    canonical_lattice,
    lattice_contains,
    lattice_intersection,
    lattice_rows,
    preimage_lattice,
    rational_det,
    rational_inverse,
    snf_invariants,
    vec_mat,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FractionalIdeal:
    """Full-rank O-submodule of K: rows num[i]/den in the order's coordinates"""
    order: NumberFieldOrder
    den: int
    num: IntMatrix

    @classmethod
    def from_rows(
        cls, order: NumberFieldOrder, rows: Sequence[Sequence], check: bool = True
    ) -> "FractionalIdeal":
        n = order.degree
        den, num = canonical_lattice(rows, n)
        if num.rows == 0:
            raise ZeroIdeal("the zero lattice is not a fractional ideal")
        if num.rows != n:
            raise NotFullRank(f"ideal lattice has rank {num.rows}, expected {n}")
        ideal = cls(order, den, num)
        if check:
            products = [
                order.multiply([int(i == k) for i in range(n)], r)
                for k in range(n)
                for r in ideal.rows
            ]
            if not lattice_contains((den, num), products):
                raise InvalidInputError("lattice is not closed under multiplication by the order")
        return ideal

    @classmethod
    def unit(cls, order: NumberFieldOrder) -> "FractionalIdeal":
        n = order.degree
        return cls(order, 1, IntMatrix.identity(n))

    @classmethod
    def principal(cls, order: NumberFieldOrder, elem: FieldElement) -> "FractionalIdeal":
        if elem.is_zero():
            raise ZeroIdeal("principal ideal of zero")
        return cls.from_rows(order, order.mul_matrix(elem), check=False)

    @classmethod
    def generated_by(cls, order: NumberFieldOrder, elems: Sequence[FieldElement]) -> "FractionalIdeal":
        rows = [r for e in elems if not e.is_zero() for r in order.mul_matrix(e)]
        if not rows:
            raise ZeroIdeal("ideal generated by zero")
        return cls.from_rows(order, rows, check=False)

    @cached_property
    def rows(self) -> List[List[Fraction]]:
        return lattice_rows(self.den, self.num)

    def elements(self) -> List[FieldElement]:
        return [self.order.element(r) for r in self.rows]

    def _same_order(self, other: "FractionalIdeal") -> None:
        if other.order != self.order:
            raise InvalidInputError("ideals belong to different orders")

    def __add__(self, other: "FractionalIdeal") -> "FractionalIdeal":
        self._same_order(other)
        return FractionalIdeal.from_rows(self.order, self.rows + other.rows, check=False)

    def __mul__(self, other: "FractionalIdeal") -> "FractionalIdeal":
        self._same_order(other)
        rows = [self.order.multiply(a, b) for a in self.rows for b in other.rows]
        return FractionalIdeal.from_rows(self.order, rows, check=False)

    def __pow__(self, r: int) -> "FractionalIdeal":
        if r < 0:
            raise InvalidInputError("negative ideal powers need an invertible ideal; use quotient")
        result = FractionalIdeal.unit(self.order)
        for _ in range(r):
            result = result * self
        return result

    def scale(self, elem: FieldElement) -> "FractionalIdeal":
        return self * FractionalIdeal.principal(self.order, elem)

    def quotient(self, other: "FractionalIdeal") -> "FractionalIdeal":
        """(self : other) = {x in K : x·other ⊆ self}"""
        self._same_order(other)
        n = self.order.degree
        inverse = rational_inverse(self.rows)
        columns = []
        for beta in other.rows:
            # row k: coordinates of b_k·beta expressed in the basis of self
            block = [vec_mat(self.order.multiply([int(i == k) for i in range(n)], beta), inverse) for k in range(n)]
            columns.extend([[block[k][c] for k in range(n)] for c in range(n)])
        den, num = preimage_lattice(columns, n)
        return FractionalIdeal(self.order, den, num)

    def contains(self, elem: FieldElement) -> bool:
        return lattice_contains((self.den, self.num), [self.order.coordinates(elem)])

    def contains_ideal(self, other: "FractionalIdeal") -> bool:
        self._same_order(other)
        return lattice_contains((self.den, self.num), other.rows)

    def is_integral(self) -> bool:
        return self.den == 1

    def norm(self) -> Fraction:
        """Lattice index relative to O: [O : I] for integral I"""
        return abs(rational_det(self.rows))

    def residue_structure(self) -> AbelianGroupStructure:
        """O/I for an integral ideal I"""
        if not self.is_integral():
            raise InvalidInputError("residue ring needs an integral ideal")
        invariants = [d for d in snf_invariants(self.num) if d > 1]
        return AbelianGroupStructure(invariants=tuple(invariants))

    def in_order(self, target: NumberFieldOrder) -> List[List[Fraction]]:
        """Basis rows rewritten in the coordinates of another order of the same field"""
        return [target.coordinates(e) for e in self.elements()]

    def describe(self) -> str:
        return "(" + ", ".join(str(e) for e in self.elements()) + ")"

    def __str__(self) -> str:
        return self.describe()


def ideal_arith(op: str, first: FractionalIdeal, second: FractionalIdeal) -> FractionalIdeal:
    """op in {'sum', 'product', 'quotient'}"""
    if op == "sum":
        return first + second
    if op == "product":
        return first * second
    if op == "quotient":
        return first.quotient(second)
    raise InvalidInputError(f"unknown ideal operation {op!r}")


def colon_unit(ideal: FractionalIdeal) -> FractionalIdeal:
    """(O : I)"""
    return FractionalIdeal.unit(ideal.order).quotient(ideal)


def is_invertible(ideal: FractionalIdeal) -> bool:
    return ideal * colon_unit(ideal) == FractionalIdeal.unit(ideal.order)


def as_ideal_of(order: NumberFieldOrder, over: NumberFieldOrder) -> FractionalIdeal:
    """An overorder viewed as a fractional ideal of the smaller order"""
    rows = [order.coordinates(b) for b in over.basis()]
    return FractionalIdeal.from_rows(order, rows, check=False)


def conductor(order: NumberFieldOrder) -> FractionalIdeal:
    """f = (O : O_K), an ideal of O"""
    return FractionalIdeal.unit(order).quotient(as_ideal_of(order, maximal_order(order.field)))


def _require_member(order: NumberFieldOrder, s: FieldElement) -> None:
    if s.is_zero():
        raise ZeroElement("s must be nonzero")
    if not order.contains(s):
        raise InvalidInputError(f"{s} is not in the order {order.label}")


def is_coprime_to_conductor(s: FieldElement, order: NumberFieldOrder) -> bool:
    _require_member(order, s)
    return FractionalIdeal.principal(order, s) + conductor(order) == FractionalIdeal.unit(order)


def trace_dual(order: NumberFieldOrder) -> FractionalIdeal:
    """O† = {x : Tr(x·O) ⊆ Z}; its basis is the inverse trace Gram matrix"""
    return FractionalIdeal.from_rows(order, rational_inverse(order.trace_gram), check=False)


def is_gorenstein(order: NumberFieldOrder) -> bool:
    return is_invertible(trace_dual(order))


def residue_structure(order: NumberFieldOrder, s: FieldElement) -> AbelianGroupStructure:
    """O/sO via the Smith form of multiplication by s"""
    _require_member(order, s)
    invariants = [d for d in snf_invariants(order.int_mul_matrix(s)) if d > 1]
    return AbelianGroupStructure(invariants=tuple(invariants))


# Kummer-Dedekind in O_K

def _small_vectors(n: int, radius: int) -> Iterator[Tuple[int, ...]]:
    """Nonzero integer vectors with entries in [-radius, radius], by increasing L1 norm"""

    def compose(i: int, remaining: int) -> Iterator[Tuple[int, ...]]:
        if i == n:
            if remaining == 0:
                yield ()
            return
        step = min(radius, remaining)
        for a in range(-step, step + 1):
            for rest in compose(i + 1, remaining - abs(a)):
                yield (a,) + rest

    for total in range(1, n * radius + 1):
        yield from compose(0, total)


def _power_index(maximal: NumberFieldOrder, theta: FieldElement) -> int:
    """[O_K : Z[theta]], zero when theta does not generate K"""
    n = maximal.degree
    rows, power = [], maximal.field.one()
    for _ in range(n):
        rows.append(maximal.coordinates(power))
        power = power * theta
    return abs(int(rational_det(rows)))


def _kummer_generator(maximal: NumberFieldOrder, p: int) -> FieldElement:
    radius = get_settings().generator_search_radius
    pi = maximal.field.generator()
    candidates = [pi] if maximal.contains(pi) else []
    candidates_iter = (maximal.element(v) for v in _small_vectors(maximal.degree, radius))
    for theta in [*candidates, *candidates_iter]:
        index = _power_index(maximal, theta)
        if index and index % p:
            return theta
    raise BadPrime(f"no generator of O_K with index prime to {p} within radius {radius}")


def _evaluate(coeffs: Sequence[int], theta: FieldElement) -> FieldElement:
    acc = theta.field.scalar(0)
    for c in reversed(coeffs):
        acc = acc * theta + c
    return acc


def primes_above(p: int, maximal: NumberFieldOrder) -> List[Tuple[FractionalIdeal, int]]:
    """Prime ideals of O_K above p with ramification indices, by Kummer-Dedekind"""
    theta = _kummer_generator(maximal, p)
    charpoly = theta.charpoly()
    fp = prime_field(p)
    factored = ff_poly_factor(FFPolynomial.from_ints(fp, charpoly.coeffs))
    out = []
    for g, e in factored.factors:
        gen = _evaluate(list(g.coeffs), theta)
        prime = FractionalIdeal.generated_by(maximal, [maximal.field.scalar(p), gen])
        out.append((prime, e))
    return out


def _valuation(ideal: FractionalIdeal, prime: FractionalIdeal) -> int:
    v, power = 0, prime
    while power.contains_ideal(ideal):
        v += 1
        power = power * prime
    return v


def contract(prime: FractionalIdeal, order: NumberFieldOrder) -> FractionalIdeal:
    """P ∩ O, rewritten as an ideal of O"""
    n = order.degree
    in_power = canonical_lattice([e.coords for e in prime.elements()], n)
    own = (order.den, order.num)
    meet = lattice_intersection(in_power, own, n)
    rows = [order.coordinates(order.field.element(r)) for r in lattice_rows(*meet)]
    return FractionalIdeal.from_rows(order, rows, check=False)


def prime_norm(prime: FractionalIdeal) -> int:
    return int(prime.norm())


def factor_coprime_ideal(order: NumberFieldOrder, s: FieldElement) -> List[Tuple[FractionalIdeal, int]]:
    """
    sO = ∏ p_i^e_i for s coprime to the conductor.

    Factors sO_K in O_K and contracts each prime to O; the product is
    re-multiplied and compared with sO before returning.
    """
    _require_member(order, s)
    if not is_coprime_to_conductor(s, order):
        raise NotCoprime(f"{s}·O is not coprime to the conductor of {order.label}")
    norm = abs(s.norm())
    if norm.denominator != 1:
        raise InvalidInputError(f"{s} is not integral")

    maximal = maximal_order(order.field)
    s_big = FractionalIdeal.principal(maximal, s)
    factors: List[Tuple[FractionalIdeal, int, int]] = []
    for p, _ in factor_integer(int(norm)):
        for prime, _ in primes_above(p, maximal):
            v = _valuation(s_big, prime)
            if v:
                factors.append((contract(prime, order), v, p))

    product_ideal = FractionalIdeal.unit(order)
    for prime, v, _ in factors:
        product_ideal = product_ideal * prime ** v
    if product_ideal != FractionalIdeal.principal(order, s):
        raise ConsistencyError(f"prime factors of {s}·O do not multiply back to it")

    factors.sort(key=lambda f: (f[2], prime_norm(f[0]), f[0].den, f[0].num.entries))
    logger.debug("factored %s·O into %d primes", s, len(factors))
    return [(prime, v) for prime, v, _ in factors]


def prime_residue_characteristic(prime: FractionalIdeal) -> int:
    """The rational prime below an integral prime ideal (its norm is a power of it)"""
    norm = prime_norm(prime)
    primes = factor_integer(norm)
    if len(primes) != 1:
        raise NotInvertiblePrime(f"ideal of norm {norm} is not prime")
    return primes[0][0]
