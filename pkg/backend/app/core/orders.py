# backend/app/core/orders.py
"""
Number Fields and Orders

K = Q[t]/(m) with elements in power-basis coordinates, and orders O ⊆ K given
by a canonical (denominator, HNF numerator) basis plus an integer
multiplication table. Orders are built from a Weil polynomial (Z[pi],
Z[pi, pibar], the ring generated by given elements) or as the maximal order,
and the orders between a given order and O_K can be enumerated.
"""

import logging
from dataclasses import dataclass, field as dc_field
from enum import Enum
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from sympy import Matrix, discriminant
from sympy.polys.numberfields.basis import round_two

from ..config import get_settings
from .exceptions import (
    ConsistencyError,
    IndexCapExceeded,
    InvalidInputError,
    NotARing,
    NotFullRank,
    NotMonic,
    ZeroElement,
)
from .graph_state import WeilPolynomial
from .tools.integers import factor_integer
from .tools.linalg import (
    IntMatrix,
    canonical_lattice,
    hnf,
    lattice_rows,
    preimage_lattice,
    rational_det,
    rational_inverse,
    vec_mat,
)
from .tools.polynomials import IntPolynomial, is_irreducible

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]


def _fmt(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


@dataclass(frozen=True)
class NumberField:
    """K = Q[t]/(m) for a monic irreducible integer polynomial m"""
    modulus: IntPolynomial

    def __post_init__(self):
        if not self.modulus.is_monic():
            raise NotMonic(f"defining polynomial {self.modulus} is not monic")
        if not is_irreducible(self.modulus):
            raise InvalidInputError(f"defining polynomial {self.modulus} is not irreducible", code="NotIrreducible")

    @property
    def degree(self) -> int:
        return self.modulus.degree

    @cached_property
    def _powers(self) -> List[List[int]]:
        """Power-basis coordinates of t^i for 0 <= i <= 2n - 2"""
        n = self.degree
        m = self.modulus.coeffs
        rows = [[int(i == j) for j in range(n)] for i in range(n)]
        for _ in range(max(n - 1, 0)):
            prev = rows[-1]
            top = prev[-1]
            shifted = [0] + prev[:-1]
            rows.append([shifted[j] - top * m[j] for j in range(n)])
        return rows

    def element(self, coords: Sequence[Scalar]) -> "FieldElement":
        return FieldElement(self, tuple(Fraction(c) for c in coords))

    def scalar(self, c: Scalar) -> "FieldElement":
        return self.element([c] + [0] * (self.degree - 1))

    def one(self) -> "FieldElement":
        return self.scalar(1)

    def generator(self) -> "FieldElement":
        """The class of t (pi when the field comes from a Weil polynomial)"""
        if self.degree == 1:
            return self.scalar(-self.modulus.coeffs[0])
        return self.element([0, 1] + [0] * (self.degree - 2))

    def __str__(self) -> str:
        return f"Q[t]/({self.modulus})"


@dataclass(frozen=True)
class FieldElement:
    """Element of K in power-basis coordinates"""
    field: NumberField
    coords: Tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coords) != self.field.degree:
            raise InvalidInputError(
                f"expected {self.field.degree} coordinates, got {len(self.coords)}"
            )

    def _lift(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            return other
        return self.field.scalar(other)

    def __add__(self, other) -> "FieldElement":
        other = self._lift(other)
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other) -> "FieldElement":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "FieldElement":
        return self._lift(other) - self

    def __mul__(self, other) -> "FieldElement":
        if not isinstance(other, FieldElement):
            c = Fraction(other)
            return FieldElement(self.field, tuple(a * c for a in self.coords))
        n = self.field.degree
        conv = [Fraction(0)] * (2 * n - 1)
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(other.coords):
                    if b:
                        conv[i + j] += a * b
        powers = self.field._powers
        out = [Fraction(0)] * n
        for i, c in enumerate(conv):
            if c:
                for j, v in enumerate(powers[i]):
                    if v:
                        out[j] += c * v
        return FieldElement(self.field, tuple(out))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coords)

    def mul_matrix(self) -> List[List[Fraction]]:
        """Rows are the coordinates of self·t^i"""
        t = self.field.generator()
        rows, current = [], self
        for _ in range(self.field.degree):
            rows.append(list(current.coords))
            current = current * t
        return rows

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroElement("zero has no inverse")
        inv = rational_inverse(self.mul_matrix())
        return FieldElement(self.field, tuple(inv[0]))

    def __truediv__(self, other) -> "FieldElement":
        other = self._lift(other)
        return self * other.inverse()

    def __rtruediv__(self, other) -> "FieldElement":
        return self._lift(other) * self.inverse()

    def __pow__(self, e: int) -> "FieldElement":
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.field.one(), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def norm(self) -> Fraction:
        return rational_det(self.mul_matrix())

    def trace(self) -> Fraction:
        rows = self.mul_matrix()
        return sum((rows[i][i] for i in range(len(rows))), Fraction(0))

    def charpoly(self) -> IntPolynomial:
        """Characteristic polynomial of multiplication by self (must be integral)"""
        poly = Matrix(self.mul_matrix()).charpoly()
        return IntPolynomial.from_sympy(poly)

    def is_integer_scalar(self) -> bool:
        return all(c == 0 for c in self.coords[1:]) and self.coords[0].denominator == 1

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.coords):
            if c == 0:
                continue
            mono = "" if i == 0 else ("pi" if i == 1 else f"pi^{i}")
            if not mono:
                terms.append(_fmt(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append(f"-{mono}")
            else:
                terms.append(f"{_fmt(c)}*{mono}")
        return "+".join(terms).replace("+-", "-") if terms else "0"


@dataclass(frozen=True)
class NumberFieldOrder:
    """
    Order in K: basis rows num[i]/den in power coordinates, num in HNF.

    table[(i*n + j)*n + k] is the coefficient of b_k in b_i·b_j.
    """
    field: NumberField
    den: int
    num: IntMatrix
    label: str = dc_field(default="", compare=False)
    table: Tuple[int, ...] = dc_field(default=(), compare=False, repr=False)

    @classmethod
    def from_rows(
        cls, field: NumberField, rows: Sequence[Sequence[Scalar]], label: str = ""
    ) -> "NumberFieldOrder":
        n = field.degree
        den, num = canonical_lattice(rows, n)
        if num.rows != n:
            raise NotFullRank(f"lattice has rank {num.rows}, expected {n}")
        basis = [field.element(r) for r in lattice_rows(den, num)]
        inverse = rational_inverse(lattice_rows(den, num))

        one = vec_mat(field.one().coords, inverse)
        if any(c.denominator != 1 for c in one):
            raise NotARing("lattice does not contain 1")
        table: List[int] = []
        for i in range(n):
            for j in range(n):
                coords = vec_mat((basis[i] * basis[j]).coords, inverse)
                if any(c.denominator != 1 for c in coords):
                    raise NotARing(f"product of basis elements {basis[i]} and {basis[j]} leaves the lattice")
                table.extend(int(c) for c in coords)
        return cls(field, den, num, label, tuple(table))

    @property
    def degree(self) -> int:
        return self.field.degree

    @cached_property
    def basis_rows(self) -> List[List[Fraction]]:
        return lattice_rows(self.den, self.num)

    @cached_property
    def _inverse(self) -> List[List[Fraction]]:
        return rational_inverse(self.basis_rows)

    def basis(self) -> List[FieldElement]:
        return [self.field.element(r) for r in self.basis_rows]

    def coordinates(self, elem: FieldElement) -> List[Fraction]:
        return vec_mat(elem.coords, self._inverse)

    def contains(self, elem: FieldElement) -> bool:
        return all(c.denominator == 1 for c in self.coordinates(elem))

    def element(self, coords: Sequence[Scalar]) -> FieldElement:
        return self.field.element(vec_mat([Fraction(c) for c in coords], self.basis_rows))

    def c(self, i: int, j: int, k: int) -> int:
        n = self.degree
        return self.table[(i * n + j) * n + k]

    def multiply(self, u: Sequence[Scalar], v: Sequence[Scalar]) -> List[Fraction]:
        """Product of two elements given in order coordinates"""
        n = self.degree
        out = [Fraction(0)] * n
        for i, a in enumerate(u):
            if a:
                for j, b in enumerate(v):
                    if b:
                        ab = a * b
                        base = (i * n + j) * n
                        for k in range(n):
                            coeff = self.table[base + k]
                            if coeff:
                                out[k] += ab * coeff
        return out

    def mul_matrix(self, elem: FieldElement) -> List[List[Fraction]]:
        """Rows are the order coordinates of elem·b_i"""
        e = self.coordinates(elem)
        n = self.degree
        return [self.multiply([int(i == r) for i in range(n)], e) for r in range(n)]

    def int_mul_matrix(self, elem: FieldElement) -> IntMatrix:
        rows = self.mul_matrix(elem)
        if any(c.denominator != 1 for r in rows for c in r):
            raise InvalidInputError(f"{elem} is not in the order {self.label}")
        return IntMatrix.from_rows([[int(c) for c in r] for r in rows], cols=self.degree)

    @cached_property
    def basis_traces(self) -> List[int]:
        n = self.degree
        return [sum(self.c(k, l, l) for l in range(n)) for k in range(n)]

    @cached_property
    def trace_gram(self) -> List[List[int]]:
        """Tr(b_i·b_j)"""
        n = self.degree
        tr = self.basis_traces
        return [[sum(self.c(i, j, k) * tr[k] for k in range(n)) for j in range(n)] for i in range(n)]

    @cached_property
    def discriminant(self) -> int:
        return IntMatrix.from_rows(self.trace_gram, cols=self.degree).det()

    def index_in(self, other: "NumberFieldOrder") -> int:
        """[other : self] for self ⊆ other"""
        coords = [other.coordinates(b) for b in self.basis()]
        if any(c.denominator != 1 for r in coords for c in r):
            raise InvalidInputError(f"{self.label} is not contained in {other.label}")
        return abs(int(rational_det(coords)))

    def contains_order(self, other: "NumberFieldOrder") -> bool:
        return all(self.contains(b) for b in other.basis())

    def relabel(self, label: str) -> "NumberFieldOrder":
        return NumberFieldOrder(self.field, self.den, self.num, label, self.table)

    def basis_strings(self) -> List[List[str]]:
        return [[_fmt(c) for c in r] for r in self.basis_rows]

    def describe(self) -> str:
        return "<" + ", ".join(str(b) for b in self.basis()) + ">"

    def __str__(self) -> str:
        return self.label or self.describe()


class OrderKind(str, Enum):
    ZPI = "zpi"
    ZPIPIBAR = "zpipibar"
    MAXIMAL = "maximal"
    GENS = "gens"


def ring_closure(
    field: NumberField, generators: Sequence[FieldElement], label: str = ""
) -> NumberFieldOrder:
    """Smallest order containing 1 and the generators, by iterated products"""
    n = field.degree
    rounds = get_settings().closure_rounds
    current = canonical_lattice([field.one().coords] + [g.coords for g in generators], n)
    for _ in range(rounds):
        elems = [field.element(r) for r in lattice_rows(*current)]
        products = [(a * b).coords for i, a in enumerate(elems) for b in elems[i:]]
        grown = canonical_lattice([e.coords for e in elems] + products, n)
        if grown == current:
            if grown[1].rows != n:
                raise NotFullRank(f"generated ring has rank {grown[1].rows}, expected {n}")
            return NumberFieldOrder.from_rows(field, lattice_rows(*grown), label)
        current = grown
    raise NotARing(f"ring closure did not stabilize within {rounds} rounds")


def field_of(weil: WeilPolynomial) -> NumberField:
    return _field_for(weil.minimal)


@lru_cache(maxsize=256)
def _field_for(modulus: IntPolynomial) -> NumberField:
    return NumberField(modulus)


def frobenius(weil: WeilPolynomial) -> FieldElement:
    return field_of(weil).generator()


def verschiebung(weil: WeilPolynomial) -> FieldElement:
    """pibar = q/pi"""
    return frobenius(weil).inverse() * weil.q


def order_construct(
    weil: WeilPolynomial,
    kind: Union[OrderKind, str] = OrderKind.ZPI,
    gens: Optional[Sequence[FieldElement]] = None,
) -> NumberFieldOrder:
    """Z[pi], Z[pi, pibar], O_K, or the ring generated by explicit elements"""
    kind = OrderKind(kind)
    field = field_of(weil)
    pi = frobenius(weil)
    if kind is OrderKind.ZPI:
        return ring_closure(field, [pi], label="Z[pi]")
    if kind is OrderKind.ZPIPIBAR:
        return ring_closure(field, [pi, verschiebung(weil)], label="Z[pi,pibar]")
    if kind is OrderKind.MAXIMAL:
        return maximal_order(field)
    if not gens:
        raise InvalidInputError("gens order needs at least one generator")
    order = ring_closure(field, list(gens))
    return order.relabel("gens:" + ";".join(str(g) for g in gens))


def _power_mod_p(order: NumberFieldOrder, coords: List[int], e: int, p: int) -> List[int]:
    """Order coordinates of x^e reduced mod p"""
    result = [int(c) % p for c in order.coordinates(order.field.one())]
    base = [c % p for c in coords]
    while e:
        if e & 1:
            result = [int(c) % p for c in order.multiply(result, base)]
        base = [int(c) % p for c in order.multiply(base, base)]
        e >>= 1
    return result


def _p_radical(order: NumberFieldOrder, p: int) -> List[List[Fraction]]:
    """
    Order coordinates of {x in O : x^(p^k) in pO} with p^k >= [K : Q].

    x -> x^(p^k) is F_p-linear on O/pO, so the radical is the lattice of
    integer vectors c with c·A = 0 mod p, A holding the images of the basis.
    """
    n = order.degree
    e = p
    while e < n:
        e *= p
    images = [_power_mod_p(order, [int(i == j) for i in range(n)], e, p) for j in range(n)]
    columns = [[Fraction(images[i][j], p) for i in range(n)] for j in range(n)]
    columns += [[int(i == j) for i in range(n)] for j in range(n)]
    return lattice_rows(*preimage_lattice(columns, n))


def _multiplier_ring(order: NumberFieldOrder, ideal_rows: List[List[Fraction]]) -> NumberFieldOrder:
    """{x in K : x·I ⊆ I} for a full-rank lattice I given in order coordinates"""
    n = order.degree
    inverse = rational_inverse(ideal_rows)
    columns = []
    for beta in ideal_rows:
        block = [vec_mat(order.multiply([int(i == k) for i in range(n)], beta), inverse) for k in range(n)]
        columns.extend([[block[k][c] for k in range(n)] for c in range(n)])
    rows = lattice_rows(*preimage_lattice(columns, n))
    return NumberFieldOrder.from_rows(order.field, [order.element(r).coords for r in rows])


def p_maximal_enlargement(order: NumberFieldOrder, p: int) -> NumberFieldOrder:
    """Grow an order by multiplier rings of its p-radical until it is p-maximal"""
    while True:
        grown = _multiplier_ring(order, _p_radical(order, p))
        if grown == order:
            return order
        logger.debug("enlarged at %d: index %d", p, order.index_in(grown))
        order = grown


def _round_two_candidate(field: NumberField) -> Optional[NumberFieldOrder]:
    """sympy's Round-2 basis, or None when it is not an order containing Z[t]"""
    n = field.degree
    zk, _ = round_two(field.modulus.to_sympy())
    mat = zk.matrix.to_Matrix()
    denom = int(zk.denom)
    rows = [[Fraction(int(mat[i, j]), denom) for i in range(n)] for j in range(mat.cols)]
    try:
        candidate = NumberFieldOrder.from_rows(field, rows)
    except (NotARing, NotFullRank) as e:
        logger.warning("discarding Round-2 basis for %s: %s", field, e)
        return None
    t = field.generator()
    if not all(candidate.contains(t ** i) for i in range(1, n)):
        logger.warning("discarding Round-2 basis for %s: it misses Z[t]", field)
        return None
    return candidate


@lru_cache(maxsize=128)
def maximal_order(field: NumberField) -> NumberFieldOrder:
    """
    O_K from sympy's Round-2 basis, certified p-maximal at every p with p^2 | disc(m).

    A basis that is not an order over Z[t] is replaced by Z[t]; either way each
    such p goes through p_maximal_enlargement, which returns a p-maximal order
    unchanged.
    """
    n = field.degree
    if n == 1:
        return NumberFieldOrder.from_rows(field, [[1]], label="O_K")
    disc = int(discriminant(field.modulus.to_sympy()))
    primes = [p for p, e in factor_integer(abs(disc)) if e >= 2]
    order = _round_two_candidate(field)
    if order is None:
        order = ring_closure(field, [field.generator()])
    for p in primes:
        order = p_maximal_enlargement(order, p)
    equation_order = ring_closure(field, [field.generator()])
    if order.discriminant * equation_order.index_in(order) ** 2 != disc:
        raise ConsistencyError(f"disc(O_K)·[O_K : Z[t]]^2 differs from disc(m) = {disc}")
    order = order.relabel("O_K")
    logger.debug("maximal order of %s has discriminant %d", field, order.discriminant)
    return order


def is_maximal(order: NumberFieldOrder) -> bool:
    return order == maximal_order(order.field)


def _transversal(inner: NumberFieldOrder, outer: NumberFieldOrder) -> Iterator[List[int]]:
    """Coset representatives of outer/inner in outer coordinates, zero class excluded"""
    rows = [[int(c) for c in outer.coordinates(b)] for b in inner.basis()]
    h, _ = hnf(IntMatrix.from_rows(rows, cols=outer.degree))
    diag = [h[i, i] for i in range(h.rows)]

    def walk(i: int, prefix: List[int]) -> Iterator[List[int]]:
        if i == len(diag):
            yield prefix
            return
        for a in range(diag[i]):
            yield from walk(i + 1, prefix + [a])

    for rep in walk(0, []):
        if any(rep):
            yield rep


def intermediate_orders(
    minimal: NumberFieldOrder, maximal: Optional[NumberFieldOrder] = None
) -> List[NumberFieldOrder]:
    """
    Every order O with minimal ⊆ O ⊆ O_K.

    Breadth-first over one-element ring extensions L[r], r running over a
    transversal of O_K/L; minimal overorders are always of that form, so the
    search reaches every intermediate order. Sorted by index in O_K, largest
    first, then by canonical basis.
    """
    maximal = maximal or maximal_order(minimal.field)
    index = minimal.index_in(maximal)
    cap = get_settings().index_cap
    if index > cap:
        raise IndexCapExceeded(f"[O_K : {minimal.label}] = {index} exceeds the cap {cap}")

    found: Dict[Tuple[int, Tuple[int, ...]], NumberFieldOrder] = {
        (minimal.den, minimal.num.entries): minimal
    }
    queue = [minimal]
    while queue:
        current = queue.pop(0)
        for rep in _transversal(current, maximal):
            r = maximal.element(rep)
            grown = ring_closure(minimal.field, current.basis() + [r])
            key = (grown.den, grown.num.entries)
            if key not in found:
                found[key] = grown
                queue.append(grown)

    orders = []
    for order in found.values():
        if order == maximal:
            order = order.relabel(
                maximal.label
                if order is not minimal or minimal.label == maximal.label
                else f"{minimal.label}={maximal.label}"
            )
        elif not order.label:
            order = order.relabel(order.describe())
        orders.append(order)
    orders.sort(key=lambda o: (-o.index_in(maximal), o.den, o.num.entries))
    logger.debug("found %d orders between %s and O_K", len(orders), minimal.label)
    return orders
