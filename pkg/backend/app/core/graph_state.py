# backend/app/core/graph_state.py
"""
Domain Records, Reports and Verification Workflow State

Pydantic models for everything that leaves the library as data: validated
Weil polynomials, group structures, theorem-engine reports, oracle
verification reports, and the state that flows through the verification
StateGraph.
"""

from collections import defaultdict
from datetime import datetime, timezone
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator

from .tools.integers import factor_integer
from .tools.polynomials import IntPolynomial


class CaseMode(str, Enum):
    """Which isomorphism of the structure theorem is applied"""
    GORENSTEIN = "GorensteinCase"
    CENTER = "CenterCase"


class Verdict(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"


class VerificationScope(str, Enum):
    """How far a verification run can compare structures"""
    FULL = "full"
    CARDINALITY_ONLY = "cardinality_only"
    INTEGRAL_FROBENIUS = "integral_frobenius"


class WeilPolynomial(BaseModel):
    """Validated characteristic polynomial of Frobenius with P = m^d"""
    model_config = ConfigDict(frozen=True)

    q: int
    p: int
    k: int
    g: int
    coeffs: Tuple[int, ...]
    m_coeffs: Tuple[int, ...]
    d: int

    @property
    def poly(self) -> IntPolynomial:
        return IntPolynomial(self.coeffs)

    @property
    def minimal(self) -> IntPolynomial:
        return IntPolynomial(self.m_coeffs)

    @property
    def field_degree(self) -> int:
        return len(self.m_coeffs) - 1

    def __str__(self) -> str:
        return f"{self.poly} over F_{self.q}"


class AbelianGroupStructure(BaseModel):
    """
    Invariant factors d1 | d2 | ... of a finite abelian group.

    Entries are >= 2; the empty tuple is the trivial group. Use from_orders to
    normalize an arbitrary list of cyclic orders.
    """
    model_config = ConfigDict(frozen=True)

    invariants: Tuple[int, ...] = ()

    @model_validator(mode="after")
    def _check_chain(self) -> "AbelianGroupStructure":
        for a in self.invariants:
            if a < 2:
                raise ValueError(f"invariant factor {a} must be at least 2")
        for a, b in zip(self.invariants, self.invariants[1:]):
            if b % a:
                raise ValueError(f"invariant factors {a} and {b} break the divisibility chain")
        return self

    @classmethod
    def from_orders(cls, orders: List[int]) -> "AbelianGroupStructure":
        """Normalize ⊕ Z/orders[i] to invariant factors (elementary divisors regrouped)"""
        by_prime: Dict[int, List[int]] = defaultdict(list)
        for n in orders:
            if n < 1:
                raise ValueError(f"cyclic order {n} must be positive")
            for p, e in factor_integer(n):
                by_prime[p].append(p ** e)
        rank = max((len(v) for v in by_prime.values()), default=0)
        chain = [1] * rank
        for powers in by_prime.values():
            powers.sort(reverse=True)
            for i, pe in enumerate(powers):
                chain[rank - 1 - i] *= pe
        return cls(invariants=tuple(chain))

    @classmethod
    def trivial(cls) -> "AbelianGroupStructure":
        return cls(invariants=())

    @property
    def cardinality(self) -> int:
        total = 1
        for a in self.invariants:
            total *= a
        return total

    @property
    def rank(self) -> int:
        return len(self.invariants)

    @property
    def exponent(self) -> int:
        return self.invariants[-1] if self.invariants else 1

    def power(self, d: int) -> "AbelianGroupStructure":
        """Direct sum of d copies"""
        return AbelianGroupStructure.from_orders(list(self.invariants) * d)

    def direct_sum(self, other: "AbelianGroupStructure") -> "AbelianGroupStructure":
        return AbelianGroupStructure.from_orders(list(self.invariants) + list(other.invariants))

    def padded(self, rank: int) -> List[int]:
        """Invariants left-padded with 1s to the given rank"""
        return [1] * (rank - self.rank) + list(self.invariants)

    def divides(self, other: "AbelianGroupStructure") -> bool:
        """Componentwise divisibility after padding both to a common rank"""
        r = max(self.rank, other.rank)
        return all(b % a == 0 for a, b in zip(self.padded(r), other.padded(r)))

    def __str__(self) -> str:
        if not self.invariants:
            return "0"
        return " x ".join(f"Z/{a}" for a in self.invariants)


class Certificate(BaseModel):
    """A named hypothesis check and the witness that decided it"""
    name: str
    holds: bool
    witness: str = ""


class OrderSummary(BaseModel):
    label: str
    basis: List[List[str]] = Field(description="Basis rows in power-basis coordinates")
    discriminant: int
    index_over_zpi: Optional[int] = None
    index_in_maximal: Optional[int] = None
    is_maximal: Optional[bool] = None
    is_gorenstein: Optional[bool] = None


class StructureReport(BaseModel):
    status: str = "ok"
    mode: CaseMode
    q: int
    poly: List[int]
    order: OrderSummary
    n: Optional[int] = None
    s: Optional[List[str]] = None
    d: int
    invariants: List[int]
    cardinality: int
    crosscheck: int
    certificates: List[Certificate] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)

    @computed_field
    @property
    def order_basis(self) -> List[List[str]]:
        return self.order.basis

    @property
    def group(self) -> AbelianGroupStructure:
        return AbelianGroupStructure(invariants=tuple(self.invariants))


class ModeComparison(BaseModel):
    """Both isomorphisms evaluated on the same (P, O, n)"""
    gorenstein: StructureReport
    center: StructureReport
    agree: bool


class TowerEntry(BaseModel):
    n: int
    invariants: List[int]
    cardinality: int


class PrimeGrowth(BaseModel):
    """A[p^r] for r = 1..depth at one prime ideal above ell"""
    prime: str
    norm: int
    exponent_in_ell: int
    levels: List[List[int]]


class EllGrowth(BaseModel):
    ell: int
    levels: List[List[int]] = Field(description="A[ell^k] for k = 1..depth")
    primes: List[PrimeGrowth] = Field(default_factory=list)


class TowerReport(BaseModel):
    status: str = "ok"
    q: int
    poly: List[int]
    order: OrderSummary
    d: int
    chain: List[TowerEntry]
    ell_growth: List[EllGrowth] = Field(default_factory=list)
    divisibility_verified: bool = True

    @computed_field
    @property
    def order_basis(self) -> List[List[str]]:
        return self.order.basis


class OrderPrediction(BaseModel):
    """One admissible endomorphism order and what it predicts"""
    order: OrderSummary
    predicted: Optional[List[int]] = None
    cardinality: Optional[int] = None
    matches: bool = False
    skipped_reason: Optional[str] = None


class VerificationReport(BaseModel):
    status: str = "ok"
    kind: str
    verdict: Verdict
    q: int
    n: int
    curve: Dict[str, Any]
    poly: List[int]
    poly_n: List[int]
    oracle_count: int
    oracle_invariants: List[int]
    crosscheck: int
    structure_status: str = "compared"
    predictions: List[OrderPrediction] = Field(default_factory=list)
    match_set: List[str] = Field(default_factory=list)
    point_counts: Dict[str, int] = Field(default_factory=dict)
    torsion_counts: Dict[str, int] = Field(default_factory=dict)
    certificates: List[Certificate] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)


class VerificationState(BaseModel):
    """
    State flowing through the verification StateGraph.

    Nodes read what earlier nodes produced and return partial updates; the
    execution history keeps one record per node for the summary on stderr.
    """
    kind: str = Field(description="'ec' or 'jac'")
    p: int
    k: int = 1
    n: int = 1
    curve_coeffs: List[int] = Field(default_factory=list)
    integral_frobenius: bool = False

    weil: Optional[WeilPolynomial] = None
    scope: Optional[VerificationScope] = None
    poly_n: List[int] = Field(default_factory=list)
    crosscheck: Optional[int] = None

    oracle_count: Optional[int] = None
    oracle_invariants: List[int] = Field(default_factory=list)
    point_counts: Dict[str, int] = Field(default_factory=dict)
    torsion_counts: Dict[str, int] = Field(default_factory=dict)

    predictions: List[OrderPrediction] = Field(default_factory=list)
    certificates: List[Certificate] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)

    verdict: Optional[Verdict] = None
    match_set: List[str] = Field(default_factory=list)
    execution_history: List[Dict[str, Any]] = Field(default_factory=list)

    def log_execution(self, node_name: str, summary: str) -> List[Dict[str, Any]]:
        """History with one more record appended (returned as a node update)"""
        return self.execution_history + [{
            "node": node_name,
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "summary": summary,
        }]

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump(mode="json")

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "VerificationState":
        return cls.model_validate(data)
