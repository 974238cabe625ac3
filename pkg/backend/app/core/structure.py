# backend/app/core/structure.py
"""
Structure Theorem Engine

Turns (Weil polynomial, order, n or s) into the predicted group structure of
A(F_{q^n}) or A[s], together with the certificates of every hypothesis that
was checked. Two routes are implemented:

  GorensteinCase  A ≅ O/O·s          (d = 1, O Gorenstein)
  CenterCase      A ≅ (O/O·s)^d      (s coprime to the conductor of O)

Each report's cardinality is cross-checked against an independent resultant
computation; a mismatch is a ConsistencyError, never a silent answer.
"""

import logging
from math import gcd
from typing import List, Optional, Sequence, Tuple, Union

from .exceptions import (
    ConsistencyError,
    HypothesisNotMet,
    InvalidChain,
    InvalidInputError,
    NotInvertiblePrime,
    ResidueCharacteristicP,
    SeparabilityUnknown,
    ZeroElement,
)
from .graph_state import (
    AbelianGroupStructure,
    CaseMode,
    Certificate,
    EllGrowth,
    ModeComparison,
    OrderSummary,
    PrimeGrowth,
    StructureReport,
    TowerEntry,
    TowerReport,
    WeilPolynomial,
)
from .ideals import (
    FractionalIdeal,
    factor_coprime_ideal,
    is_coprime_to_conductor,
    is_gorenstein,
    is_invertible,
    prime_norm,
    prime_residue_characteristic,
    residue_structure,
)
from .orders import (
    FieldElement,
    NumberFieldOrder,
    OrderKind,
    frobenius,
    maximal_order,
    order_construct,
)
from .tools.polynomials import norm_from_coefficients
from .weil import base_extension

logger = logging.getLogger(__name__)

MORITA_NOTE = (
    "A carries exactly one compatible module structure over the full endomorphism "
    "ring; only the structure over the center is computed."
)


def describe_order(order: NumberFieldOrder, weil: Optional[WeilPolynomial] = None) -> OrderSummary:
    """Label, basis and invariants of an order for reports"""
    maximal = maximal_order(order.field)
    index_over_zpi = None
    if weil is not None:
        zpi = order_construct(weil, OrderKind.ZPI)
        if order.contains_order(zpi):
            index_over_zpi = zpi.index_in(order)
    return OrderSummary(
        label=str(order),
        basis=order.basis_strings(),
        discriminant=order.discriminant,
        index_over_zpi=index_over_zpi,
        index_in_maximal=order.index_in(maximal),
        is_maximal=order == maximal,
        is_gorenstein=is_gorenstein(order),
    )


def _frobenius_certificate(weil: WeilPolynomial, order: NumberFieldOrder) -> Certificate:
    pi = frobenius(weil)
    holds = order.contains(pi)
    cert = Certificate(name="ContainsFrobenius", holds=holds, witness=f"pi in {order}")
    if not holds:
        raise HypothesisNotMet("OrderMissingFrobenius", f"{order} does not contain pi")
    return cert


def _minimal_order_certificate(weil: WeilPolynomial, order: NumberFieldOrder) -> List[Certificate]:
    minimal = order_construct(weil, OrderKind.ZPIPIBAR)
    if order != minimal:
        return []
    return [Certificate(
        name="MinimalOrderGorenstein",
        holds=is_gorenstein(order),
        witness="trace dual of Z[pi,pibar] tested for invertibility",
    )]


def _gorenstein_checks(weil: WeilPolynomial, order: NumberFieldOrder) -> List[Certificate]:
    if weil.d != 1:
        raise HypothesisNotMet(
            "NotCommutativeCase",
            f"deg m = {weil.field_degree} != 2g = {2 * weil.g}",
        )
    certs = [Certificate(name="CommutativeCase", holds=True, witness=f"deg m = 2g = {2 * weil.g}")]
    if not is_gorenstein(order):
        raise HypothesisNotMet("NotGorenstein", f"trace dual of {order} is not invertible")
    certs.append(Certificate(name="Gorenstein", holds=True, witness="I·(O:I) = O for the trace dual I"))
    return certs


def _center_checks(order: NumberFieldOrder, s: FieldElement) -> List[Certificate]:
    if not is_coprime_to_conductor(s, order):
        raise HypothesisNotMet("NotCoprimeToConductor", f"({s})·O + f != O")
    return [Certificate(
        name="CoprimeToConductor",
        holds=True,
        witness=f"({s})·O + f = O, so ({s}) is a product of invertible primes",
    )]


def _apply(mode: CaseMode, weil: WeilPolynomial, order: NumberFieldOrder, s: FieldElement
           ) -> Tuple[AbelianGroupStructure, int, List[Certificate], List[str]]:
    if mode is CaseMode.GORENSTEIN:
        certs = _gorenstein_checks(weil, order)
        return residue_structure(order, s), 1, certs, []
    certs = _center_checks(order, s)
    base = residue_structure(order, s)
    return base.power(weil.d), weil.d, certs, [MORITA_NOTE] if weil.d > 1 else []


def rational_points_structure(
    weil: WeilPolynomial,
    order: NumberFieldOrder,
    n: int,
    mode: Union[CaseMode, str] = CaseMode.GORENSTEIN,
) -> StructureReport:
    """Structure of A(F_{q^n}) = A[pi^n - 1]"""
    mode = CaseMode(mode)
    if n < 1:
        raise InvalidInputError(f"extension degree {n} must be positive")
    certs = [_frobenius_certificate(weil, order)]
    certs.append(Certificate(name="Separable", holds=True, witness=f"s = pi^{n} - 1"))
    s = frobenius(weil) ** n - 1

    group, d, checks, notes = _apply(mode, weil, order, s)
    certs.extend(checks)
    certs.extend(_minimal_order_certificate(weil, order))

    _, count = base_extension(weil, n)
    if group.cardinality != count:
        raise ConsistencyError(
            f"{mode.value} predicts {group.cardinality} points but P_{n}(1) = {count}"
        )
    logger.debug("A(F_%d^%d) = %s via %s", weil.q, n, group, mode.value)
    return StructureReport(
        mode=mode,
        q=weil.q,
        poly=list(weil.coeffs),
        order=describe_order(order, weil),
        n=n,
        d=d,
        invariants=list(group.invariants),
        cardinality=group.cardinality,
        crosscheck=count,
        certificates=certs,
        notes=notes,
    )


def _frobenius_exponent(weil: WeilPolynomial, s: FieldElement, norm: int) -> Optional[int]:
    """n with s = pi^n - 1, if one exists"""
    pi = frobenius(weil)
    deg = weil.field_degree
    power = pi
    n = 1
    # |N(pi^n - 1)| >= (q^(n/2)/2)^deg once q^(n/2) >= 2, so the search is finite
    while n <= 256:
        if power - 1 == s:
            return n
        if weil.q ** (n * deg) > 16 ** deg * norm * norm:
            return None
        power = power * pi
        n += 1
    return None


def torsion_structure(
    weil: WeilPolynomial,
    order: NumberFieldOrder,
    s: FieldElement,
    mode: Optional[Union[CaseMode, str]] = None,
) -> StructureReport:
    """Structure of A[s] for a separable s in O"""
    if s.is_zero():
        raise ZeroElement("s must be nonzero")
    if not order.contains(s):
        raise InvalidInputError(f"{s} is not in {order}")
    norm = abs(s.norm())
    if norm.denominator != 1:
        raise InvalidInputError(f"{s} is not integral")
    norm = int(norm)

    certs = [_frobenius_certificate(weil, order)]
    n = _frobenius_exponent(weil, s, norm)
    if n is not None:
        certs.append(Certificate(name="Separable", holds=True, witness=f"s = pi^{n} - 1"))
    elif gcd(norm, weil.p) == 1:
        certs.append(Certificate(name="Separable", holds=True, witness=f"gcd(N(s), p) = gcd({norm}, {weil.p}) = 1"))
    else:
        raise SeparabilityUnknown(f"{s} is not pi^n - 1 and gcd(N(s), p) = {gcd(norm, weil.p)}")

    if mode is None:
        mode = CaseMode.GORENSTEIN if weil.d == 1 else CaseMode.CENTER
    mode = CaseMode(mode)
    group, d, checks, notes = _apply(mode, weil, order, s)
    certs.extend(checks)

    crosscheck = abs(norm_from_coefficients(weil.minimal, s.coords)) ** d
    if crosscheck.denominator != 1 or group.cardinality != crosscheck:
        raise ConsistencyError(f"A[s] has {group.cardinality} elements but |N(s)|^{d} = {crosscheck}")
    return StructureReport(
        mode=mode,
        q=weil.q,
        poly=list(weil.coeffs),
        order=describe_order(order, weil),
        s=[str(c) for c in s.coords],
        d=d,
        invariants=list(group.invariants),
        cardinality=group.cardinality,
        crosscheck=int(crosscheck),
        certificates=certs,
        notes=notes,
    )


def prime_power_torsion(
    weil: WeilPolynomial, order: NumberFieldOrder, prime: FractionalIdeal, r: int
) -> AbelianGroupStructure:
    """A[p^r] ≅ (O/p^r)^d for an invertible prime p not above the characteristic"""
    if r < 0:
        raise InvalidInputError(f"exponent {r} must be non-negative")
    if not prime.is_integral() or not is_invertible(prime):
        raise NotInvertiblePrime(f"{prime} is not an invertible integral ideal")
    char = prime_residue_characteristic(prime)
    if char == weil.p:
        raise ResidueCharacteristicP(f"{prime} lies above p = {weil.p}")
    if r == 0:
        return AbelianGroupStructure.trivial()
    return (prime ** r).residue_structure().power(weil.d)


def center_structure_via_factorization(
    weil: WeilPolynomial, order: NumberFieldOrder, s: FieldElement
) -> AbelianGroupStructure:
    """(O/sO)^d rebuilt from the prime factorization of sO and the blocks O/p^e"""
    total = AbelianGroupStructure.trivial()
    for prime, e in factor_coprime_ideal(order, s):
        total = total.direct_sum((prime ** e).residue_structure())
    return total.power(weil.d)


def compare_modes(weil: WeilPolynomial, order: NumberFieldOrder, n: int) -> ModeComparison:
    """Evaluate both isomorphisms where both hypothesis sets hold"""
    gorenstein = rational_points_structure(weil, order, n, CaseMode.GORENSTEIN)
    center = rational_points_structure(weil, order, n, CaseMode.CENTER)
    return ModeComparison(
        gorenstein=gorenstein,
        center=center,
        agree=gorenstein.invariants == center.invariants,
    )


def ell_primary_growth(
    weil: WeilPolynomial, order: NumberFieldOrder, ell: int, depth: int
) -> EllGrowth:
    """A[ell^k] for k = 1..depth, assembled prime by prime from the factorization of ell·O"""
    if depth < 1:
        raise InvalidInputError(f"depth {depth} must be positive")
    if ell % weil.p == 0:
        raise ResidueCharacteristicP(f"ell = {ell} is divisible by p = {weil.p}")
    factors = factor_coprime_ideal(order, order.field.scalar(ell))
    primes = []
    for prime, e in factors:
        levels = [list(prime_power_torsion(weil, order, prime, r).invariants) for r in range(1, depth + 1)]
        primes.append(PrimeGrowth(prime=str(prime), norm=prime_norm(prime), exponent_in_ell=e, levels=levels))
    levels = []
    for k in range(1, depth + 1):
        total = AbelianGroupStructure.trivial()
        for prime, e in factors:
            total = total.direct_sum(prime_power_torsion(weil, order, prime, k * e))
        levels.append(list(total.invariants))
    return EllGrowth(ell=ell, levels=levels, primes=primes)


def _validate_chain(chain: Sequence[int]) -> None:
    if not chain or any(n < 1 for n in chain):
        raise InvalidChain("chain must be a non-empty list of positive integers")
    for a, b in zip(chain, chain[1:]):
        if b % a:
            raise InvalidChain(f"{a} does not divide {b}")


def fbar_tower(
    weil: WeilPolynomial,
    order: NumberFieldOrder,
    chain: Sequence[int],
    ells: Sequence[int] = (),
    depth: int = 2,
    mode: Optional[Union[CaseMode, str]] = None,
) -> TowerReport:
    """Finite stages of the union of A(F_{q^n}) along a divisibility chain, with ell-primary growth"""
    _validate_chain(chain)
    if mode is None:
        mode = CaseMode.GORENSTEIN if weil.d == 1 and is_gorenstein(order) else CaseMode.CENTER
    reports = [rational_points_structure(weil, order, n, mode) for n in chain]
    for a, b in zip(reports, reports[1:]):
        if not a.group.divides(b.group):
            raise ConsistencyError(f"A(F_q^{a.n}) = {a.group} does not embed in A(F_q^{b.n}) = {b.group}")
    growth = [ell_primary_growth(weil, order, ell, depth) for ell in ells]
    return TowerReport(
        q=weil.q,
        poly=list(weil.coeffs),
        order=describe_order(order, weil),
        d=reports[0].d,
        chain=[TowerEntry(n=r.n, invariants=r.invariants, cardinality=r.cardinality) for r in reports],
        ell_growth=growth,
    )
