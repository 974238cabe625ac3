# backend/app/core/weil.py
"""
Weil Polynomial Validation

Validates characteristic polynomials of Frobenius exactly: prime-power q,
monic even degree, the functional-equation symmetry, the root-modulus
condition (certified on the real trace polynomial with Sturm chains, no
floating point), and the shape P = m^d of a simple variety. Also base
extension to F_{q^n} and bulk enumeration for small q and g.
"""

import logging
from itertools import product
from math import comb, gcd, isqrt
from typing import List, Sequence, Tuple

from .exceptions import (
    BadDegreeParity,
    ConsistencyError,
    InvalidInputError,
    NotMonic,
    NotPrimePowerShape,
    RootModulusViolated,
    SymmetryViolated,
)
from .graph_state import WeilPolynomial
from .tools.integers import prime_power
from .tools.polynomials import (
    IntPolynomial,
    power_charpoly,
    resultant,
    root_bound,
    squarefree_part,
    sturm_count,
    zz_poly_factor,
)

logger = logging.getLogger(__name__)


def trace_polynomial(coeffs: Sequence[int], q: int) -> IntPolynomial:
    """
    The h with P(t) = t^g · h(t + q/t) for a symmetric P of degree 2g.

    Uses t^j + (q/t)^j = D_j(y), D_0 = 2, D_1 = y, D_{j+1} = y·D_j - q·D_{j-1}.
    """
    g = (len(coeffs) - 1) // 2
    y = IntPolynomial.of(0, 1)
    dickson = [IntPolynomial.of(2), y]
    for j in range(1, g):
        dickson.append(y * dickson[j] - dickson[j - 1] * q)
    h = IntPolynomial.of(coeffs[g])
    for j in range(1, g + 1):
        h = h + dickson[j] * coeffs[g + j]
    return h


def _even_part_square(h: IntPolynomial) -> IntPolynomial:
    """k with h(y)·h(-y) = k(y^2)"""
    both = h * h.reflect()
    return IntPolynomial(both.coeffs[0::2])


def roots_on_circle(coeffs: Sequence[int], q: int) -> bool:
    """
    True iff every complex root of the symmetric P has absolute value sqrt(q).

    Equivalent to: the trace polynomial h is totally real with every root y
    satisfying y^2 <= 4q. Both halves are Sturm counts over exact rationals.
    """
    h = trace_polynomial(coeffs, q)
    if h.degree < 1:
        return True
    hs = squarefree_part(h)
    bound = root_bound(hs)
    if sturm_count(hs, -bound, bound) != hs.degree:
        return False
    ks = squarefree_part(_even_part_square(hs))
    if ks.degree < 1:
        return True
    # every root of ks is y^2 >= 0 for a real y, so -1 is never a root
    return sturm_count(ks, -1, 4 * q) == ks.degree


def decompose(poly: IntPolynomial) -> Tuple[IntPolynomial, int]:
    """(m, d) with P = m^d and m irreducible, else NotPrimePowerShape"""
    fac = zz_poly_factor(poly)
    if len(fac.factors) != 1 or fac.unit != 1:
        raise NotPrimePowerShape(f"{poly} is not a power of a single irreducible polynomial")
    m, d = fac.factors[0]
    return m, d


def validate_weil(q: int, coeffs: Sequence[int]) -> WeilPolynomial:
    """Validate a Weil polynomial given low-degree-first"""
    p, k = prime_power(q)
    coeffs = [int(c) for c in coeffs]
    if not coeffs or coeffs[-1] != 1:
        raise NotMonic(f"leading coefficient must be 1, got {coeffs[-1] if coeffs else None}")
    if len(coeffs) % 2 == 0 or len(coeffs) < 3:
        raise BadDegreeParity(f"degree {len(coeffs) - 1} is not a positive even number")
    g = (len(coeffs) - 1) // 2
    for j in range(g + 1):
        if coeffs[j] != q ** (g - j) * coeffs[2 * g - j]:
            raise SymmetryViolated(
                f"a_{j} = {coeffs[j]} but q^{g - j}·a_{2 * g - j} = {q ** (g - j) * coeffs[2 * g - j]}"
            )
    if not roots_on_circle(coeffs, q):
        raise RootModulusViolated(f"some root of {IntPolynomial(tuple(coeffs))} has absolute value != sqrt({q})")

    m, d = decompose(IntPolynomial(tuple(coeffs)))
    logger.debug("validated q=%d g=%d m=%s d=%d", q, g, m, d)
    return WeilPolynomial(q=q, p=p, k=k, g=g, coeffs=tuple(coeffs), m_coeffs=m.coeffs, d=d)


def is_ordinary(weil: WeilPolynomial) -> bool:
    return gcd(weil.coeffs[weil.g], weil.p) == 1


def base_extension(weil: WeilPolynomial, n: int) -> Tuple[IntPolynomial, int]:
    """
    (P_n, N_n): characteristic polynomial of pi^n and #A(F_{q^n}).

    N_n = P_n(1) is cross-checked against |Res(P, t^n - 1)|.
    """
    if n < 1:
        raise InvalidInputError(f"extension degree {n} must be positive")
    poly_n = power_charpoly(weil.poly, n)
    count = poly_n(1)
    alt = abs(resultant(weil.poly, IntPolynomial.monomial(n) - IntPolynomial.of(1)))
    if count != alt or count <= 0:
        raise ConsistencyError(f"P_{n}(1) = {count} disagrees with |Res(P, t^{n}-1)| = {alt}")
    return poly_n, count


def extend(weil: WeilPolynomial, n: int) -> WeilPolynomial:
    """The Weil polynomial of the same variety over F_{q^n}"""
    poly_n, _ = base_extension(weil, n)
    return validate_weil(weil.q ** n, poly_n.coeffs)


def _ceil_bound(j: int, g: int, q: int) -> int:
    """ceil(C(2g, j) · q^(j/2))"""
    c = comb(2 * g, j)
    if j % 2 == 0:
        return c * q ** (j // 2)
    target = c * c * q ** j
    r = isqrt(target)
    return r if r * r == target else r + 1


def enumerate_weil(q: int, g: int) -> List[WeilPolynomial]:
    """All Weil polynomials of degree 2g over F_q, sorted by (a_1, ..., a_g)"""
    if g not in (1, 2):
        raise InvalidInputError(f"enumeration supports g in {{1, 2}}, got {g}")
    prime_power(q)
    bounds = [_ceil_bound(j, g, q) for j in range(1, g + 1)]
    found: List[WeilPolynomial] = []
    for middle in product(*(range(-b, b + 1) for b in bounds)):
        # middle[j-1] is the coefficient of t^(2g-j)
        coeffs = [0] * (2 * g + 1)
        coeffs[2 * g] = 1
        for j, a in enumerate(middle, start=1):
            coeffs[2 * g - j] = a
            coeffs[j] = q ** (g - j) * a if j < g else coeffs[j]
        coeffs[0] = q ** g
        try:
            found.append(validate_weil(q, coeffs))
        except (SymmetryViolated, RootModulusViolated, NotPrimePowerShape):
            continue
    logger.debug("enumerated %d Weil polynomials for q=%d g=%d", len(found), q, g)
    return found
