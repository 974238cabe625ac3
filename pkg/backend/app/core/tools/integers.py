# backend/app/core/tools/integers.py
"""
Integer Factorization

Trial division up to the configured limit, then budget-bounded Pollard rho on
whatever cofactors remain. Every reported prime is certified by sympy's
``isprime`` (deterministic below 2^64).
"""

import logging
from typing import Dict, List, Optional, Tuple

from sympy import factorint, isprime, perfect_power, pollard_rho

from ...config import get_settings
from ..exceptions import FactorTooLarge, InvalidInputError, NotPrimePower

logger = logging.getLogger(__name__)

RHO_RETRIES = 8


def _split(n: int, budget: int) -> Optional[int]:
    """A nontrivial divisor of the composite n, or None when rho gives up"""
    power = perfect_power(n)
    if power:
        return power[0]
    for attempt in range(RHO_RETRIES):
        divisor = pollard_rho(n, a=attempt + 1, retries=0, seed=1234 + attempt, max_steps=budget)
        if divisor and 1 < divisor < n:
            return int(divisor)
    return None


def factor_integer(n: int) -> List[Tuple[int, int]]:
    """
    Factor a positive integer.

    Returns (prime, exponent) pairs sorted by prime; 1 factors as the empty list.
    Raises FactorTooLarge if a composite cofactor resists the rho budget.
    """
    if n < 1:
        raise InvalidInputError(f"cannot factor {n}: expected a positive integer")
    settings = get_settings()

    partial = factorint(
        n, limit=settings.trial_division_limit, use_rho=False, use_pm1=False
    )
    primes: Dict[int, int] = {}
    pending = [(int(f), e) for f, e in partial.items()]
    while pending:
        f, e = pending.pop()
        if f == 1:
            continue
        if isprime(f):
            primes[f] = primes.get(f, 0) + e
            continue
        divisor = _split(f, settings.factor_budget)
        if divisor is None:
            raise FactorTooLarge(f"cofactor {f} resisted {settings.factor_budget} rho steps")
        logger.debug("split %d = %d * %d", f, divisor, f // divisor)
        pending.append((divisor, e))
        pending.append((f // divisor, e))

    return sorted(primes.items())


def prime_divisors(n: int) -> List[int]:
    return [p for p, _ in factor_integer(abs(n))] if n else []


def prime_power(q: int) -> Tuple[int, int]:
    """(p, k) with q = p^k, or NotPrimePower"""
    if q < 2:
        raise NotPrimePower(f"{q} is not a prime power")
    if isprime(q):
        return q, 1
    power = perfect_power(q)
    if power:
        base, exponent = power
        # perfect_power may return a composite base of a higher power
        factors = factor_integer(int(base))
        if len(factors) == 1:
            p, e = factors[0]
            return p, e * int(exponent)
    raise NotPrimePower(f"{q} is not a prime power")
