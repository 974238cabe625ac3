# backend/app/core/curves/groups.py
"""
Finite Abelian Groups Given by Their Elements

Shared by the elliptic and Jacobian oracles: scalar multiples, element
orders by descent over the factored group order, and the invariant factors
read off from the counts #G[l^j] of the l-power torsion.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Hashable, List, Sequence, Tuple, TypeVar

from ..exceptions import ConsistencyError
from ..graph_state import AbelianGroupStructure
from ..tools.integers import factor_integer

logger = logging.getLogger(__name__)

T = TypeVar("T", bound=Hashable)
AddFn = Callable[[T, T], T]


def scalar_multiple(add: AddFn, identity: T, elem: T, m: int) -> T:
    """m·elem for m >= 0 by double-and-add"""
    result, base = identity, elem
    while m:
        if m & 1:
            result = add(result, base)
        base = add(base, base)
        m >>= 1
    return result


def element_order(
    add: AddFn, identity: T, elem: T, count: int, factors: Sequence[Tuple[int, int]]
) -> int:
    order = count
    for ell, _ in factors:
        while order % ell == 0 and scalar_multiple(add, identity, elem, order // ell) == identity:
            order //= ell
    return order


def _exact_log(value: int, base: int) -> int:
    e = 0
    while value > 1:
        value, r = divmod(value, base)
        if r:
            raise ConsistencyError(f"torsion count is not a power of {base}")
        e += 1
    return e


def structure_from_element_orders(orders: Sequence[int]) -> AbelianGroupStructure:
    """
    Invariant factors of the group whose elements have the given orders.

    For each prime l, log_l #G[l^j] - log_l #G[l^(j-1)] is the number of
    cyclic l-parts of exponent at least j.
    """
    count = len(orders)
    cyclic: List[int] = []
    for ell, _ in factor_integer(count):
        at_least: List[int] = []
        previous, power = 0, ell
        while True:
            size = _exact_log(sum(1 for o in orders if power % o == 0), ell)
            if size == previous:
                break
            at_least.append(size - previous)
            previous, power = size, power * ell
        at_least.append(0)
        for j in range(len(at_least) - 1):
            cyclic.extend([ell ** (j + 1)] * (at_least[j] - at_least[j + 1]))
    structure = AbelianGroupStructure.from_orders(cyclic)
    if structure.cardinality != count:
        raise ConsistencyError(f"element orders describe {structure.cardinality} elements, found {count}")
    return structure


@dataclass(frozen=True)
class EnumeratedGroup:
    """A group known element by element: its size, structure and every element order"""
    count: int
    structure: AbelianGroupStructure
    orders: Tuple[int, ...]

    def torsion(self, m: int) -> int:
        """#G[m]"""
        return sum(1 for o in self.orders if m % o == 0)

    def torsion_tower(self, ell: int, depth: int) -> List[int]:
        """#G[ell^k] for k = 1..depth"""
        return [self.torsion(ell ** k) for k in range(1, depth + 1)]


def enumerate_group(elements: Sequence[T], add: AddFn, identity: T) -> EnumeratedGroup:
    count = len(elements)
    factors = factor_integer(count)
    orders = tuple(element_order(add, identity, e, count, factors) for e in elements)
    structure = structure_from_element_orders(orders)
    logger.debug("enumerated group of order %d: %s", count, structure)
    return EnumeratedGroup(count=count, structure=structure, orders=orders)
