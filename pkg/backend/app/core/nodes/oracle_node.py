# backend/app/core/nodes/oracle_node.py
"""
Oracle Node for the Verification Workflow

Enumerates the rational points of the curve (or the divisor classes of its
Jacobian) over F_{q^n} and records the ground-truth group, the point counts
over every intermediate field, and the l-power torsion counts taken from the
element orders.
"""

import logging
from typing import Any, Dict

from ..curves import build_curve, count_of, group_of, point_counts
from ..graph_state import VerificationScope, VerificationState
from ..tools.integers import prime_divisors

logger = logging.getLogger(__name__)


class OracleNode:
    """Brute-force ground truth for one (curve, n)"""

    def __init__(self, torsion_depth: int = 2):
        self.torsion_depth = torsion_depth

    def __call__(self, state: VerificationState) -> Dict[str, Any]:
        curve = build_curve(state.kind, state.p, state.k, state.curve_coeffs)
        n = state.n
        logger.info("oracle: enumerating %s over degree %d", curve, n)

        proper = [m for m in range(1, n) if n % m == 0]
        counts = {str(m): c for m, c in point_counts(curve, proper).items()}

        if state.scope is VerificationScope.CARDINALITY_ONLY:
            count = count_of(curve, n)
            counts[str(n)] = count
            return {
                "oracle_count": count,
                "point_counts": counts,
                "execution_history": state.log_execution("oracle", f"{count} elements, structure not attempted"),
            }

        group = group_of(curve, n)
        counts[str(n)] = group.count
        torsion_counts = {}
        for ell in prime_divisors(group.count):
            if ell == state.p:
                continue
            for k, size in enumerate(group.torsion_tower(ell, self.torsion_depth), start=1):
                torsion_counts[f"{ell}^{k}"] = size

        logger.info("oracle: %d elements, invariants %s", group.count, list(group.structure.invariants))
        return {
            "oracle_count": group.count,
            "oracle_invariants": list(group.structure.invariants),
            "point_counts": counts,
            "torsion_counts": torsion_counts,
            "execution_history": state.log_execution("oracle", f"{group.count} elements: {group.structure}"),
        }
