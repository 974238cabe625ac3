# backend/app/core/orchestrator.py
"""
LangGraph Orchestrator for Theorem Verification

Runs one oracle verification as a compiled StateGraph:

  frobenius -> scope -> oracle -> predict -> verdict

Cardinality-only runs go from the oracle straight to the verdict.

The curve's Weil polynomial comes from point counts, the scope decides how
much structure can be compared, the oracle enumerates the group and the
prediction node evaluates the structure theorem for every admissible order.
"""

import logging
from typing import Any, Dict, Sequence

from langgraph.graph import END, StateGraph

from .curves import frobenius_of, build_curve
from .curves.elliptic import EllipticCurve, has_integral_frobenius
from .curves.hyperelliptic import HyperellipticCurve
from .exceptions import OutOfTheoremScope
from .graph_state import (
    Certificate,
    Verdict,
    VerificationReport,
    VerificationScope,
    VerificationState,
)
from .nodes.oracle_node import OracleNode
from .nodes.prediction_node import PredictionNode
from .weil import base_extension

logger = logging.getLogger(__name__)

CARDINALITY_NOTE = "P = m^d with d > 1 and no curve realizing an order structure; compared at cardinality level only"


class VerificationOrchestrator:
    """Builds the verification workflow once and runs it per (curve, n)"""

    def __init__(self):
        self.oracle = OracleNode()
        self.predictor = PredictionNode()
        self.workflow = None
        self._build_workflow()

    def _build_workflow(self):
        workflow = StateGraph(VerificationState)

        workflow.add_node("frobenius", self._frobenius_node)
        workflow.add_node("scope", self._scope_node)
        workflow.add_node("oracle", self.oracle)
        workflow.add_node("predict", self.predictor)
        workflow.add_node("verdict", self._verdict_node)

        workflow.set_entry_point("frobenius")
        workflow.add_edge("frobenius", "scope")
        workflow.add_edge("scope", "oracle")
        workflow.add_conditional_edges(
            "oracle",
            self._route_after_oracle,
            {"predict": "predict", "verdict": "verdict"},
        )
        workflow.add_edge("predict", "verdict")
        workflow.add_edge("verdict", END)

        self.workflow = workflow.compile()

    def run(self, state: VerificationState) -> VerificationState:
        final: Dict[str, Any] = state.to_dict()
        for values in self.workflow.stream(state.to_dict(), stream_mode="values"):
            final = values
        result = VerificationState.from_dict(final) if isinstance(final, dict) else final
        for record in result.execution_history:
            logger.info("%s: %s", record["node"], record["summary"])
        return result

    # Node implementations

    def _frobenius_node(self, state: VerificationState) -> Dict[str, Any]:
        curve = build_curve(state.kind, state.p, state.k, state.curve_coeffs)
        weil = frobenius_of(curve)
        poly_n, count = base_extension(weil, state.n)
        return {
            "weil": weil,
            "poly_n": list(poly_n.coeffs),
            "crosscheck": count,
            "execution_history": state.log_execution("frobenius", f"P = {weil.poly}, P_{state.n}(1) = {count}"),
        }

    def _scope_node(self, state: VerificationState) -> Dict[str, Any]:
        weil = state.weil
        notes = list(state.notes)
        if state.kind == "ec" and has_integral_frobenius(weil):
            if not state.integral_frobenius:
                raise OutOfTheoremScope(
                    f"pi = {-weil.m_coeffs[0]} is an integer; End(E) is an order in a quaternion algebra"
                )
            scope = VerificationScope.INTEGRAL_FROBENIUS
            notes.append("integral Frobenius: predicted through the center Z with d = 2")
        elif weil.d > 1:
            scope = VerificationScope.CARDINALITY_ONLY
            notes.append(CARDINALITY_NOTE)
        else:
            scope = VerificationScope.FULL
        return {
            "scope": scope,
            "notes": notes,
            "execution_history": state.log_execution("scope", scope.value),
        }

    def _route_after_oracle(self, state: VerificationState) -> str:
        if state.scope is VerificationScope.CARDINALITY_ONLY:
            return "verdict"
        return "predict"

    def _verdict_node(self, state: VerificationState) -> Dict[str, Any]:
        counts_agree = state.oracle_count == state.crosscheck
        certificates = [Certificate(
            name="CardinalityMatches",
            holds=counts_agree,
            witness=f"oracle {state.oracle_count}, P_{state.n}(1) = {state.crosscheck}",
        )]
        match_set = [p.order.label for p in state.predictions if p.matches]
        cardinalities = [p.cardinality for p in state.predictions if p.cardinality is not None]
        predictions_agree = all(c == state.oracle_count for c in cardinalities)
        certificates.append(Certificate(
            name="PredictedCardinalities",
            holds=predictions_agree,
            witness=f"{len(cardinalities)} predictions",
        ))

        if state.scope is VerificationScope.CARDINALITY_ONLY:
            passed = counts_agree
        else:
            passed = counts_agree and predictions_agree and bool(match_set)
        verdict = Verdict.PASS if passed else Verdict.FAIL
        return {
            "verdict": verdict,
            "match_set": match_set,
            "certificates": certificates,
            "execution_history": state.log_execution("verdict", f"{verdict.value}, matches {match_set}"),
        }


def build_report(state: VerificationState, curve_dict: Dict[str, Any]) -> VerificationReport:
    weil = state.weil
    return VerificationReport(
        status="ok" if state.verdict is Verdict.PASS else "fail",
        kind=state.kind,
        verdict=state.verdict,
        q=weil.q,
        n=state.n,
        curve=curve_dict,
        poly=list(weil.coeffs),
        poly_n=state.poly_n,
        oracle_count=state.oracle_count,
        oracle_invariants=state.oracle_invariants,
        crosscheck=state.crosscheck,
        structure_status=(
            "NotAttempted" if state.scope is VerificationScope.CARDINALITY_ONLY else "compared"
        ),
        predictions=state.predictions,
        match_set=state.match_set,
        point_counts=state.point_counts,
        torsion_counts=state.torsion_counts,
        certificates=state.certificates,
        notes=state.notes,
    )


# Global orchestrator instance
orchestrator = VerificationOrchestrator()


def verify_ec(curve: EllipticCurve, n: int = 1, integral_frobenius: bool = False) -> VerificationReport:
    """Compare E(F_{q^n}) with the prediction of every order Z[pi] ⊆ O ⊆ O_K"""
    state = VerificationState(
        kind="ec", p=curve.p, k=curve.k, n=n,
        curve_coeffs=list(curve.coefficients),
        integral_frobenius=integral_frobenius,
    )
    return build_report(orchestrator.run(state), curve.to_dict())


def verify_jac(curve: HyperellipticCurve, n: int = 1) -> VerificationReport:
    """Compare J(F_{p^n}) with the prediction of every Gorenstein order over Z[pi, pibar]"""
    state = VerificationState(kind="jac", p=curve.p, k=1, n=n, curve_coeffs=list(curve.f[:5]))
    return build_report(orchestrator.run(state), curve.to_dict())


def verify_curve(kind: str, p: int, k: int, coeffs: Sequence[int], n: int = 1,
                 integral_frobenius: bool = False) -> VerificationReport:
    curve = build_curve(kind, p, k, coeffs)
    if isinstance(curve, EllipticCurve):
        return verify_ec(curve, n, integral_frobenius)
    return verify_jac(curve, n)
