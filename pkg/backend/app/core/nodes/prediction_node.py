# backend/app/core/nodes/prediction_node.py
"""
Prediction Node for the Verification Workflow

Runs the structure theorem once per admissible endomorphism order. Elliptic
curves range over Z[pi] ⊆ O ⊆ O_K, Jacobians over Z[pi, pibar] ⊆ O ⊆ O_K;
orders whose hypotheses fail are kept in the report with the reason.
"""

import logging
from typing import Any, Dict, List

from ..exceptions import HypothesisNotMet
from ..graph_state import CaseMode, OrderPrediction, VerificationScope, VerificationState
from ..ideals import is_gorenstein
from ..orders import NumberFieldOrder, OrderKind, intermediate_orders, order_construct
from ..structure import describe_order, rational_points_structure

logger = logging.getLogger(__name__)


class PredictionNode:
    """Predicted A(F_{q^n}) for every candidate End ring"""

    def _candidates(self, state: VerificationState) -> List[NumberFieldOrder]:
        weil = state.weil
        if state.scope is VerificationScope.INTEGRAL_FROBENIUS:
            return [order_construct(weil, OrderKind.ZPI)]
        minimal = order_construct(weil, OrderKind.ZPI if state.kind == "ec" else OrderKind.ZPIPIBAR)
        return intermediate_orders(minimal)

    def _predict(self, state: VerificationState, order: NumberFieldOrder) -> OrderPrediction:
        weil = state.weil
        summary = describe_order(order, weil)
        if state.scope is VerificationScope.INTEGRAL_FROBENIUS:
            mode = CaseMode.CENTER
        elif not is_gorenstein(order):
            return OrderPrediction(order=summary, skipped_reason="NotGorenstein")
        else:
            mode = CaseMode.GORENSTEIN
        try:
            report = rational_points_structure(weil, order, state.n, mode)
        except HypothesisNotMet as e:
            return OrderPrediction(order=summary, skipped_reason=e.check)
        return OrderPrediction(
            order=summary,
            predicted=report.invariants,
            cardinality=report.cardinality,
            matches=report.invariants == state.oracle_invariants,
        )

    def __call__(self, state: VerificationState) -> Dict[str, Any]:
        candidates = self._candidates(state)
        logger.info("predict: %d candidate orders", len(candidates))
        predictions = [self._predict(state, order) for order in candidates]
        matched = sum(1 for p in predictions if p.matches)
        return {
            "predictions": predictions,
            "execution_history": state.log_execution(
                "predict", f"{len(predictions)} orders, {matched} matching"
            ),
        }
