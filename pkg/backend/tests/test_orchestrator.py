# backend/tests/test_orchestrator.py
from itertools import product
from math import prod

import pytest

from backend.app.config import Settings, use_settings
from backend.app.core.curves.elliptic import EllipticCurve
from backend.app.core.curves.hyperelliptic import HyperellipticCurve
from backend.app.core.exceptions import FieldTooLarge, InvalidInputError, OutOfTheoremScope
from backend.app.core.graph_state import Verdict, VerificationScope, VerificationState
from backend.app.core.orchestrator import orchestrator, verify_curve, verify_ec, verify_jac
from backend.app.core.tools.polynomials import is_irreducible
from backend.app.core.weil import is_ordinary, validate_weil


def test_verify_ec_supersingular_over_f2():
    report = verify_ec(EllipticCurve.from_coefficients(2, 1, [0, 0, 1, 0, 0]), n=2)
    assert report.verdict is Verdict.PASS
    assert report.status == "ok"
    assert report.oracle_count == report.crosscheck == 9
    assert report.oracle_invariants == [3, 3]
    assert report.match_set == ["Z[pi]=O_K"]
    assert report.point_counts == {"1": 3, "2": 9}
    assert report.torsion_counts == {"3^1": 9, "3^2": 9}


def test_verify_ec_picks_out_the_endomorphism_ring():
    report = verify_ec(EllipticCurve.from_coefficients(3, 1, [0, 0, 0, 1, 0]))
    assert report.verdict is Verdict.PASS
    assert report.oracle_invariants == [4]
    predicted = {p.order.label: p.predicted for p in report.predictions}
    assert predicted == {"Z[pi]": [4], "O_K": [2, 2]}
    assert report.match_set == ["Z[pi]"]
    assert all(c.holds for c in report.certificates)


def test_integral_frobenius_is_out_of_scope_by_default():
    curve = EllipticCurve.from_coefficients(2, 2, [0, 0, 1, 0, 0])
    with pytest.raises(OutOfTheoremScope):
        verify_ec(curve)
    report = verify_ec(curve, integral_frobenius=True)
    assert report.verdict is Verdict.PASS
    assert report.oracle_invariants == [3, 3]
    assert report.predictions[0].predicted == [3, 3]


def test_verify_jac_supersingular_surface():
    report = verify_jac(HyperellipticCurve.from_lower(3, [1, 0, 0, 0, 0]))
    assert report.poly == [9, 0, 0, 0, 1]
    assert report.oracle_count == report.crosscheck == 10
    assert report.oracle_invariants == [10]
    assert report.verdict is Verdict.PASS
    assert any(label.endswith("O_K") for label in report.match_set)
    for prediction in report.predictions:
        if prediction.skipped_reason is None:
            assert prediction.cardinality == 10


def test_verify_curve_dispatch():
    report = verify_curve("ec", 5, 1, [0, 0, 0, 1, 1])
    assert report.kind == "ec"
    assert report.poly == [5, 3, 1]
    assert report.oracle_count == 9
    assert report.verdict is Verdict.PASS


def test_field_cap_stops_the_oracle():
    use_settings(Settings(field_cap=10))
    with pytest.raises(FieldTooLarge):
        verify_ec(EllipticCurve.from_coefficients(2, 1, [0, 0, 1, 0, 0]), n=4)


def test_workflow_history():
    state = VerificationState(kind="ec", p=2, k=1, n=1, curve_coeffs=[0, 0, 1, 0, 0])
    final = orchestrator.run(state)
    assert [r["node"] for r in final.execution_history] == ["frobenius", "scope", "oracle", "predict", "verdict"]
    assert final.scope is VerificationScope.FULL


def test_cardinality_only_route_skips_prediction():
    weil = validate_weil(3, [9, 0, -6, 0, 1])
    state = VerificationState(
        kind="jac", p=3, weil=weil, scope=VerificationScope.CARDINALITY_ONLY,
        oracle_count=16, crosscheck=16,
    )
    assert orchestrator._route_after_oracle(state) == "verdict"
    update = orchestrator._verdict_node(state)
    assert update["verdict"] is Verdict.PASS
    assert update["match_set"] == []

    state = state.model_copy(update={"oracle_count": 15})
    assert orchestrator._verdict_node(state)["verdict"] is Verdict.FAIL


def test_scope_node_marks_power_shapes_cardinality_only():
    weil = validate_weil(3, [9, 0, -6, 0, 1])
    state = VerificationState(kind="jac", p=3, weil=weil)
    update = orchestrator._scope_node(state)
    assert update["scope"] is VerificationScope.CARDINALITY_ONLY
    assert update["notes"]


def _ordinary_simple_jacobians(p, wanted):
    found = []
    for lower in product(range(p), repeat=5):
        try:
            curve = HyperellipticCurve.from_lower(p, list(lower))
            report = verify_jac(curve)
        except (InvalidInputError, OutOfTheoremScope):
            continue
        weil = validate_weil(p, report.poly)
        if weil.d == 1 and is_ordinary(weil) and is_irreducible(weil.poly):
            found.append(report)
            if len(found) == wanted:
                break
    return found


@pytest.mark.parametrize("p, wanted", [(3, 3), (5, 3)])
def test_verify_jac_ordinary_simple_surfaces(p, wanted):
    reports = _ordinary_simple_jacobians(p, wanted)
    assert len(reports) == wanted
    for report in reports:
        assert report.verdict is Verdict.PASS
        assert report.oracle_count == report.crosscheck
        assert report.match_set
        assert prod(report.oracle_invariants) == report.oracle_count


@pytest.mark.parametrize("p, k", [(5, 1), (7, 1), (2, 2), (3, 2)])
def test_verify_ec_beyond_the_prime_fields_two_and_three(p, k):
    verified = 0
    for lower in product(range(p ** k), repeat=2):
        try:
            curve = EllipticCurve.from_coefficients(p, k, [1, 0, 1, *lower])
            report = verify_ec(curve, n=2)
        except (InvalidInputError, OutOfTheoremScope):
            continue
        assert report.verdict is Verdict.PASS
        assert report.oracle_count == report.crosscheck
        assert report.point_counts["2"] % report.point_counts["1"] == 0
        verified += 1
        if verified == 4:
            break
    assert verified == 4
