# backend/tests/test_main.py
import json

import pytest

from backend.app.config import get_settings
from backend.app.main import run


def run_json(capsys, argv):
    code = run(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_validate_valid(capsys):
    code, payload = run_json(capsys, ["validate", "--q", "3", "--poly", "9,0,-6,0,1"])
    assert code == 0
    assert payload["status"] == "valid"
    assert payload["m"] == [-3, 0, 1]
    assert payload["d"] == 2


def test_validate_invalid(capsys):
    code, payload = run_json(capsys, ["validate", "--q", "2", "--poly", "2,3,1"])
    assert code == 2
    assert payload["status"] == "invalid"
    assert payload["reason"] == "RootModulusViolated"


def test_structure_center_case(capsys):
    argv = ["structure", "--q", "3", "--poly", "9,0,-6,0,1", "--order", "zpipibar", "--n", "2", "--mode", "center"]
    code, payload = run_json(capsys, argv)
    assert code == 0
    assert payload["invariants"] == [2, 2, 2, 2]
    assert payload["cardinality"] == 16
    assert payload["mode"] == "CenterCase"
    assert payload["order_basis"] == payload["order"]["basis"] == [["1", "0"], ["0", "1"]]


def test_structure_hypothesis_not_met(capsys):
    argv = ["structure", "--q", "3", "--poly", "9,0,-6,0,1", "--order", "zpipibar", "--n", "2"]
    code, payload = run_json(capsys, argv)
    assert code == 1
    assert payload["status"] == "hypothesis_not_met"
    assert payload["check"] == "NotCommutativeCase"


def test_structure_compare(capsys):
    code, payload = run_json(capsys, ["structure", "--q", "2", "--poly", "2,0,1", "--compare"])
    assert code == 0
    assert payload["agree"] is True
    assert payload["gorenstein"]["invariants"] == [3]


def test_malformed_input_exits_2(capsys):
    code, payload = run_json(capsys, ["structure", "--q", "3", "--poly", "a,b"])
    assert code == 2
    assert payload["status"] == "invalid"


def test_missing_arguments_exit_2():
    assert run(["structure", "--q", "3"]) == 2
    assert run([]) == 2


def test_torsion_by_element_and_prime(capsys):
    code, payload = run_json(capsys, ["torsion", "--q", "2", "--poly", "2,0,1", "--s", "1,1"])
    assert code == 0
    assert payload["invariants"] == [3]

    code, payload = run_json(capsys, ["torsion", "--q", "2", "--poly", "2,0,1", "--prime", "1,1", "--r", "2"])
    assert code == 0
    assert payload["invariants"] == [9]

    code, payload = run_json(capsys, ["torsion", "--q", "2", "--poly", "2,0,1", "--s", "2,0"])
    assert code == 1
    assert payload["code"] == "SeparabilityUnknown"


def test_tower(capsys):
    argv = ["tower", "--q", "2", "--poly", "2,0,1", "--chain", "1,2,4", "--ell", "3", "--depth", "2"]
    code, payload = run_json(capsys, argv)
    assert code == 0
    assert [entry["invariants"] for entry in payload["chain"]] == [[3], [3, 3], [3, 3]]
    assert payload["ell_growth"][0]["levels"] == [[3, 3], [9, 9]]
    assert payload["order_basis"] == payload["order"]["basis"]

    code, payload = run_json(capsys, ["tower", "--q", "2", "--poly", "2,0,1", "--chain", "2,3"])
    assert code == 2
    assert payload["code"] == "InvalidChain"


def test_factor_gorenstein_conductor(capsys):
    code, payload = run_json(capsys, ["factor", "--q", "2", "--poly", "2,0,1", "--s", "3,0"])
    assert code == 0
    assert [f["norm"] for f in payload["factors"]] == [3, 3]
    assert payload["center_structure"] == [3, 3]

    code, payload = run_json(capsys, ["gorenstein", "--field", "-2,0,0,1", "--order", "zpi"])
    assert code == 0
    assert payload["gorenstein"] is True

    code, payload = run_json(capsys, ["conductor", "--q", "3", "--poly", "3,0,1"])
    assert code == 0
    assert payload["norm"] == "2"
    assert payload["invariants"] == [2]


def test_verify_ec(capsys):
    code, payload = run_json(capsys, ["verify-ec", "--p", "2", "--curve", "0,0,1,0,0"])
    assert code == 0
    assert payload["verdict"] == "PASS"
    assert payload["oracle_invariants"] == [3]


def test_verify_ec_integral_frobenius(capsys):
    code, payload = run_json(capsys, ["verify-ec", "--p", "2", "--k", "2", "--curve", "0,0,1,0,0"])
    assert code == 1
    assert payload["code"] == "OutOfTheoremScope"

    argv = ["verify-ec", "--p", "2", "--k", "2", "--curve", "0,0,1,0,0", "--integral-frobenius"]
    code, payload = run_json(capsys, argv)
    assert code == 0
    assert payload["oracle_invariants"] == [3, 3]


def test_resource_cap_exits_3(capsys):
    argv = ["verify-ec", "--p", "2", "--curve", "0,0,1,0,0", "--n", "4", "--cap-field", "8"]
    code, payload = run_json(capsys, argv)
    assert code == 3
    assert payload["code"] == "FieldTooLarge"
    assert get_settings().field_cap == 8


def test_verify_jac(capsys):
    code, payload = run_json(capsys, ["verify-jac", "--p", "3", "--f", "1,0,0,0,0"])
    assert code == 0
    assert payload["oracle_count"] == 10


def test_enumerate_with_campaign(capsys):
    code = run(["enumerate", "--q", "2", "--verify-ec-all"])
    lines = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    assert code == 0
    assert lines[0]["count"] == 5
    assert len(lines) == 1 + 16 + 1
    assert lines[-1] == {"status": "summary", "total": 16, "outcomes": {"PASS": 16}}


@pytest.mark.parametrize("argv", [["enumerate", "--q", "4"], ["enumerate", "--q", "2", "--g", "2"]])
def test_enumerate_lists_polynomials(capsys, argv):
    assert run(argv) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["count"] == len(payload["polynomials"]) > 0
