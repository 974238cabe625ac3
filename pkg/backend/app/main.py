# backend/app/main.py
"""
Command-Line Front End

Parses a job, runs it through the library and writes one JSON document to
standard output (JSON lines for campaigns); a short human-readable summary
goes to standard error. Exit codes: 0 success or PASS, 1 hypothesis not met
or verification FAIL, 2 invalid input, 3 resource cap.
"""

import argparse
import json
import logging
import sys
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

from pydantic import BaseModel

from .config import get_settings, use_settings
from .core.curves.elliptic import EllipticCurve
from .core.curves.hyperelliptic import HyperellipticCurve
from .core.exceptions import AbvarError, HypothesisNotMet, InvalidInputError
from .core.graph_state import CaseMode, Verdict, WeilPolynomial
from .core.ideals import (
    FractionalIdeal,
    conductor,
    factor_coprime_ideal,
    is_gorenstein,
    prime_norm,
    prime_residue_characteristic,
    trace_dual,
)
from .core.orchestrator import verify_ec, verify_jac
from .core.orders import (
    FieldElement,
    NumberField,
    NumberFieldOrder,
    OrderKind,
    field_of,
    maximal_order,
    order_construct,
    ring_closure,
)
from .core.structure import (
    center_structure_via_factorization,
    compare_modes,
    describe_order,
    fbar_tower,
    prime_power_torsion,
    rational_points_structure,
    torsion_structure,
)
from .core.tools.polynomials import poly_from_text
from .core.weil import enumerate_weil, is_ordinary, validate_weil
from .services.campaign_service import ec_campaign_items, run_campaign

logger = logging.getLogger(__name__)

MODES = {"gorenstein": CaseMode.GORENSTEIN, "center": CaseMode.CENTER}


class JobSpec(BaseModel):
    """A parsed, validated command line"""
    command: str
    options: Dict[str, Any]


# Input parsing

def _int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as e:
        raise InvalidInputError(f"bad integer list {text!r}: {e}")


def _coords(text: str) -> List[Fraction]:
    try:
        return [Fraction(part.strip()) for part in text.split(",") if part.strip() != ""]
    except (ValueError, ZeroDivisionError) as e:
        raise InvalidInputError(f"bad coordinate list {text!r}: {e}")


def _element(field: NumberField, text: str) -> FieldElement:
    return field.element(_coords(text))


def _weil(args) -> WeilPolynomial:
    return validate_weil(args.q, poly_from_text(args.poly).coeffs)


def _field_and_weil(args):
    """(field, weil or None) from --q/--poly or --field"""
    if getattr(args, "field", None):
        if args.poly:
            raise InvalidInputError("give either --q/--poly or --field, not both")
        return NumberField(poly_from_text(args.field)), None
    if args.q is None or not args.poly:
        raise InvalidInputError("--q and --poly are required")
    weil = _weil(args)
    return field_of(weil), weil


def _order(field: NumberField, weil: Optional[WeilPolynomial], spec: str) -> NumberFieldOrder:
    """zpi | zpipibar | maximal | gens:e1;e2;..."""
    if spec.startswith("gens:"):
        gens = [_element(field, part) for part in spec[len("gens:"):].split(";") if part.strip()]
        if weil is not None:
            return order_construct(weil, OrderKind.GENS, gens)
        return ring_closure(field, gens).relabel("gens:" + ";".join(str(g) for g in gens))
    try:
        kind = OrderKind(spec)
    except ValueError:
        raise InvalidInputError(f"unknown order {spec!r}")
    if weil is not None:
        return order_construct(weil, kind)
    if kind is OrderKind.ZPI:
        return ring_closure(field, [field.generator()], label="Z[pi]")
    if kind is OrderKind.MAXIMAL:
        return maximal_order(field)
    raise InvalidInputError(f"order {spec!r} needs a Weil polynomial (--q/--poly)")


def _mode(name: Optional[str]) -> Optional[CaseMode]:
    return MODES[name] if name else None


# Commands

def cmd_validate(args) -> Dict[str, Any]:
    coeffs = poly_from_text(args.poly).coeffs
    try:
        weil = validate_weil(args.q, coeffs)
    except InvalidInputError as e:
        return {"status": "invalid", "q": args.q, "poly": list(coeffs), "reason": e.code, "detail": e.detail}
    return {
        "status": "valid",
        "q": weil.q,
        "poly": list(weil.coeffs),
        "g": weil.g,
        "m": list(weil.m_coeffs),
        "d": weil.d,
        "ordinary": is_ordinary(weil),
    }


def cmd_structure(args) -> Dict[str, Any]:
    weil = _weil(args)
    order = _order(field_of(weil), weil, args.order)
    if args.compare:
        return {"status": "ok", **compare_modes(weil, order, args.n).model_dump(mode="json")}
    return rational_points_structure(weil, order, args.n, MODES[args.mode]).model_dump(mode="json")


def cmd_torsion(args) -> Dict[str, Any]:
    weil = _weil(args)
    field = field_of(weil)
    order = _order(field, weil, args.order)
    if args.prime:
        gens = [_element(field, part) for part in args.prime.split(";") if part.strip()]
        prime = FractionalIdeal.generated_by(order, gens)
        group = prime_power_torsion(weil, order, prime, args.r)
        return {
            "status": "ok",
            "q": weil.q,
            "poly": list(weil.coeffs),
            "order": describe_order(order, weil).model_dump(mode="json"),
            "prime": str(prime),
            "r": args.r,
            "d": weil.d,
            "invariants": list(group.invariants),
            "cardinality": group.cardinality,
        }
    if not args.s:
        raise InvalidInputError("torsion needs --s or --prime")
    return torsion_structure(weil, order, _element(field, args.s), _mode(args.mode)).model_dump(mode="json")


def cmd_tower(args) -> Dict[str, Any]:
    weil = _weil(args)
    order = _order(field_of(weil), weil, args.order)
    ells = _int_list(args.ell) if args.ell else []
    report = fbar_tower(weil, order, _int_list(args.chain), ells, args.depth, _mode(args.mode))
    return report.model_dump(mode="json")


def cmd_factor(args) -> Dict[str, Any]:
    field, weil = _field_and_weil(args)
    order = _order(field, weil, args.order)
    s = _element(field, args.s)
    factors = factor_coprime_ideal(order, s)
    out: Dict[str, Any] = {
        "status": "ok",
        "field": list(field.modulus.coeffs),
        "order": describe_order(order, weil).model_dump(mode="json"),
        "s": [str(c) for c in s.coords],
        "factors": [
            {
                "prime": str(prime),
                "norm": prime_norm(prime),
                "residue_characteristic": prime_residue_characteristic(prime),
                "exponent": e,
                "basis": [[str(c) for c in row] for row in prime.rows],
            }
            for prime, e in factors
        ],
    }
    if weil is not None:
        out["center_structure"] = list(center_structure_via_factorization(weil, order, s).invariants)
    return out


def cmd_gorenstein(args) -> Dict[str, Any]:
    field, weil = _field_and_weil(args)
    order = _order(field, weil, args.order)
    dual = trace_dual(order)
    return {
        "status": "ok",
        "field": list(field.modulus.coeffs),
        "order": describe_order(order, weil).model_dump(mode="json"),
        "gorenstein": is_gorenstein(order),
        "trace_dual": [[str(c) for c in e.coords] for e in dual.elements()],
    }


def cmd_conductor(args) -> Dict[str, Any]:
    field, weil = _field_and_weil(args)
    order = _order(field, weil, args.order)
    f = conductor(order)
    return {
        "status": "ok",
        "field": list(field.modulus.coeffs),
        "order": describe_order(order, weil).model_dump(mode="json"),
        "conductor": [[str(c) for c in e.coords] for e in f.elements()],
        "norm": str(f.norm()),
        "invariants": list(f.residue_structure().invariants),
    }


def cmd_verify_ec(args) -> Dict[str, Any]:
    curve = EllipticCurve.from_coefficients(args.p, args.k, _int_list(args.curve))
    return verify_ec(curve, args.n, args.integral_frobenius).model_dump(mode="json")


def cmd_verify_jac(args) -> Dict[str, Any]:
    curve = HyperellipticCurve.from_lower(args.p, _int_list(args.f))
    return verify_jac(curve, args.n).model_dump(mode="json")


def _emit_line(record: Dict[str, Any]) -> None:
    sys.stdout.write(json.dumps(record) + "\n")
    sys.stdout.flush()


def cmd_enumerate(args) -> int:
    polys = enumerate_weil(args.q, args.g)
    _emit_line({
        "status": "ok",
        "q": args.q,
        "g": args.g,
        "count": len(polys),
        "polynomials": [
            {"poly": list(w.coeffs), "m": list(w.m_coeffs), "d": w.d, "ordinary": is_ordinary(w)}
            for w in polys
        ],
    })
    _summary(f"{len(polys)} Weil polynomials of degree {2 * args.g} over F_{args.q}")
    if not args.verify_ec_all:
        return 0
    if args.g != 1:
        raise InvalidInputError("--verify-ec-all needs --g 1")
    p, k = polys[0].p, polys[0].k
    items = ec_campaign_items(p, k, args.n_max, args.integral_frobenius)
    summary = run_campaign(items, sink=_emit_line, jobs=args.jobs)
    _emit_line(summary.model_dump(mode="json"))
    _summary(f"campaign: {summary.total} items, {summary.outcomes}")
    return 1 if summary.failed else 0


# Argument parsing

def _add_weil(sub, required: bool = True) -> None:
    sub.add_argument("--q", type=int, required=required)
    sub.add_argument("--poly", required=required, help="c0,c1,...,c2g low degree first")


def _add_field_source(sub) -> None:
    _add_weil(sub, required=False)
    sub.add_argument("--field", help="m0,...,mn of a monic irreducible defining polynomial")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap-field", type=int, help="largest q^n an oracle may enumerate")
    common.add_argument("--cap-index", type=int, help="largest [O_K : O_min] for order enumeration")
    common.add_argument("--cap-factor", type=int, help="Pollard rho step budget")
    common.add_argument("--jobs", type=int, help="worker processes for campaigns")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="abvar",
        description="Group structure of A(F_q^n) for simple abelian varieties over finite fields",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("validate", parents=[common], help="validate a Weil polynomial")
    _add_weil(sub)

    sub = subs.add_parser("structure", parents=[common], help="structure of A(F_q^n)")
    _add_weil(sub)
    sub.add_argument("--order", default="zpi")
    sub.add_argument("--n", type=int, default=1)
    sub.add_argument("--mode", choices=sorted(MODES), default="gorenstein")
    sub.add_argument("--compare", action="store_true", help="evaluate both modes")

    sub = subs.add_parser("torsion", parents=[common], help="structure of A[s] or A[p^r]")
    _add_weil(sub)
    sub.add_argument("--order", default="zpi")
    sub.add_argument("--s", help="power-basis coordinates of s")
    sub.add_argument("--mode", choices=sorted(MODES))
    sub.add_argument("--prime", help="generators of a prime ideal, e1;e2")
    sub.add_argument("--r", type=int, default=1)

    sub = subs.add_parser("tower", parents=[common], help="A(F_q^n) along a divisibility chain")
    _add_weil(sub)
    sub.add_argument("--order", default="zpi")
    sub.add_argument("--chain", required=True)
    sub.add_argument("--ell")
    sub.add_argument("--depth", type=int, default=2)
    sub.add_argument("--mode", choices=sorted(MODES))

    sub = subs.add_parser("factor", parents=[common], help="prime factorization of sO")
    _add_field_source(sub)
    sub.add_argument("--order", default="zpi")
    sub.add_argument("--s", required=True)

    for name, text in (("gorenstein", "Gorenstein test"), ("conductor", "conductor (O : O_K)")):
        sub = subs.add_parser(name, parents=[common], help=text)
        _add_field_source(sub)
        sub.add_argument("--order", default="zpi")

    sub = subs.add_parser("verify-ec", parents=[common], help="verify against an elliptic curve")
    sub.add_argument("--p", type=int, required=True)
    sub.add_argument("--k", type=int, default=1)
    sub.add_argument("--curve", required=True, help="a1,a2,a3,a4,a6 as field codes")
    sub.add_argument("--n", type=int, default=1)
    sub.add_argument("--integral-frobenius", action="store_true")

    sub = subs.add_parser("verify-jac", parents=[common], help="verify against a genus-2 Jacobian")
    sub.add_argument("--p", type=int, required=True)
    sub.add_argument("--f", required=True, help="f0,...,f4 of y^2 = x^5 + f4 x^4 + ... + f0")
    sub.add_argument("--n", type=int, default=1)

    sub = subs.add_parser("enumerate", parents=[common], help="list Weil polynomials, optionally verify every curve")
    sub.add_argument("--q", type=int, required=True)
    sub.add_argument("--g", type=int, default=1)
    sub.add_argument("--verify-ec-all", action="store_true")
    sub.add_argument("--n-max", type=int, default=1)
    sub.add_argument("--integral-frobenius", action="store_true")
    return parser


COMMANDS = {
    "validate": cmd_validate,
    "structure": cmd_structure,
    "torsion": cmd_torsion,
    "tower": cmd_tower,
    "factor": cmd_factor,
    "gorenstein": cmd_gorenstein,
    "conductor": cmd_conductor,
    "verify-ec": cmd_verify_ec,
    "verify-jac": cmd_verify_jac,
}


def _apply_overrides(args) -> None:
    updates = {}
    if args.cap_field is not None:
        updates["field_cap"] = args.cap_field
    if args.cap_index is not None:
        updates["index_cap"] = args.cap_index
    if args.cap_factor is not None:
        updates["factor_budget"] = args.cap_factor
    if args.jobs is not None:
        updates["jobs"] = max(1, args.jobs)
    if updates:
        use_settings(get_settings().model_copy(update=updates))


def _summary(text: str) -> None:
    print(text, file=sys.stderr)


def _exit_code(payload: Dict[str, Any]) -> int:
    if payload.get("status") == "invalid":
        return 2
    if payload.get("verdict") == Verdict.FAIL.value:
        return 1
    return 0


def _error_payload(error: AbvarError) -> Dict[str, Any]:
    payload = {"status": error.status, "code": error.code, "detail": error.detail}
    if isinstance(error, HypothesisNotMet):
        payload["check"] = error.check
    return payload


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on malformed arguments and 0 on --help
        return int(e.code or 0)

    _apply_overrides(args)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO if args.verbose else get_settings().log_level,
        format="%(levelname)s %(name)s: %(message)s",
    )
    job = JobSpec(command=args.command, options=vars(args))
    logger.info("running %s", job.command)

    try:
        if job.command == "enumerate":
            return cmd_enumerate(args)
        payload = COMMANDS[job.command](args)
    except AbvarError as e:
        payload = _error_payload(e)
        print(json.dumps(payload, indent=2))
        _summary(f"{job.command}: {e.status} ({e.code}) {e.detail}")
        return e.exit_code

    print(json.dumps(payload, indent=2))
    code = _exit_code(payload)
    headline = payload.get("verdict") or payload.get("status")
    if "invariants" in payload:
        headline = f"{headline} {payload['invariants']}"
    _summary(f"{job.command}: {headline}")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
