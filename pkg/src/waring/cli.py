"""Command-line front end: rank, classify, decompose, closure, sample, fit,
and batch processing, with deterministic text or JSON output.

Rationals serialize as strings "p/q" (plain "p" for integers) and complex
numbers as {"re": ..., "im": ...} decimal strings alongside the precision
in bits, so exact values survive the wire.  The JSON emitted by `rank`
can be fed back through `--json`.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import mpmath as mp
from mpmath.libmp import prec_to_dps

from .decompose import decompose, working_precision
from .errors import InvalidInputError, ParseError, WaringError
from .expr import form_to_text, parse_form
from .forms import BinaryForm, form_from_coeffs
from .oracle import numeric_fit
from .sylvester import (
    classify,
    closure_ranks,
    sample_degenerate,
    sample_generic_rank,
    waring_rank,
)

__all__ = ["main", "run"]


class _ArgumentParser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; the spec for this tool
    # reserves 2 for invalid input, so route usage problems through ParseError
    def error(self, message):
        raise ParseError(message)


def _fraction_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _parse_fraction(s) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, str):
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInputError(f"bad rational {s!r}") from exc
    raise InvalidInputError(f"bad rational {s!r}")


def _form_payload(q: BinaryForm) -> dict:
    return {
        "degree": q.degree,
        "coefficients": [_fraction_str(c) for c in q.coeffs],
    }


def _load_form_json(obj) -> BinaryForm:
    if not isinstance(obj, dict):
        raise InvalidInputError("form JSON must be an object")
    if "degree" not in obj or "coefficients" not in obj:
        raise InvalidInputError('form JSON needs "degree" and "coefficients"')
    degree = obj["degree"]
    coeffs = obj["coefficients"]
    if not isinstance(degree, int) or not isinstance(coeffs, list):
        raise InvalidInputError("malformed form JSON")
    if len(coeffs) != degree + 1:
        raise InvalidInputError(
            f"degree {degree} needs {degree + 1} coefficients, got {len(coeffs)}"
        )
    return form_from_coeffs(degree, [_parse_fraction(c) for c in coeffs])


def _mpf_str(x, digits: int) -> str:
    return mp.nstr(mp.mpf(x), digits)


def _complex_payload(z, digits: int) -> dict:
    z = mp.mpc(z)
    return {"re": mp.nstr(z.real, digits), "im": mp.nstr(z.imag, digits)}


def _float_str(x: float) -> str:
    return format(x, ".17g")


# ---------------------------------------------------------------------------
# command payloads (shared by single invocations and batch records)


def _rank_payload(q: BinaryForm) -> dict:
    res = waring_rank(q)
    payload = _form_payload(q)
    payload.update(
        {
            "rank": res.rank,
            "border_rank": res.border_rank,
            "case": res.case.value,
            "apolar": _form_payload(res.apolar) if res.apolar is not None else None,
        }
    )
    return payload


def _classify_payload(q: BinaryForm) -> dict:
    cls = classify(q)
    payload = _rank_payload(q)
    payload["stratum"] = cls.stratum
    payload["closure_ranks"] = sorted(cls.closure_ranks)
    return payload


def _decompose_payload(q: BinaryForm, precision: int, seed: int, tol: float) -> dict:
    dec = decompose(q, precision_bits=precision, seed=seed, tol=tol)
    digits = prec_to_dps(working_precision(precision)) + 2
    payload = _form_payload(q)
    payload.update(
        {
            "rank": len(dec.terms),
            "method": dec.method,
            "precision_bits": dec.precision_bits,
            "residual": _mpf_str(dec.residual, 5),
            "terms": [
                {
                    "lambda": _complex_payload(lam, digits),
                    "point": [
                        _complex_payload(pt.t, digits),
                        _complex_payload(pt.u, digits),
                    ],
                }
                for lam, pt in dec.terms
            ],
        }
    )
    return payload


def _closure_payload(degree: int, rank: int) -> dict:
    return {
        "degree": degree,
        "rank": rank,
        "closure_ranks": sorted(closure_ranks(degree, rank)),
    }


def _sample_payload(kind: str, d: int, param: int, seed: int) -> dict:
    if kind == "generic":
        q = sample_generic_rank(d, param, seed)
    else:
        q = sample_degenerate(d, param, seed)
    payload = {"kind": kind, "seed": seed}
    payload.update(_rank_payload(q))
    payload["expr"] = form_to_text(q)
    return payload


def _fit_payload(q: BinaryForm, r: int, restarts: int, seed: int) -> dict:
    fit = numeric_fit(q, r, restarts=restarts, seed=seed)
    return {
        "r": fit.r,
        "best_residual": _float_str(fit.best_residual),
        "restarts_used": fit.restarts_used,
        "parameters": [
            {"re": _float_str(z.real), "im": _float_str(z.imag)} for z in fit.parameters
        ],
    }


# ---------------------------------------------------------------------------
# text renderers (built from the payloads so text and JSON always agree)


def _apolar_suffix(payload: dict) -> str:
    ap = payload.get("apolar")
    if ap is None:
        return ""
    form = form_from_coeffs(ap["degree"], [_parse_fraction(c) for c in ap["coefficients"]])
    return f"; apolar f = {form_to_text(form)}"


def _rank_text(payload: dict) -> str:
    return (
        f"rank = {payload['rank']} ({payload['case']}; "
        f"border rank {payload['border_rank']}{_apolar_suffix(payload)})"
    )


def _classify_text(payload: dict) -> str:
    ranks = ", ".join(str(r) for r in payload["closure_ranks"])
    return "\n".join(
        [
            _rank_text(payload),
            f"stratum = {payload['stratum']}",
            f"closure ranks = {{{ranks}}}",
        ]
    )


def _complex_text(obj: dict) -> str:
    return f"({obj['re']} + {obj['im']}i)"


def _decompose_text(payload: dict) -> str:
    lines = [
        f"rank = {payload['rank']}; method = {payload['method']}; "
        f"precision = {payload['precision_bits']} bits; residual = {payload['residual']}"
    ]
    for idx, term in enumerate(payload["terms"], start=1):
        point = ", ".join(_complex_text(c) for c in term["point"])
        lines.append(f"term {idx}: lambda = {_complex_text(term['lambda'])}, point = [{point}]")
    return "\n".join(lines)


def _closure_text(payload: dict) -> str:
    return "{" + ", ".join(str(r) for r in payload["closure_ranks"]) + "}"


def _sample_text(payload: dict) -> str:
    return "\n".join([f"form = {payload['expr']}", _rank_text(payload)])


def _fit_text(payload: dict) -> str:
    return (
        f"r = {payload['r']}; best residual = {payload['best_residual']}; "
        f"restarts used = {payload['restarts_used']}"
    )


_RENDERERS = {
    "rank": _rank_text,
    "classify": _classify_text,
    "decompose": _decompose_text,
    "closure": _closure_text,
    "sample": _sample_text,
    "fit": _fit_text,
}


# ---------------------------------------------------------------------------
# argument handling


def _build_parser() -> _ArgumentParser:
    # --format and the --degree assertion are accepted both before and after
    # the subcommand; SUPPRESS keeps the subparser from clobbering values
    # given before it
    fmt_parent = _ArgumentParser(add_help=False)
    fmt_parent.add_argument(
        "--format", choices=("text", "json"), default=argparse.SUPPRESS
    )
    deg_parent = _ArgumentParser(add_help=False)
    deg_parent.add_argument(
        "--degree", type=int, default=argparse.SUPPRESS, help="assert the parsed degree"
    )

    # no set_defaults here: parents share action objects, and set_defaults
    # would overwrite the shared SUPPRESS default, letting the subparser
    # clobber values parsed before the subcommand; run() fills the fallbacks
    parser = _ArgumentParser(
        prog="waring",
        description="Waring rank of binary forms",
        parents=[fmt_parent, deg_parent],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_rank = sub.add_parser("rank", parents=[fmt_parent, deg_parent], help="exact rank with certificate")
    p_rank.add_argument("expr", nargs="?", default=None)
    p_rank.add_argument("--json", dest="json_file", default=None, help="read the form from a JSON file")

    p_classify = sub.add_parser(
        "classify", parents=[fmt_parent, deg_parent], help="rank plus stratum and closure ranks"
    )
    p_classify.add_argument("expr")

    p_dec = sub.add_parser(
        "decompose", parents=[fmt_parent, deg_parent], help="explicit verified power-sum decomposition"
    )
    p_dec.add_argument("expr")
    p_dec.add_argument("--precision", type=int, default=256)
    p_dec.add_argument("--seed", type=int, default=0)
    p_dec.add_argument("--tol", type=float, default=1e-30)

    p_clo = sub.add_parser("closure", parents=[fmt_parent], help="rank set of the stratum closure")
    p_clo.add_argument("--degree", type=int, required=True, dest="clo_degree")
    p_clo.add_argument("--rank", type=int, required=True, dest="clo_rank")

    p_sample = sub.add_parser(
        "sample", parents=[fmt_parent], help="sample a form of prescribed rank behavior"
    )
    group = p_sample.add_mutually_exclusive_group(required=True)
    group.add_argument("--generic", nargs=2, type=int, metavar=("D", "R"))
    group.add_argument("--degenerate", nargs=2, type=int, metavar=("D", "K"))
    p_sample.add_argument("--seed", type=int, default=0)

    p_fit = sub.add_parser(
        "fit", parents=[fmt_parent, deg_parent], help="numeric least-squares fit by r powers"
    )
    p_fit.add_argument("expr")
    p_fit.add_argument("--r", type=int, required=True)
    p_fit.add_argument("--restarts", type=int, default=64)
    p_fit.add_argument("--seed", type=int, default=0)

    p_batch = sub.add_parser("batch", parents=[fmt_parent], help="process a JSON array of records")
    p_batch.add_argument("file", help="path to a JSON array, or - for stdin")

    return parser


def _obtain_form(ns) -> BinaryForm:
    if ns.command == "rank":
        if (ns.expr is None) == (ns.json_file is None):
            raise ParseError("rank needs exactly one of <expr> or --json FILE")
        if ns.json_file is not None:
            try:
                with open(ns.json_file, "r", encoding="utf-8") as fh:
                    obj = json.load(fh)
            except OSError as exc:
                raise ParseError(f"cannot read {ns.json_file}: {exc}") from exc
            except json.JSONDecodeError as exc:
                raise ParseError(f"bad JSON in {ns.json_file}: {exc}") from exc
            q = _load_form_json(obj)
        else:
            q = parse_form(ns.expr)
    else:
        q = parse_form(ns.expr)
    if ns.degree is not None and q.degree != ns.degree:
        raise InvalidInputError(
            f"degree assertion failed: expression has degree {q.degree}, expected {ns.degree}"
        )
    return q


def _run_record(record) -> dict:
    if not isinstance(record, dict) or "command" not in record:
        raise InvalidInputError('batch records need a "command" field')
    command = record["command"]
    if command in ("rank", "classify", "decompose", "fit"):
        if "expr" in record:
            q = parse_form(record["expr"])
        elif "degree" in record and "coefficients" in record:
            q = _load_form_json(record)
        else:
            raise InvalidInputError(f"record for {command!r} needs expr or degree+coefficients")
    if command == "rank":
        return _rank_payload(q)
    if command == "classify":
        return _classify_payload(q)
    if command == "decompose":
        return _decompose_payload(
            q,
            int(record.get("precision", 256)),
            int(record.get("seed", 0)),
            float(record.get("tol", 1e-30)),
        )
    if command == "fit":
        if "r" not in record:
            raise InvalidInputError('fit records need "r"')
        return _fit_payload(
            q, int(record["r"]), int(record.get("restarts", 64)), int(record.get("seed", 0))
        )
    if command == "closure":
        try:
            return _closure_payload(int(record["degree"]), int(record["rank"]))
        except KeyError as exc:
            raise InvalidInputError('closure records need "degree" and "rank"') from exc
    if command == "sample":
        seed = int(record.get("seed", 0))
        if "generic" in record:
            d, r = (int(v) for v in record["generic"])
            return _sample_payload("generic", d, r, seed)
        if "degenerate" in record:
            d, k = (int(v) for v in record["degenerate"])
            return _sample_payload("degenerate", d, k, seed)
        raise InvalidInputError('sample records need "generic" or "degenerate"')
    raise InvalidInputError(f"unknown batch command {command!r}")


def _run_batch(path: str) -> tuple[int, str]:
    try:
        if path == "-":
            records = json.load(sys.stdin)
        else:
            with open(path, "r", encoding="utf-8") as fh:
                records = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad JSON in {path}: {exc}") from exc
    if not isinstance(records, list):
        raise InvalidInputError("batch input must be a JSON array")
    results = []
    exit_code = 0
    for record in records:
        try:
            results.append(_run_record(record))
        except WaringError as exc:
            if exit_code == 0:
                exit_code = exc.exit_code
            results.append({"error": {"exit_code": exc.exit_code, "message": str(exc)}})
    return exit_code, json.dumps(results, indent=2)


def run(ns) -> tuple[int, str]:
    """Execute parsed arguments; returns (exit code, output text)."""
    if not hasattr(ns, "format"):
        ns.format = "text"
    if not hasattr(ns, "degree"):
        ns.degree = None
    if ns.command == "batch":
        return _run_batch(ns.file)
    if ns.command == "rank":
        payload = _rank_payload(_obtain_form(ns))
    elif ns.command == "classify":
        payload = _classify_payload(_obtain_form(ns))
    elif ns.command == "decompose":
        payload = _decompose_payload(_obtain_form(ns), ns.precision, ns.seed, ns.tol)
    elif ns.command == "closure":
        payload = _closure_payload(ns.clo_degree, ns.clo_rank)
    elif ns.command == "sample":
        if ns.generic is not None:
            payload = _sample_payload("generic", ns.generic[0], ns.generic[1], ns.seed)
        else:
            payload = _sample_payload("degenerate", ns.degenerate[0], ns.degenerate[1], ns.seed)
    elif ns.command == "fit":
        payload = _fit_payload(_obtain_form(ns), ns.r, ns.restarts, ns.seed)
    else:  # pragma: no cover - argparse enforces the choices
        raise ParseError(f"unknown command {ns.command!r}")
    if ns.format == "json":
        return 0, json.dumps(payload, indent=2)
    return 0, _RENDERERS[ns.command](payload)


def main(argv=None) -> int:
    try:
        ns = _build_parser().parse_args(argv)
        code, output = run(ns)
        print(output)
        return code
    except WaringError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
