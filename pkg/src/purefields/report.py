"""
Report builders shared by the CLI and by JSON re-validation.

Every builder returns ``(report, ok)`` where ``report`` is a JSON-ready dict
and ``ok`` is False on a mathematical failure.  Unbounded integers (m,
discriminants, indices, factor values) are decimal strings; coordinates and
small parameters stay JSON numbers.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Any, Callable, Optional

from .field import ElementRep, PureField
from .forms import factor_values
from .monogenity import ResidueClass, classify, index_form_solvable_mod, search_small_index
from .orders import element_index, element_numerators, maximal_order
from .periodicity import FAIL, PASS, SweepRecord, check_shift_invariance, compute_n0, verify_period
from .tables import format_pattern, instantiate, lookup_pattern, validate_pattern

Report = dict[str, Any]


def _ints(xs) -> list[int]:
    return [int(x) for x in xs]


def basis_report(n: int, m: int) -> tuple[Report, bool]:
    field = PureField(n, m)
    b = maximal_order(field)
    return {
        "command": "basis",
        "n": n,
        "m": str(m),
        "case": lookup_pattern(n, m).case_id,
        "elements": [str(e) for e in b.elements],
        "denominators": list(b.denominators),
        "disc": str(b.disc),
        "index_of_theta": str(b.index_of_theta),
    }, True


def pattern_report(n: int, m: int) -> tuple[Report, bool]:
    p = lookup_pattern(n, m)
    rep = validate_pattern(p, m)
    return {
        "command": "pattern",
        "n": n,
        "m": str(m),
        "case": p.case_id,
        "line": format_pattern(p),
        "rows": [str(e) for e in p.rows],
        "disc_formula": str(p.disc),
        "disc": str(rep.disc),
        "integral": list(rep.integral),
        "disc_match": rep.disc_match,
        "structure_match": rep.structure_match,
        "passed": rep.passed,
    }, rep.passed


def index_report(n: int, m: int, coords: list[int]) -> tuple[Report, bool]:
    p = lookup_pattern(n, m)
    basis = instantiate(p, m)
    ir = element_index(basis, coords)
    a, d = element_numerators(basis, coords)
    return {
        "command": "index",
        "n": n,
        "m": str(m),
        "case": p.case_id,
        "coords": _ints(coords),
        "element": str(ElementRep(tuple(a), d).canonical()),
        "index": str(ir.index),
        "disc_element": str(ir.disc_element),
        "primitive": ir.primitive,
    }, True


def factors_report(n: int, m: int, coords: list[int]) -> tuple[Report, bool]:
    p = lookup_pattern(n, m)
    basis = instantiate(p, m)
    fs = factor_values(basis.field, basis, coords)
    return {
        "command": "factors",
        "n": n,
        "m": str(m),
        "case": p.case_id,
        "coords": _ints(coords),
        "factors": [str(v) for v in fs.values],
        "product": str(fs.product),
    }, True


def solvable_report(n: int, residue: int, modulus: Optional[int], q: int) -> tuple[Report, bool]:
    cls = ResidueClass(n, residue, modulus or n * n)
    ok, witness = index_form_solvable_mod(n, cls, q)
    return {
        "command": "solvable",
        "n": n,
        "residue": cls.residue,
        "modulus": cls.modulus,
        "q": q,
        "case": cls.pattern.case_id,
        "solvable": ok,
        "witness": list(witness) if witness else None,
    }, True


def classify_report(n: int, m: int) -> tuple[Report, bool]:
    c = classify(n, m)
    return {
        "verdict": c.verdict,
        "witness": list(c.witness) if c.witness else None,
        "reason": c.reason,
        "detail": c.detail,
        "case": c.case_id,
        "command": "classify",
        "n": n,
        "m": str(m),
    }, True


def search_report(n: int, m: int, bound: int, workers: int = 1) -> tuple[Report, bool]:
    s = search_small_index(PureField(n, m), bound, workers=workers)
    return {
        "command": "search",
        "n": n,
        "m": str(m),
        "bound": bound,
        "best_index": str(s.best_index),
        "best_coords": list(s.best_coords),
        "count_index_one": s.count_index_one,
        "index_one": [list(x) for x in s.index_one],
    }, True


def period_report(n: int, r: int, mode: str, **kw) -> tuple[Report, bool]:
    reps = verify_period(n, r, mode, **kw)
    nn = n * n
    records = [
        {"k": (rep.m - r) // nn, "m": str(rep.m), "status": PASS if rep.passed else FAIL}
        for rep in reps
    ]
    failures = sum(1 for x in records if x["status"] == FAIL)
    params = {k: v for k, v in kw.items() if k != "workers" and v is not None}
    return {
        "command": "verify-period",
        "n": n,
        "r": r,
        "mode": mode,
        "params": params,
        "checked": len(records),
        "failures": failures,
        "records": records,
    }, failures == 0


def n0_report(n: int) -> tuple[Report, bool]:
    n0 = compute_n0(n)
    return {"command": "n0", "n": n, "n0": str(n0), "n0_pow": str(n0**n)}, True


def shift_report(n: int, m: int) -> tuple[Report, bool]:
    PureField(n, m)
    same = check_shift_invariance(n, m)
    return {
        "command": "shift-check",
        "n": n,
        "m": str(m),
        "shifted": str(m + compute_n0(n) ** n),
        "same_structure": same,
        "skipped": same is None,
    }, same is not False


# ------------------------------------------------------------------ rendering

def render_json(report: Report) -> str:
    return json.dumps(report, separators=(",", ":"))


def _text_value(v: Any) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, list):
        return " ".join(
            "(" + ",".join(map(str, x)) + ")" if isinstance(x, list) else _text_value(x) for x in v
        )
    if isinstance(v, dict):
        return " ".join(f"{k}={_text_value(x)}" for k, x in v.items())
    return str(v)


def render_text(report: Report) -> str:
    lines = []
    for key, value in report.items():
        if key == "records":
            continue
        lines.append(f"{key}: {_text_value(value)}")
    for rec in report.get("records", []):
        lines.append(
            SweepRecord(report["n"], report["r"], rec["k"], int(rec["m"]), rec["status"]).to_line()
        )
    return "\n".join(lines)


def render_csv(report: Report) -> str:
    if "records" not in report:
        raise ValueError("csv output is only available for sweep reports")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "r", "k", "m", "status"])
    for rec in report["records"]:
        w.writerow([report["n"], report["r"], rec["k"], rec["m"], rec["status"]])
    return buf.getvalue().rstrip("\n")


RENDERERS: dict[str, Callable[[Report], str]] = {
    "json": render_json,
    "text": render_text,
    "csv": render_csv,
}


# ------------------------------------------------------------------ re-validation

def rebuild(report: Report) -> tuple[Report, bool]:
    """Recompute a report from the inputs it records."""
    cmd = report["command"]
    n = int(report["n"])
    if cmd == "basis":
        return basis_report(n, int(report["m"]))
    if cmd == "pattern":
        return pattern_report(n, int(report["m"]))
    if cmd == "index":
        return index_report(n, int(report["m"]), report["coords"])
    if cmd == "factors":
        return factors_report(n, int(report["m"]), report["coords"])
    if cmd == "solvable":
        return solvable_report(n, report["residue"], report["modulus"], report["q"])
    if cmd == "classify":
        return classify_report(n, int(report["m"]))
    if cmd == "search":
        return search_report(n, int(report["m"]), report["bound"])
    if cmd == "verify-period":
        return period_report(n, report["r"], report["mode"], **report["params"])
    if cmd == "n0":
        return n0_report(n)
    if cmd == "shift-check":
        return shift_report(n, int(report["m"]))
    raise ValueError(f"unknown report command {cmd!r}")


def check_report(report: Report) -> bool:
    """Re-validate a parsed report: recompute it and run its own consistency check."""
    fresh, _ = rebuild(report)
    if fresh != report:
        return False
    cmd = report["command"]
    n, m = int(report["n"]), int(report.get("m", 0) or 0)
    if cmd == "classify" and report["verdict"] == "Monogenic":
        basis = instantiate(lookup_pattern(n, m), m)
        return element_index(basis, report["witness"]).index == 1
    if cmd == "factors":
        basis = instantiate(lookup_pattern(n, m), m)
        return abs(int(report["product"])) == element_index(basis, report["coords"]).index
    if cmd == "search" and report["index_one"]:
        basis = instantiate(lookup_pattern(n, m), m)
        return all(element_index(basis, x).index == 1 for x in report["index_one"])
    return True
