"""Report documents: JSON-serializable results for the CLI and file readers.

Every document carries ``schema_version`` "neocalc/1", an echo of the
request, a results block, diagnostics and a warnings list.  All numbers are
finite (non-finite values serialize as null with a diagnostic flag), empty
intervals serialize as null, and serialization is deterministic for a fixed
request.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

from . import derivatives as dv
from . import sequences as sq
from .functions import FunctionOracle, gallery_list
from .intervals import Interval
from .oracles import is_r_limit_direct

SCHEMA_VERSION = "neocalc/1"

# Queries matching these (a, r) pairs on an alternating 0/2 tail profile
# reproduce reference claims that are inconsistent with the defect
# definition; reports flag them instead of silently disagreeing.
_INCONSISTENT_CLAIMS = ((0.0, 1.0), (-1.0, 2.0))


class ParseError(Exception):
    """Malformed input file."""


class InputError(ValueError):
    """Invalid request (bad options, out-of-domain points, ...)."""


def _num(value):
    value = float(value)
    return value if math.isfinite(value) else None


def _interval(iv: Interval):
    return None if iv.is_empty else [float(iv.lo), float(iv.hi)]


def _bounds_json(bounds: sq.TailBounds) -> dict:
    return {
        "sup_estimate": _num(bounds.sup_estimate),
        "inf_estimate": _num(bounds.inf_estimate),
        "window_size": int(bounds.window_size),
        "stable": bool(bounds.stable),
        "bounded": bool(bounds.bounded),
    }


# ---------------------------------------------------------------------------
# input files


def read_sequence_csv(path) -> sq.SequenceWindow:
    """One value per line, optional ``value`` header."""
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    rows = [line.strip() for line in lines if line.strip()]
    if rows and rows[0].lower() == "value":
        rows = rows[1:]
    if not rows:
        raise ParseError(f"{path}: no data rows")
    try:
        values = [float(row) for row in rows]
    except ValueError as exc:
        raise ParseError(f"{path}: non-numeric row: {exc}") from exc
    try:
        return sq.SequenceWindow(values)
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from exc


def read_samples_csv(path) -> tuple[list[float], list[float]]:
    """``x,y`` rows sorted by x, optional ``x,y`` header."""
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    rows = [line.strip() for line in lines if line.strip()]
    if rows and rows[0].replace(" ", "").lower() == "x,y":
        rows = rows[1:]
    if not rows:
        raise ParseError(f"{path}: no data rows")
    xs, ys = [], []
    for row in rows:
        parts = row.split(",")
        if len(parts) != 2:
            raise ParseError(f"{path}: expected 'x,y', got {row!r}")
        try:
            xs.append(float(parts[0]))
            ys.append(float(parts[1]))
        except ValueError as exc:
            raise ParseError(f"{path}: non-numeric row {row!r}") from exc
    return xs, ys


# ---------------------------------------------------------------------------
# sequence documents


def sequence_report(seq: sq.SequenceWindow, request: dict,
                    r_values=(), checks=(), membership_points=(),
                    tail_fraction: float = sq.DEFAULT_TAIL_FRACTION,
                    tolerance: float = sq.DEFAULT_STABILITY_TOL,
                    with_oracle: bool = False) -> dict:
    """Document for seq-analyze / seq-member requests.

    ``checks`` are (a, r) pairs answered by the r-limit query; queries that
    reproduce a known-inconsistent reference claim add a ``paper_note``
    warning when rejected.
    """
    report = sq.analyze_sequence(seq, r_values, tail_fraction, tolerance)
    bounds = report.bounds
    warnings: list[str] = []

    check_rows = []
    alternating_profile = (abs(bounds.sup_estimate - 2.0) <= 1e-9
                           and abs(bounds.inf_estimate) <= 1e-9)
    for a, r in checks:
        a, r = float(a), float(r)
        accepted = sq.is_r_limit(bounds, a, r)
        row = {"a": a, "r": r, "accepted": bool(accepted),
               "defect": _num(sq.limit_defect(bounds, a))}
        if with_oracle:
            direct = is_r_limit_direct(seq, a, r)
            row["oracle"] = {"holds": bool(direct.holds),
                             "witness_index": direct.witness_index,
                             "agrees": bool(direct.holds == accepted)}
        check_rows.append(row)
        if (not accepted and alternating_profile
                and any(a == ca and r == cr for ca, cr in _INCONSISTENT_CLAIMS)):
            warnings.append(
                f"paper_note: the check (a={a}, r={r}) reproduces a "
                "known-inconsistent reference claim for this alternating "
                "profile; the computed defect exceeds r, so it is rejected")

    membership_rows = [{"a": float(a), "mu": _num(sq.membership_lim(bounds, float(a)))}
                       for a in membership_points]

    measure, best = report.measure_of_convergence, report.best_point
    results = {
        "bounds": _bounds_json(bounds),
        "measure_of_convergence": _num(measure),
        "best_point": _num(best) if not math.isnan(best) else None,
        "fuzzy_converges": bool(sq.fuzzy_converges(bounds)),
        "requested_sets": [{"r": r, "interval": _interval(iv)}
                           for r, iv in sorted(report.requested_sets.items())],
        "checks": check_rows,
        "memberships": membership_rows,
    }
    diagnostics = {
        "length": len(seq),
        "start_index": seq.start_index,
        "tail_fraction": float(tail_fraction),
        "stability_tolerance": float(tolerance),
        "boundary_tolerance": sq.DEFAULT_BOUNDARY_TOL,
        "unbounded_heuristic_fired": not bounds.bounded,
    }
    return {"schema_version": SCHEMA_VERSION, "request": request,
            "results": results, "diagnostics": diagnostics,
            "warnings": warnings}


# ---------------------------------------------------------------------------
# derivative documents


def _mode_json(bounds: dv.QuotientBounds) -> dict:
    return {
        "d_lower": _num(bounds.d_lower),
        "d_upper": _num(bounds.d_upper),
        "bounded": bool(bounds.bounded),
        "stable": bool(bounds.stable),
        "left_cluster": _interval(bounds.left_cluster),
        "right_cluster": _interval(bounds.right_cluster),
        "cluster_is_hull": bool(bounds.cluster_is_hull),
    }


def derivative_report(oracle: FunctionOracle, x: float, request: dict,
                      mode: dv.ApproachMode = dv.ApproachMode.CENTERED,
                      r_values=(), ladder: dv.ScaleLadder = dv.ScaleLadder(),
                      ) -> dict:
    if not oracle.domain.contains(x):
        raise InputError(f"x={x} is outside the oracle domain "
                         f"[{oracle.domain.lo}, {oracle.domain.hi}]")
    report = dv.classify(oracle, x, ladder=ladder, r_values=r_values)
    if mode not in report.per_mode:
        raise InputError(f"mode {mode.value} unavailable at x={x}")

    requested_sets = []
    for r in sorted(float(r) for r in r_values):
        requested_sets.append({
            "r": r,
            "strong": _interval(report.strong_sets[(mode, r)]),
            "weak": [_interval(part) for part in report.weak_sets[(mode, r)]],
        })

    results = {
        "x": float(x),
        "classification": report.classification.value,
        "defect": _num(report.defect),
        "derivative_estimate": (None if math.isnan(report.derivative_estimate)
                                else _num(report.derivative_estimate)),
        "continuity_defect": _num(report.continuity_defect),
        "modes": {m.value: _mode_json(b) for m, b in sorted(
            report.per_mode.items(), key=lambda kv: kv[0].value)},
        "requested": {"mode": mode.value, "sets": requested_sets},
    }
    diagnostics = {
        "oracle": oracle.name,
        "eval_budget": int(oracle.eval_budget),
        "evaluations": int(report.evaluations),
        "mesh_limited": "mesh_limited" in report.flags,
        "mesh_spacing": (None if oracle.mesh_spacing is None
                         else float(oracle.mesh_spacing)),
        "flags": list(report.flags),
        "ladder": {"base": ladder.base, "factor": ladder.factor,
                   "count": ladder.count, "floor": ladder.floor,
                   "band": ladder.band},
    }
    return {"schema_version": SCHEMA_VERSION, "request": request,
            "results": results, "diagnostics": diagnostics, "warnings": []}


def profile_report(oracle: FunctionOracle, grid, r: float, request: dict,
                   ladder: dv.ScaleLadder = dv.ScaleLadder()) -> dict:
    try:
        rows = dv.global_profile(oracle, grid, r, ladder=ladder)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    row_docs = []
    failures = 0
    for row in rows:
        doc = {"x": float(row.x), "strong_set": _interval(row.strong),
               "defect": _num(row.defect), "mu_band": _interval(row.mu_band)}
        if row.error is not None:
            doc["error"] = row.error
            failures += 1
        row_docs.append(doc)
    results = {"r": float(r), "rows": row_docs}
    diagnostics = {
        "oracle": oracle.name,
        "eval_budget": int(oracle.eval_budget),
        "grid_points": len(row_docs),
        "failed_points": failures,
        "ladder": {"base": ladder.base, "factor": ladder.factor,
                   "count": ladder.count, "floor": ladder.floor,
                   "band": ladder.band},
    }
    return {"schema_version": SCHEMA_VERSION, "request": request,
            "results": results, "diagnostics": diagnostics, "warnings": []}


def _plot_num(value) -> str:
    return "nan" if value is None else repr(float(value))


def profile_plot_rows(doc: dict) -> str:
    """Tab-separated x, lo, hi, defect rows for plotting (nan for empty)."""
    lines = []
    for row in doc["results"]["rows"]:
        interval = row["strong_set"]
        lo, hi = (None, None) if interval is None else interval
        lines.append("\t".join([_plot_num(row["x"]), _plot_num(lo),
                                _plot_num(hi), _plot_num(row["defect"])]))
    return "\n".join(lines) + "\n"


def gallery_report(request: dict) -> dict:
    return {"schema_version": SCHEMA_VERSION, "request": request,
            "results": {"functions": gallery_list()},
            "diagnostics": {}, "warnings": []}


def to_json(doc: dict) -> str:
    """Deterministic document serialization (sorted keys, no NaN)."""
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"
