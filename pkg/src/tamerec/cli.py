"""Job runner binding all verifiers.

Each subcommand consumes a JSON job file and writes a machine-readable
report (stdout by default, --report FILE otherwise) plus a one-line human
summary on stderr.  Exit codes: 0 all asserted identities pass, 1 an
assertion failed, 2 schema error, 3 compute error.  Reports are
byte-deterministic for a given job and version (sorted keys, fixed
reduction orders); wall-clock timings are only included with --timings.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__
from .chains import FieldTag, five_term, wedge_of_functions
from .dilognum import ORIENTATION, IntegrandSpec, chow_integral, l2_tilde
from .errors import ComputeError, SchemaError, TameRecError
from .homotopy import bloch_invariants_match, h_rational, h_rational_map
from .normlift import (FTValuation, GeneralPoint, embed_line_wedge,
                       general_support, lift_mixed, lift_wedge, norm_map,
                       pullback_map, residue_wedge, tame_ft_wedge)
from .serialize import (decode_bipoly, decode_element, decode_factored_function,
                        decode_field, decode_point, decode_ratfunc,
                        decode_tpoly, encode_bloch, rat_to_str)
from .surface import (curve_atom, parshin_point_check, snc_check,
                      surface_reciprocity_check, surface_wedge)
from .tame import SIGMA, weil_check
from .zerotest import wedge2_zero_report

COMMANDS = ("weil", "h-map", "fiveterm", "lift", "norm-check",
            "parshin-point", "surface-reciprocity", "chow", "suite")


def _load_job(path, expect_command=None):
    try:
        with open(path) as fh:
            job = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read job {path}: {exc}") from exc
    if not isinstance(job, dict):
        raise SchemaError("job must be a JSON object")
    cmd = job.get("command", expect_command)
    if expect_command is not None and cmd != expect_command:
        raise SchemaError(
            f"job command {cmd!r} does not match subcommand "
            f"{expect_command!r}")
    return job


def _field_of(job):
    if "field" not in job:
        raise SchemaError("job is missing the field object")
    return decode_field(job["field"])


def _options(job):
    opts = job.get("options", {})
    if not isinstance(opts, dict):
        raise SchemaError("options must be an object")
    return opts


# ---------------------------------------------------------------------------
# per-command runners (job dict -> report dict with "ok")
# ---------------------------------------------------------------------------


def run_weil(job):
    field = _field_of(job)
    funcs = [decode_factored_function(field, f) for f in job.get("wedge", [])]
    if len(funcs) != 2:
        raise SchemaError("weil expects a wedge of exactly two functions")
    w = wedge_of_functions(FieldTag.line(field, "t"), funcs)
    rep = weil_check(w)
    return {"command": "weil", "ok": rep["is_zero"],
            "sum_terms": rep["sum_terms"], "is_zero": rep["is_zero"],
            "method": rep["method"], "sigma": SIGMA}


def run_h_map(job):
    field = _field_of(job)
    opts = _options(job)
    emb = int(opts.get("embedding", 0))
    funcs = [decode_factored_function(field, f) for f in job.get("wedge", [])]
    if len(funcs) != 3:
        raise SchemaError("h-map expects a wedge of exactly three functions")
    w = wedge_of_functions(FieldTag.line(field, "t"), funcs)
    value = h_rational(w)
    return {"command": "h-map", "ok": True,
            "bloch_terms": encode_bloch(value),
            "bloch_wigner_value": l2_tilde(value, emb),
            "embedding": emb, "sigma": SIGMA}


def run_fiveterm(job):
    field = _field_of(job)
    opts = _options(job)
    emb = int(opts.get("embedding", 0))
    tol = float(opts.get("tol", 1e-10))
    pts = [decode_point(field, p) for p in job.get("points", [])]
    if len(pts) != 5:
        raise SchemaError("fiveterm expects exactly five points")
    b = five_term(*pts, field)
    value = l2_tilde(b, emb)
    ok = abs(value) <= tol
    return {"command": "fiveterm", "ok": ok,
            "bloch_terms": encode_bloch(b),
            "bloch_wigner_value": value, "tol": tol, "embedding": emb}


def _decode_point_descr(field, job):
    pobj = job.get("point")
    if not isinstance(pobj, dict) or "fp" not in pobj:
        raise SchemaError("job needs a point object with an fp entry")
    fp = decode_tpoly(field, pobj["fp"])
    param = None
    if "param" in pobj and pobj["param"] is not None:
        xs = decode_ratfunc(field, pobj["param"][0])
        ys = decode_ratfunc(field, pobj["param"][1])
        param = (xs, ys)
    return GeneralPoint(fp, param)


def run_lift(job):
    field = _field_of(job)
    opts = _options(job)
    order = opts.get("order", "asc")
    point = _decode_point_descr(field, job)
    slots = [decode_tpoly(field, s) for s in job.get("wedge", [])]
    if len(slots) != 3:
        raise SchemaError("lift expects three residue-field slots")
    a = residue_wedge(point, slots)
    lift = lift_wedge(a, point, order=order)
    back = tame_ft_wedge(lift, FTValuation.general(point))
    audit = []
    ok = back == a
    audit.append({"valuation": f"nu_p[{point.fp}]",
                  "matches_input": back == a})
    for q in general_support(lift):
        if q == point:
            continue
        res = tame_ft_wedge(lift, FTValuation.general(q))
        audit.append({"valuation": f"nu[{q.fp}]", "vanishes": res.is_zero()})
        ok = ok and res.is_zero()
    return {"command": "lift", "ok": ok, "lift": repr(lift),
            "tame_audit": audit, "order": order, "sigma": SIGMA}


def run_norm_check(job):
    field = _field_of(job)
    opts = _options(job)
    emb = int(opts.get("embedding", 0))
    tol = float(opts.get("tol", 1e-9))
    point = _decode_point_descr(field, job)
    if point.param is None:
        raise SchemaError("norm-check needs a parametrized point")
    h = h_rational_map(field, "x")
    hs = h_rational_map(field, "s")
    nm = norm_map(h, point)
    pb = pullback_map(hs, point)
    results = []
    ok = True
    for wobj in job.get("wedges", []):
        slots = [decode_tpoly(field, s) for s in wobj]
        a = residue_wedge(point, slots)
        v_norm = nm(a)
        v_pull = pb(a)
        match, details = bloch_invariants_match(v_norm, v_pull, tol, emb)
        ok = ok and match
        results.append({"norm": encode_bloch(v_norm),
                        "pullback": encode_bloch(v_pull),
                        "match": match,
                        "bloch_wigner_diff": details["bloch_wigner_diff"],
                        "delta2_zero": details["delta2_zero"]})
    return {"command": "norm-check", "ok": ok, "results": results,
            "tol": tol, "embedding": emb, "sigma": SIGMA}


def run_parshin(job):
    field = _field_of(job)
    units = [decode_bipoly(field, u) for u in job.get("units", [])]
    rep = parshin_point_check(job.get("shape"), int(job.get("n", 0)),
                              int(job.get("m", 0)), units, field)
    return {"command": "parshin-point", "ok": rep["is_zero"],
            "shape": rep["shape"], "group": rep["group"],
            "value": repr(rep["value"]), "sigma": SIGMA}


def run_surface(job):
    field = _field_of(job)
    opts = _options(job)
    emb = int(opts.get("embedding", 0))
    tol = float(opts.get("tol", 1e-6))
    slots = []
    for s in job.get("wedge", []):
        if "const" in s:
            slots.append(decode_element(field, s["const"]))
            continue
        if "curve" not in s:
            raise SchemaError("surface slot needs a curve or const entry")
        param = None
        if s.get("param") is not None:
            param = (decode_ratfunc(field, s["param"][0]),
                     decode_ratfunc(field, s["param"][1]))
        slots.append(curve_atom(decode_bipoly(field, s["curve"]), param))
    b = surface_wedge(field, slots)
    rep = surface_reciprocity_check(b, emb, tol)
    return {"command": "surface-reciprocity", "ok": rep["passed"],
            "delta2_zero": rep["delta2_zero"],
            "delta2_method": rep["delta2_method"],
            "bloch_wigner": rep["bloch_wigner"], "tol": tol,
            "snc": rep["snc"],
            "corner_components":
                rep["snc_witness"].get("corner_components", []),
            "total": encode_bloch(rep["total"]), "embedding": emb,
            "sigma": SIGMA}


def run_chow(job):
    field = _field_of(job)
    opts = _options(job)
    emb = int(opts.get("embedding", 0))
    tol = float(opts.get("tol", 1e-2))
    radii = opts.get("exclusion_radii")
    funcs = [decode_factored_function(field, f)
             for f in job.get("functions", [])]
    if len(funcs) != 3:
        raise SchemaError("chow expects exactly three functions")
    spec = IntegrandSpec(funcs, emb)
    detail = chow_integral(spec, tol, exclusion_radii=radii, detail=True)
    w = wedge_of_functions(FieldTag.line(field, "t"), funcs)
    reg = l2_tilde(h_rational(w), emb)
    difference = detail["value"] + reg
    ok = abs(difference) <= tol
    return {"command": "chow", "ok": ok,
            "integral": detail["value"],
            "error_estimate": detail["error_estimate"],
            "regulator_value": reg,
            "difference": difference, "tol": tol,
            "embedding": emb,
            "sign_conventions": {"sigma": SIGMA,
                                 "orientation": ORIENTATION}}


RUNNERS = {
    "weil": run_weil,
    "h-map": run_h_map,
    "fiveterm": run_fiveterm,
    "lift": run_lift,
    "norm-check": run_norm_check,
    "parshin-point": run_parshin,
    "surface-reciprocity": run_surface,
    "chow": run_chow,
}


# ---------------------------------------------------------------------------
# report plumbing
# ---------------------------------------------------------------------------


def run_job_dict(job):
    cmd = job.get("command")
    if cmd not in RUNNERS:
        raise SchemaError(f"unknown command {cmd!r}")
    try:
        return RUNNERS[cmd](job)
    except (SchemaError, TameRecError):
        raise
    except Exception as exc:
        raise ComputeError(f"{type(exc).__name__}: {exc}") from exc


def run_job(path, report_path=None, timings=False):
    """Execute one job file; returns (exit_code, report dict)."""
    started = time.time()
    try:
        job = _load_job(path)
        report = run_job_dict(job)
        code = 0 if report.get("ok") else 1
    except SchemaError as exc:
        report = {"command": "error", "ok": False, "error": str(exc),
                  "kind": "schema"}
        code = 2
    except (ComputeError, TameRecError) as exc:
        report = {"command": "error", "ok": False, "error": str(exc),
                  "kind": "compute"}
        code = 3
    report["version"] = __version__
    if timings:
        report["timing_ms"] = round(1000 * (time.time() - started), 3)
    text = json.dumps(report, sort_keys=True, indent=2, default=str)
    if report_path:
        Path(report_path).write_text(text + "\n")
    else:
        print(text)
    status = "PASS" if code == 0 else "FAIL"
    print(f"[{status}] {path} ({report.get('command')})", file=sys.stderr)
    return code, report


def run_suite(directory, report_path=None, timings=False):
    """Run every job in a directory; aggregate pass/fail."""
    directory = Path(directory)
    if not directory.is_dir():
        raise SchemaError(f"{directory} is not a directory")
    jobs = sorted(directory.glob("*.json"))
    rows = []
    worst = 0
    for jobfile in jobs:
        started = time.time()
        try:
            job = _load_job(jobfile)
            rep = run_job_dict(job)
            code = 0 if rep.get("ok") else 1
        except SchemaError as exc:
            rep = {"error": str(exc), "ok": False}
            code = 2
        except (ComputeError, TameRecError) as exc:
            rep = {"error": str(exc), "ok": False}
            code = 3
        worst = max(worst, code)
        row = {"job": jobfile.name, "command": rep.get("command", "?"),
               "ok": bool(rep.get("ok")), "exit": code}
        if timings:
            row["timing_ms"] = round(1000 * (time.time() - started), 3)
        rows.append(row)
    summary = {"command": "suite", "version": __version__,
               "total": len(rows), "passed": sum(r["ok"] for r in rows),
               "ok": worst == 0, "jobs": rows, "sigma": SIGMA,
               "orientation": ORIENTATION}
    text = json.dumps(summary, sort_keys=True, indent=2, default=str)
    if report_path:
        Path(report_path).write_text(text + "\n")
    else:
        print(text)
    for r in rows:
        mark = "PASS" if r["ok"] else "FAIL"
        print(f"[{mark}] {r['job']:40s} {r['command']}", file=sys.stderr)
    print(f"suite: {summary['passed']}/{summary['total']} passed",
          file=sys.stderr)
    return worst, summary


def shipped_corpus_dir():
    return Path(__file__).parent / "corpus"


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="tamerec",
        description="symbolic-numeric verifiers for tame-symbol "
                    "reciprocity laws and the Chow dilogarithm")
    parser.add_argument("--version", action="store_true",
                        help="print version and sign conventions")
    sub = parser.add_subparsers(dest="subcommand")
    for name in COMMANDS:
        p = sub.add_parser(name)
        if name == "suite":
            p.add_argument("directory", nargs="?", default=None,
                           help="job directory (default: shipped corpus)")
        else:
            p.add_argument("job", help="JSON job file")
        p.add_argument("--report", default=None, help="write report here")
        p.add_argument("--timings", action="store_true",
                       help="include wall-clock timings in the report")
    args = parser.parse_args(argv)
    if args.version:
        print(json.dumps({"version": __version__, "sigma": SIGMA,
                          "orientation": ORIENTATION}, sort_keys=True))
        return 0
    if not args.subcommand:
        parser.print_help()
        return 2
    try:
        if args.subcommand == "suite":
            directory = args.directory or shipped_corpus_dir()
            code, _ = run_suite(directory, args.report, args.timings)
        else:
            job = _load_job(args.job, expect_command=args.subcommand)
            code, _ = run_job(args.job, args.report, args.timings)
        return code
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    except (ComputeError, TameRecError) as exc:
        print(f"compute error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
