"""Command-line entry point: ``g2solv analyze | scan | extremize | flow | catalog list``.

Exit codes: 0 success, 2 invalid input, 3 internal inconsistency
(two independent computations of the same quantity disagree).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from .errors import InconsistencyError, InputError
from .families import (
    FAMILIES,
    extremize_F,
    family,
    laplacian_flow,
    list_families,
    scan,
    write_flow_csv,
    write_scan_csv,
)
from .g2core import DEFAULT_TOL, G2Structure
from .liealg import AlmostAbelianSpec, mu_from_matrix
from .report import SCHEMA_VERSION, analysis_report, load_structure, to_jsonable

EXIT_OK, EXIT_INPUT, EXIT_INCONSISTENT = 0, 2, 3


def _kv_list(text):
    out = {}
    for part in filter(None, text.split(",")):
        if "=" not in part:
            raise InputError(f"expected k=v, got {part!r}")
        k, v = part.split("=", 1)
        try:
            out[k.strip()] = float(v)
        except ValueError:
            raise InputError(f"parameter {k.strip()!r} needs a number, got {v!r}") from None
    return out


def _params(values):
    out = {}
    for text in values or []:
        out.update(_kv_list(text))
    return out


def parse_grid(text):
    """``k=a:b:step`` -> (k, values), both endpoints included when reached."""
    if "=" not in text:
        raise InputError(f"grid must look like k=a:b:step, got {text!r}")
    k, rng = text.split("=", 1)
    try:
        a, b, step = (float(x) for x in rng.split(":"))
    except ValueError:
        raise InputError(f"grid must look like k=a:b:step, got {text!r}") from None
    if step <= 0 or b < a:
        raise InputError("grid needs step > 0 and a <= b")
    n = int(np.floor((b - a) / step + 1e-9)) + 1
    return k.strip(), a + step * np.arange(n)


def _build(args):
    if args.family:
        obj = family(args.family)(**_params(args.param))
        return obj, {"family": args.family, "params": _params(args.param)}
    if getattr(args, "input", None):
        return load_structure(args.input), {"path": args.input}
    raise InputError("give an input JSON file or --family")


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout
    return open(path, "w", encoding="utf-8", newline="")


def _emit_json(doc, path):
    text = json.dumps(to_jsonable(doc), indent=2, sort_keys=True, allow_nan=False)
    fh = _open_out(path)
    try:
        fh.write(text + "\n")
    finally:
        if fh is not sys.stdout:
            fh.close()


def _emit_csv(writer, obj, path):
    buf = io.StringIO(newline="")
    writer(obj, buf)
    fh = _open_out(path)
    try:
        fh.write(buf.getvalue())
    finally:
        if fh is not sys.stdout:
            fh.close()


def _note(msg):
    print(msg, file=sys.stderr)


# ---------------------------------------------------------------------------

def cmd_analyze(args):
    obj, source = _build(args)
    rep = analysis_report(obj, tol=args.tol, seed=args.seed, source=source)
    _emit_json(rep, args.output)
    return EXIT_OK


def cmd_scan(args):
    spec = family(args.family)
    grid = dict(parse_grid(g) for g in args.grid or [])
    if not grid and spec.params:
        raise InputError("scan needs at least one --grid k=a:b:step")
    res = scan(spec, grid, _params(args.param), classes=not args.no_classes,
               workers=args.workers)
    if args.format == "json":
        rows = [{"params": r.params, "F": r.F, "scal": r.scal, "tau_norm2": r.tau_norm2,
                 "class_flags": list(r.class_flags),
                 "lap_soliton_residual": r.lap_soliton_residual,
                 "lap_soliton_c": r.lap_soliton_c, "erp_residual": r.erp_residual,
                 "error": r.error} for r in res.rows]
        _emit_json({"schema": SCHEMA_VERSION, "family": res.family, "tol": args.tol,
                    "F_inf": res.F_inf, "F_sup": res.F_sup, "rows": rows}, args.output)
    else:
        _emit_csv(write_scan_csv, res, args.output)
    failed = sum(r.error is not None for r in res.rows)
    _note(f"scan {res.family}: {len(res)} rows, {failed} failed; "
          f"n_hat = {res.F_inf}, N_hat = {res.F_sup} (grid estimates)")
    return EXIT_INPUT if res.rows and failed == len(res.rows) else EXIT_OK


def _write_trace(res, fh):
    w = csv.writer(fh)
    w.writerow(["iteration", "F"])
    for i, f in enumerate(res.trace):
        w.writerow([i, format(f, ".17g")])


def cmd_extremize(args):
    obj, _ = _build(args)
    if not isinstance(obj, AlmostAbelianSpec):
        raise InputError("extremize works on almost-abelian structures")
    res = extremize_F(obj, args.dir, grad_tol=args.grad_tol, max_iter=args.max_iter)
    if args.format == "json":
        _emit_json({"schema": SCHEMA_VERSION, "direction": args.dir, "F": res.F,
                    "F_pipeline": res.F_pipeline, "grad_norm": res.grad_norm,
                    "iterations": res.iterations, "converged": res.converged,
                    "degenerates": res.degenerates, "notes": res.notes,
                    "A": [[complex(v) for v in r] for r in res.A], "trace": res.trace},
                   args.output)
    else:
        _emit_csv(_write_trace, res, args.output)
    _note(f"extremize {args.dir}: endpoint F* = {res.F!r} (pipeline {res.F_pipeline!r}), "
          f"|grad| = {res.grad_norm:.3e}, converged = {res.converged}, "
          f"degenerates = {res.degenerates}")
    return EXIT_OK


def cmd_flow(args):
    obj, _ = _build(args)
    mu = mu_from_matrix(obj) if isinstance(obj, AlmostAbelianSpec) else obj
    res = laplacian_flow(G2Structure(mu), args.t_end, args.dt)
    if args.format == "json":
        _emit_json({"schema": SCHEMA_VERSION, "t_end": args.t_end, "dt": args.dt,
                    "monotonicity": res.monotonicity, "truncated": res.truncated,
                    "aborted": res.aborted, "message": res.message,
                    "samples": [{"t": s.t, "F": s.F, "tau_norm2": s.tau_norm2, "dt": s.dt}
                                for s in res.samples]}, args.output)
    else:
        _emit_csv(write_flow_csv, res, args.output)
    _note(f"flow: {len(res)} samples, F {res.monotonicity}"
          + (f"; truncated: {res.message}" if res.truncated else ""))
    return EXIT_OK


def cmd_catalog(args):
    for name in list_families():
        spec = FAMILIES[name]
        ps = ", ".join(p.name for p in spec.params) or "-"
        print(f"{name:15s} ({ps})  {spec.doc}")
    return EXIT_OK


# ---------------------------------------------------------------------------

def _common(p, family_required=False):
    p.add_argument("--family", required=family_required, help="catalog family name")
    p.add_argument("--param", action="append", metavar="k=v[,k=v]",
                   help="family parameters (repeatable)")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL,
                   help="tolerance on |mu| = 1-normalized input (default 1e-9)")
    p.add_argument("--seed", type=int, default=0, help="seed for sampled heuristics")
    p.add_argument("-o", "--output", help="output path (default stdout)")


def build_parser():
    ap = argparse.ArgumentParser(prog="g2solv", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="full JSON report for one structure")
    p.add_argument("input", nargs="?", help="JSON structure file")
    _common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("scan", help="evaluate a family on a grid")
    _common(p, True)
    p.add_argument("--grid", action="append", metavar="k=a:b:step")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--no-classes", action="store_true", help="skip class flags (faster)")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("extremize", help="gradient flow of F along the SL(3, C) orbit")
    p.add_argument("input", nargs="?", help="JSON structure file (almost-abelian)")
    _common(p)
    p.add_argument("--dir", choices=("max", "min"), default="max")
    p.add_argument("--grad-tol", type=float, default=1e-8)
    p.add_argument("--max-iter", type=int, default=10_000)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_extremize)

    p = sub.add_parser("flow", help="Laplacian flow of the 3-form")
    p.add_argument("input", nargs="?", help="JSON structure file")
    _common(p)
    p.add_argument("--t-end", type=float, default=0.5)
    p.add_argument("--dt", type=float, default=0.005)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_flow)

    p = sub.add_parser("catalog", help="catalog operations")
    p.add_argument("action", choices=("list",))
    p.set_defaults(func=cmd_catalog)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InconsistencyError as exc:
        print(f"error: internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
