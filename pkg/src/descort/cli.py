"""Command-line front end.

Subcommands
-----------
transform          sample a deformed density into plot-ready CSV/JSON
measure            entropies, moments, complexity and cumulants as JSON
sweep              complexity table over a list of deformation strengths
reproduce-example  recompute the three-step staircase benchmark and check
                   it against its published reference values

Exit codes: 0 success, 1 reproduction mismatch, 2 bad density spec,
3 transform failure, 4 divergent moment.  ``DESCORT_RELTOL`` overrides the
quadrature relative tolerance.  Numbers are printed with 9 significant
digits and all grids are deterministic, so identical inputs give
byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from .density import (DEFAULT_CONFIG, PiecewiseConstant, QuadratureConfig,
                      load_density, quantile)
from .errors import (DivergentMoment, NonNormalized, SchemaError,
                     TransformFailed, Unsupported)
from .measures import (critical_q, entropic_cumulants, lmc_renyi,
                       measure_report, renyi_entropy, shannon_entropy)
from .transforms import transform

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_SCHEMA = 2
EXIT_TRANSFORM = 3
EXIT_DIVERGENT = 4

_FMT = "%.9g"


def _fmt(x: float) -> str:
    if x == math.inf:
        return "+inf"
    if x == -math.inf:
        return "-inf"
    return _FMT % x


def _config() -> QuadratureConfig:
    rel = os.environ.get("DESCORT_RELTOL")
    if rel:
        return QuadratureConfig(rel_tol=float(rel))
    return DEFAULT_CONFIG


def _load(path: str):
    try:
        return load_density(path)
    except (SchemaError, NonNormalized, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_SCHEMA)


def _curve_window(td, cfg):
    """Sampling window: the support, shrunk to central quantiles when the
    support is unbounded."""
    lo, hi = td.support.lower, td.support.upper
    if not math.isfinite(hi):
        hi = quantile(td, 1.0 - 1e-6, cfg)
    if not math.isfinite(lo):
        lo = quantile(td, 1e-6, cfg)
    return lo, hi


def cmd_transform(args) -> int:
    if args.samples < 2:
        print("error: --samples must be at least 2", file=sys.stderr)
        return EXIT_SCHEMA
    d = _load(args.density)
    cfg = _config()
    try:
        td = transform(d, args.alpha, cfg, anchor=args.anchor)
    except TransformFailed as exc:
        print(f"error: {exc} (interval {exc.interval})", file=sys.stderr)
        return EXIT_TRANSFORM
    lo, hi = _curve_window(td, cfg)
    ys = np.linspace(lo, hi, args.samples)
    rho = td.pdf(ys)
    rows = [(args.alpha, float(y), float(r)) for y, r in zip(ys, rho)]
    meta = {"source_kind": d.to_dict().get("kind"),
            "anchor": td.ymap.x0, "alpha": args.alpha}
    if args.format == "csv":
        lines = ["alpha,y,rho"]
        lines += [",".join(_fmt(v) for v in row) for row in rows]
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps({"meta": meta,
                           "rows": [[float(_FMT % v) for v in r]
                                    for r in rows]}, indent=None,
                          separators=(",", ":")) + "\n"
    _write(args.out, text)
    return EXIT_OK


def cmd_measure(args) -> int:
    d = _load(args.density)
    cfg = _config()
    if not args.p < args.q:
        print("error: need p < q", file=sys.stderr)
        return EXIT_SCHEMA
    try:
        rep = measure_report(d, args.q, cfg)
        out = rep.to_dict()
        out["R_p"] = _enc(renyi_entropy(d, args.p, cfg))
        out["p"] = args.p
        out["C_pq"] = lmc_renyi(d, args.p, args.q, cfg)
        cum = entropic_cumulants(d, cfg)
        out["K"] = list(cum.values)
        try:
            out["q_c"] = _enc(critical_q(d))
        except Unsupported:
            pass
    except DivergentMoment as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGENT
    print(json.dumps(out, sort_keys=True))
    return EXIT_OK


def _enc(v: float):
    if v == math.inf:
        return "+inf"
    if v == -math.inf:
        return "-inf"
    return v


def cmd_sweep(args) -> int:
    d = _load(args.density)
    cfg = _config()
    if not args.p < args.q:
        print("error: need p < q", file=sys.stderr)
        return EXIT_SCHEMA
    try:
        alphas = sorted(float(a) for a in args.alphas.split(","))
    except ValueError:
        print("error: --alphas must be a comma-separated list of reals",
              file=sys.stderr)
        return EXIT_SCHEMA
    lines = ["alpha,S,R_p,R_q,C_pq,K2"]
    try:
        for a in alphas:
            td = transform(d, a, cfg)
            s = shannon_entropy(td, cfg)
            rp = renyi_entropy(td, args.p, cfg)
            rq = renyi_entropy(td, args.q, cfg)
            c = lmc_renyi(td, args.p, args.q, cfg)
            k2 = entropic_cumulants(td, cfg)[2]
            lines.append(",".join(_fmt(v) for v in (a, s, rp, rq, c, k2)))
    except DivergentMoment as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGENT
    except TransformFailed as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TRANSFORM
    _write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


# Reference values for the three-step staircase benchmark (heights 3/2, 1,
# 1/2 on thirds of the unit interval).  The complexity column is quoted to
# the precision of the original report; geometry entries quote the step
# widths/heights of the alpha = 10 image.
STAIRCASE_STEPS = ((1.5, 1.0 / 3.0), (1.0, 1.0 / 3.0), (0.5, 1.0 / 3.0))
REFERENCE_REDUCTION = {1.0: 1.06923, 0.5: 1.01818, 0.25: 1.00468,
                       0.1: 1.00076}
REFERENCE_INCREASE = {2.0: 1.25988, 4.0: 2.02809, 10.0: 12.1843}
REFERENCE_INCREASE_100 = (2e13, 4e13)  # quoted as 3e13, one significant digit
REFERENCE_GEOMETRY_10 = {"w1": 0.008, "h1": 57.0, "w2": 0.03, "h2": 1.0,
                         "w3": 170.0, "h3": 0.001}

# The quoted w2 conflicts with probability conservation: the middle step has
# height 1, so its width is invariant (1/3) under every deformation.  The
# row is reported but excluded from the pass/fail verdict.
KNOWN_DISCREPANT_ROWS = {"geometry alpha=10 w2", "increase alpha=10"}


def _reproduce_rows(cfg):
    d = PiecewiseConstant(STAIRCASE_STEPS)
    rows = []
    c0 = lmc_renyi(transform(d, 0.0, cfg), 1.0, 2.0, cfg)
    rows.append(("reduction alpha=0", c0, 1.0, abs(c0 - 1.0) <= 1e-12,
                 "abs 1e-12"))
    for a, ref in sorted(REFERENCE_REDUCTION.items()):
        c = lmc_renyi(transform(d, a, cfg), 1.0, 2.0, cfg)
        rows.append((f"reduction alpha={a:g}", c, ref,
                     abs(c - ref) <= 5e-5, "abs 5e-5"))
    for a, ref in sorted(REFERENCE_INCREASE.items()):
        c = lmc_renyi(transform(d, a, cfg), 1.0, 2.0, cfg)
        rows.append((f"increase alpha={a:g}", c, ref,
                     abs(c - ref) / ref <= 5e-4, "rel 5e-4"))
    c100 = lmc_renyi(transform(d, 100.0, cfg), 1.0, 2.0, cfg)
    lo, hi = REFERENCE_INCREASE_100
    rows.append(("increase alpha=100", c100, 3e13, lo <= c100 <= hi,
                 "within [2e13, 4e13]"))
    t10 = transform(d, 10.0, cfg).base
    geom = {"w1": t10.widths[0], "h1": t10.heights[0],
            "w2": t10.widths[1], "h2": t10.heights[1],
            "w3": t10.widths[2], "h3": t10.heights[2]}
    for key, ref in REFERENCE_GEOMETRY_10.items():
        val = float(geom[key])
        ok = abs(val - ref) / ref <= 0.15
        rows.append((f"geometry alpha=10 {key}", val, ref, ok, "rel 15%"))
    return rows


def cmd_reproduce_example(args) -> int:
    cfg = _config()
    rows = _reproduce_rows(cfg)
    lines = ["row,computed,reference,tolerance,status"]
    failed = False
    for name, val, ref, ok, tol in rows:
        if name in KNOWN_DISCREPANT_ROWS and not ok:
            status = "MISMATCH-EXPECTED"
        else:
            status = "PASS" if ok else "FAIL"
            failed = failed or not ok
        lines.append(f"{name},{_fmt(val)},{_fmt(ref)},{tol},{status}")
    lines.append("# MISMATCH-EXPECTED rows quote reference values that are "
                 "inconsistent with probability conservation or with the "
                 "exact closed form; see README.")
    text = "\n".join(lines) + "\n"
    if args.out:
        _write(args.out, text)
    print(text, end="")
    return EXIT_MISMATCH if failed else EXIT_OK


def _write(path, text: str):
    if path and path != "-":
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        print(text, end="")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="descort",
        description="Differential-escort deformations of univariate "
                    "densities and their information measures.")
    sub = ap.add_subparsers(dest="command", required=True)

    t = sub.add_parser("transform", help="sample a deformed density")
    t.add_argument("--density", required=True, help="density JSON file")
    t.add_argument("--alpha", type=float, required=True)
    t.add_argument("--samples", type=int, default=512)
    t.add_argument("--anchor", type=float, default=None)
    t.add_argument("--format", choices=("csv", "json"), default="csv")
    t.add_argument("--out", default="-")
    t.set_defaults(func=cmd_transform)

    m = sub.add_parser("measure", help="entropies and complexity as JSON")
    m.add_argument("--density", required=True)
    m.add_argument("--p", type=float, required=True)
    m.add_argument("--q", type=float, required=True)
    m.set_defaults(func=cmd_measure)

    s = sub.add_parser("sweep", help="complexity across deformations")
    s.add_argument("--density", required=True)
    s.add_argument("--alphas", required=True,
                   help="comma-separated deformation strengths")
    s.add_argument("--p", type=float, required=True)
    s.add_argument("--q", type=float, required=True)
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_sweep)

    r = sub.add_parser("reproduce-example",
                       help="check the staircase benchmark against its "
                            "reference values")
    r.add_argument("--out", default=None)
    r.set_defaults(func=cmd_reproduce_example)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SystemExit as exc:
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
