#!/usr/bin/env python3
"""Benchmark the compiled kernels against the NumPy fallback.

Runs the three hot workloads (adaptive moment quadrature, cumulative-map
construction + inversion, and a full deform-measure-fit pipeline) on each
available backend and prints a timing table.

    python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import math
import time

import numpy as np

import descort as ds
import descort._kernels as KSel
from descort._kernels import _pykernels

try:
    from descort._kernels import _ckernels
except ImportError:
    _ckernels = None

KERNEL_NAMES = ("eval_density", "integrate_power", "segment_integrals",
                "forward_cumulative", "invert_cumulative")


def use_backend(mod):
    for name in KERNEL_NAMES:
        setattr(KSel, name, getattr(mod, name))


def bench_moments():
    d = ds.QExponential(1.5)
    desc = d.descriptor()
    total = 0.0
    for s in (0.8, 1.3, 2.0, 3.0):
        for k in (0, 1, 2):
            val, _, _, _ = KSel.integrate_power(
                desc, s, k, 0.0, math.inf, 1e-10, 1e-12, 2000, ())
            total += val
    return total


def bench_map_inversion():
    d = ds.PowerLawTail(3.0, 1.0)
    desc = d.descriptor()
    nodes = np.concatenate(([0.0], np.geomspace(1e-4, 1e6, 4096)))
    vals, _ = KSel.segment_integrals(desc, -1.0, nodes)
    cum = np.concatenate(([0.0], np.cumsum(vals)))
    ys = np.geomspace(cum[1], cum[-1] * 0.999, 3000)
    xs = KSel.invert_cumulative(desc, -1.0, nodes, cum, ys, 1e-10, 100)
    return float(xs.sum())


def bench_pipeline():
    d = ds.unit_tail_power_law(3.0)
    td = ds.transform(d, 2.0)
    s = ds.shannon_entropy(td)
    w = ds.entropic_moment(td, 2.0)
    fit = ds.estimate_tail_exponent(td)
    return s + w + fit.exponent_estimate


WORKLOADS = (("adaptive moment quadrature", bench_moments),
             ("map build + 3000 inversions", bench_map_inversion),
             ("deform + measure + tail fit", bench_pipeline))


def run(repeat):
    backends = [("python", _pykernels)]
    if _ckernels is not None:
        backends.append(("c", _ckernels))
    results = {}
    for bname, mod in backends:
        use_backend(mod)
        for wname, fn in WORKLOADS:
            fn()  # warm up (map tables, import costs)
            best = math.inf
            for _ in range(repeat):
                t0 = time.perf_counter()
                fn()
                best = min(best, time.perf_counter() - t0)
            results[(wname, bname)] = best
    use_backend(_ckernels if _ckernels is not None else _pykernels)

    width = max(len(w) for w, _ in WORKLOADS)
    header = f"{'workload':<{width}}  {'python':>10}"
    if _ckernels is not None:
        header += f"  {'c':>10}  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for wname, _ in WORKLOADS:
        line = f"{wname:<{width}}  {results[(wname, 'python')] * 1e3:9.2f}ms"
        if _ckernels is not None:
            c = results[(wname, 'c')]
            line += (f"  {c * 1e3:9.2f}ms"
                     f"  {results[(wname, 'python')] / c:7.1f}x")
        print(line)
    if _ckernels is None:
        print("\ncompiled backend not built; showing fallback only")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    run(ap.parse_args().repeat)
