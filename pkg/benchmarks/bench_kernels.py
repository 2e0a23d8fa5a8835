#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

The backend is chosen at import time via the SEPLINES_NO_NUMBA environment
variable, so the benchmark re-executes itself in a subprocess per backend
and prints a side-by-side table.

Usage: python3 benchmarks/bench_kernels.py [--n 20000] [--m 2000] [--reps 5]
"""
from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time


def run_worker(n: int, m: int, reps: int) -> dict:
    import numpy as np

    from seplines import _kernels as K

    rng = np.random.default_rng(0)
    A = rng.integers(-(2**20), 2**20, size=m).astype(np.float64)
    B = rng.integers(-(2**20), 2**20, size=m).astype(np.float64)
    C = rng.integers(-(2**40), 2**40, size=m).astype(np.float64)
    X = rng.integers(0, 2**40, size=n).astype(np.float64)
    Y = rng.integers(0, 2**40, size=n).astype(np.float64)

    results = {"backend": K.backend()}
    for name, fn in (
        ("eval_signs", K.eval_signs),
        ("row_hash", K.row_hash),
        ("line_side_counts", K.line_side_counts),
    ):
        fn(A, B, C, X[:16], Y[:16])  # warm up / trigger JIT compilation
        best = min(
            _timed(fn, A, B, C, X, Y) for _ in range(reps)
        )
        results[name] = best
    return results


def _timed(fn, *args) -> float:
    t0 = time.perf_counter()
    fn(*args)
    return time.perf_counter() - t0


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=20_000, help="number of points")
    ap.add_argument("--m", type=int, default=2_000, help="number of lines")
    ap.add_argument("--reps", type=int, default=5, help="repetitions (best-of)")
    ap.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()

    if args.worker:
        print(json.dumps(run_worker(args.n, args.m, args.reps)))
        return 0

    rows = {}
    for flag in ("0", "1"):
        env = dict(os.environ, SEPLINES_NO_NUMBA=flag)
        out = subprocess.run(
            [sys.executable, os.path.abspath(__file__), "--worker",
             "--n", str(args.n), "--m", str(args.m), "--reps", str(args.reps)],
            env=env, capture_output=True, text=True, check=True,
        )
        doc = json.loads(out.stdout)
        rows[doc.pop("backend")] = doc

    if set(rows) == {"numpy"}:
        print("numba unavailable; only the numpy backend was measured")
    print(f"n={args.n} points, m={args.m} lines, best of {args.reps}")
    print(f"{'kernel':<18}" + "".join(f"{b:>12}" for b in rows))
    kernels = next(iter(rows.values())).keys()
    for k in kernels:
        line = f"{k:<18}" + "".join(f"{rows[b][k] * 1e3:>10.2f}ms" for b in rows)
        if len(rows) == 2:
            a, b = (rows[n][k] for n in rows)
            line += f"   x{b / a:.2f}" if a <= b else f"   x{a / b:.2f} (second faster)"
        print(line)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
