#!/usr/bin/env python3
"""Compare the jitted and pure-numpy kernel backends.

The backend is fixed when ``kirchhoffgs.kernels`` is imported, so this
script re-runs itself as a subprocess once per backend (with
``KIRCHHOFFGS_BACKEND`` set) and prints a side-by-side table.  Each
worker times the hot kernels at the baseline problem size (2048-point
grid) plus one full ground-state solve, reporting the best wall time
over ``--repeats`` rounds.

Usage:
    python benchmarks/compare_backends.py [--repeats N]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
from time import perf_counter

BACKENDS = ("numba", "numpy")


def _best_ms(fn, loops: int, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = perf_counter()
        for _ in range(loops):
            fn()
        best = min(best, (perf_counter() - t0) / loops)
    return best * 1e3


def run_worker(repeats: int) -> None:
    import numpy as np

    from kirchhoffgs import (
        HardyPotential,
        Nonlinearity,
        ProblemSpec,
        RadialGrid,
        SolveOptions,
        minimize_on_pohozaev,
    )
    from kirchhoffgs import kernels
    from kirchhoffgs.fiber import project_pohozaev
    from kirchhoffgs.radial import gaussian_field, normalize_to, resample

    kernels.warmup()

    grid = RadialGrid(40.0, 2048)
    spec = ProblemSpec(a=1.0, b=1.0, c=1.0,
                       nl=Nonlinearity(((80.09, 5.0),)),
                       pot=HardyPotential(0.02), grid=grid)
    u = normalize_to(gaussian_field(grid, 1.5, 1.0), spec.c)
    vals, w, dr = u.values, grid.w, grid.dr

    rng = np.random.default_rng(0)
    n = grid.n
    diag = 4.0 + rng.random(n)
    sub = np.ones(n)
    sup = np.ones(n)
    rhs = rng.standard_normal(n)

    timings = {
        "laplacian (n=2048)": _best_ms(
            lambda: kernels.laplacian(vals, dr), 2000, repeats),
        "weighted_dot (n=2048)": _best_ms(
            lambda: kernels.weighted_dot(w, vals, vals), 2000, repeats),
        "tridiag_solve (n=2048)": _best_ms(
            lambda: kernels.tridiag_solve(sub, diag, sup, rhs), 500, repeats),
        "resample t=1.3": _best_ms(
            lambda: resample(u, 1.3), 200, repeats),
        "project_pohozaev": _best_ms(
            lambda: project_pohozaev(spec, u), 20, repeats),
        "full solve (baseline)": _best_ms(
            lambda: minimize_on_pohozaev(spec, SolveOptions()),
            1, min(repeats, 3)),
    }
    print(json.dumps({"backend": kernels.BACKEND, "timings": timings}))


def run_parent(repeats: int) -> int:
    results: dict[str, dict[str, float]] = {}
    for backend in BACKENDS:
        env = dict(os.environ, KIRCHHOFFGS_BACKEND=backend)
        proc = subprocess.run(
            [sys.executable, os.path.abspath(__file__),
             "--worker", "--repeats", str(repeats)],
            env=env, capture_output=True, text=True)
        if proc.returncode != 0:
            print(f"[{backend}] worker failed:\n{proc.stderr.strip()}")
            continue
        payload = json.loads(proc.stdout.strip().splitlines()[-1])
        if payload["backend"] != backend:
            print(f"[{backend}] worker ran on {payload['backend']!r} instead; "
                  "skipping")
            continue
        results[backend] = payload["timings"]

    if not results:
        print("no backend produced timings")
        return 1
    names = list(next(iter(results.values())))
    width = max(len(s) for s in names)
    have_both = all(b in results for b in BACKENDS)

    header = f"{'operation':<{width}}"
    for backend in BACKENDS:
        if backend in results:
            header += f"  {backend + ' (ms)':>12}"
    if have_both:
        header += f"  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name in names:
        row = f"{name:<{width}}"
        for backend in BACKENDS:
            if backend in results:
                row += f"  {results[backend][name]:>12.4f}"
        if have_both:
            ratio = results["numpy"][name] / results["numba"][name]
            row += f"  {ratio:>7.2f}x"
        print(row)
    return 0


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=3,
                    help="timing rounds per operation (best is kept)")
    ap.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args(argv)
    if args.repeats < 1:
        ap.error("--repeats must be at least 1")
    if args.worker:
        run_worker(args.repeats)
        return 0
    return run_parent(args.repeats)


if __name__ == "__main__":
    sys.exit(main())
