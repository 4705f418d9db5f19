#!/usr/bin/env python3
"""Benchmark the compiled objective kernels against the NumPy fallback.

Times the three measure objectives on representative sector/subset pairs
and a short end-to-end pattern search.  Run after an editable install:

    python3 benchmarks/bench_kernels.py
"""

import time

import numpy as np

from symorb import kernels
from symorb.grouptheory import characters
from symorb.kernels import _reference as ref
from symorb.optimize import pattern_search
from symorb.perm import Subset, preset
from symorb.quantum import sector_basis


def timeit(fn, min_seconds=0.4):
    n = 1
    while True:
        t0 = time.perf_counter()
        for _ in range(n):
            fn()
        dt = time.perf_counter() - t0
        if dt >= min_seconds:
            return dt / n
        n = max(n + 1, int(n * min_seconds / max(dt, 1e-9)))


def objective_rows():
    rows = []
    cases = [
        ("C8 trivial, x={1,2}", "C8", [1, 2]),
        ("O8 trivial, x={1,3}", "O8", [1, 3]),
        ("I12 trivial, x={1,2}", "I12", [1, 2]),
    ]
    rng = np.random.default_rng(0)
    for label, name, x in cases:
        G = preset(name)
        basis = sector_basis(G, 2, characters(G)[0])
        tables = kernels.build_measure_tables(basis, Subset(x))
        pt = kernels.partial_transpose_map(Subset(x), Subset([x[0]]), 2)
        c = rng.standard_normal(basis.dim) + 1j * rng.standard_normal(basis.dim)
        for measure, compiled_fn, ref_fn in [
            (
                "concurrence",
                (lambda: kernels._core.concurrence_signed(
                    tables.slot_coeff, tables.slot_amp, tables.traced_dim, c))
                if kernels.compiled_available() else None,
                lambda: ref.concurrence_signed(tables, c),
            ),
            (
                "negativity",
                (lambda: kernels._core.negativity_signed(
                    tables.slot_coeff, tables.slot_amp, tables.traced_dim,
                    tables.kept_dim, pt, c))
                if kernels.compiled_available() else None,
                lambda: ref.negativity_signed(tables, pt, c),
            ),
            (
                "entropy",
                (lambda: kernels._core.entropy_value(
                    tables.slot_coeff, tables.slot_amp, tables.traced_dim,
                    tables.kept_dim, c))
                if kernels.compiled_available() else None,
                lambda: ref.entropy_value(tables, c),
            ),
        ]:
            t_ref = timeit(ref_fn)
            t_compiled = timeit(compiled_fn) if compiled_fn else float("nan")
            rows.append((label, measure, basis.dim, t_compiled, t_ref))
    return rows


def search_row():
    """End-to-end pattern search on the C8 trivial sector, both backends."""
    G = preset("C8")
    basis = sector_basis(G, 2, characters(G)[0])
    tables = kernels.build_measure_tables(basis, Subset([1, 2]))
    rng = np.random.default_rng(1)
    theta0 = rng.standard_normal(2 * basis.dim)
    theta0 /= np.linalg.norm(theta0)

    def run(fn):
        def objective(theta):
            c = theta[: basis.dim] + 1j * theta[basis.dim :]
            return fn(c)

        t0 = time.perf_counter()
        best, _ = pattern_search(objective, theta0, 0.3, 1e-6, 200)
        return best, time.perf_counter() - t0

    results = {}
    results["python"] = run(lambda c: ref.concurrence_signed(tables, c))
    if kernels.compiled_available():
        results["compiled"] = run(
            lambda c: kernels._core.concurrence_signed(
                tables.slot_coeff, tables.slot_amp, tables.traced_dim, c
            )
        )
    return results


def main():
    print(f"active backend: {kernels.BACKEND}")
    if not kernels.compiled_available():
        print("compiled extension not built; timing the fallback only\n")
    print(f"{'case':28s} {'measure':12s} {'dim':>4s} {'compiled':>10s} {'python':>10s} {'speedup':>8s}")
    for label, measure, dim, t_c, t_r in objective_rows():
        speed = f"{t_r / t_c:7.1f}x" if t_c == t_c else "     n/a"
        tc = f"{t_c * 1e6:8.1f}us" if t_c == t_c else "     n/a"
        print(f"{label:28s} {measure:12s} {dim:>4d} {tc:>10s} {t_r * 1e6:8.1f}us {speed:>8s}")
    print("\npattern search to step 1e-6 (C8 trivial sector, concurrence):")
    for backend, (best, dt) in search_row().items():
        print(f"  {backend:9s} best={best:.6f}  {dt:.2f}s")


if __name__ == "__main__":
    main()
