"""Benchmark the numba kernels against the pure-numpy fallback.

Covers the hot paths of a resolution run: packed row reduction, kernel
extraction, matrix product, and the differential-image assembly kernel,
plus one end-to-end resolution. Both backends are imported directly, so
the EXTFORGE_NUMBA flag does not matter here.

Run with:  python benchmarks/bench_f2.py
"""

from __future__ import annotations

import time

import numpy as np

from extforge.f2linalg import _numba_backend, _numpy_backend


def timeit(fn, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_kernels(backend, sizes=(256, 1024)):
    rng = np.random.default_rng(7)
    rows = []
    for n in sizes:
        words = (n + 63) >> 6
        mat = rng.integers(0, 1 << 63, size=(n, words), dtype=np.int64).astype(np.uint64)

        rows.append(("rref %dx%d" % (n, n), timeit(lambda: backend.rref(mat.copy(), n))))

        work = mat.copy()
        rank, piv = backend.rref(work, n)
        rows.append(
            ("nullspace %dx%d" % (n, n), timeit(lambda: backend.nullspace_from_rref(work, piv, rank, n)))
        )

        other = rng.integers(0, 1 << 63, size=(n, words), dtype=np.int64).astype(np.uint64)
        rows.append(("matmul %dx%d" % (n, n), timeit(lambda: backend.matmul(mat, other, n, n, words))))

        ech = work[:rank]
        red = mat.copy()
        rows.append(("reduce_against %dx%d" % (n, n), timeit(lambda: backend.reduce_against(red, ech, piv))))

    # differential assembly at the scale of one resolution bidegree
    ngens, ntargets, ncols = 400, 400, 600
    diff = rng.integers(0, 1 << 16, size=(ngens, ntargets), dtype=np.int64).astype(np.uint64)
    table = rng.integers(0, 1 << 63, size=(64, 64), dtype=np.int64).astype(np.uint64)
    row_of = rng.integers(0, 512, size=(ntargets, 64)).astype(np.int32)
    gidx = rng.integers(0, ngens, size=ncols).astype(np.int64)
    cidx = rng.integers(0, 64, size=ncols).astype(np.int64)
    out = np.zeros((ncols, 8), dtype=np.uint64)
    rows.append(
        (
            "image rows %d cols" % ncols,
            timeit(lambda: backend.build_image_rows(gidx, cidx, diff, table, row_of, out)),
        )
    )
    return rows


def bench_resolution():
    """One bounded resolution, timed under each backend via the env flag."""
    import importlib
    import subprocess
    import sys

    code = (
        "import time;"
        "from extforge.fdmodule import stunted_rp, tensor;"
        "from extforge.resolution import minimal_resolution;"
        "a = stunted_rp(-3, 25); b = stunted_rp(3, 25);"
        "t = tensor(a, b, hi=25);"
        "t0 = time.perf_counter();"
        "minimal_resolution(t, 8, 24);"
        "print('%.3f' % (time.perf_counter() - t0))"
    )
    out = {}
    for name, flag in (("numba", "1"), ("numpy", "0")):
        r = subprocess.run(
            [sys.executable, "-c", code],
            capture_output=True,
            text=True,
            env={"EXTFORGE_NUMBA": flag, "PATH": "/usr/bin:/bin:/usr/local/bin"},
        )
        out[name] = float(r.stdout.strip().splitlines()[-1])
    return out


def main():
    print("%-28s %12s %12s %8s" % ("kernel", "numba (s)", "numpy (s)", "speedup"))
    numba_rows = dict(bench_kernels(_numba_backend))
    numpy_rows = dict(bench_kernels(_numpy_backend))
    for name in numba_rows:
        a, b = numba_rows[name], numpy_rows[name]
        print("%-28s %12.5f %12.5f %7.1fx" % (name, a, b, b / a if a else float("inf")))
    res = bench_resolution()
    print(
        "%-28s %12.3f %12.3f %7.1fx"
        % ("smash-model resolution", res["numba"], res["numpy"], res["numpy"] / res["numba"])
    )


if __name__ == "__main__":
    main()
