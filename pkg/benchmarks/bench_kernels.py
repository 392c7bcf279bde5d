"""Compare the compiled and pure-Python Monte-Carlo kernels.

Both backends are run on the same seeds; the script checks that their
outputs are identical and prints the best-of-``--repeat`` wall time and the
speedup for each kernel.

    python3 benchmarks/bench_kernels.py --scale 20000
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from bbstego import _kernels_py, kernels


def _cases(scale: int):
    return {
        "stf_trials (w=2, H=256)": ("stf_trials", (range(256), 2, scale, 11)),
        "stl_trials (w=1, k=64, l=4)": ("stl_trials", (range(256), 1, 64, 4, scale // 4, 12)),
        "stf_stateless_trials (w=1, l=8)": ("stf_stateless_trials", (range(1024), 1, 8, scale // 8, 13)),
        "uniform_draws (H=1000)": ("uniform_draws", (scale * 4, 1000, 14)),
    }


def _best(fn, args, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t)
    return best, out


def _same(a, b):
    a = a if isinstance(a, tuple) else (a,)
    b = b if isinstance(b, tuple) else (b,)
    return len(a) == len(b) and all(np.array_equal(x, y) for x, y in zip(a, b))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--scale", type=int, default=20_000, help="symbols per kernel call")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if not kernels.compiled_available():
        print("compiled kernels are not built; only the Python backend is available")
        return 1
    compiled = kernels.get_backend("compiled")
    print(f"{'kernel':36s} {'python s':>10s} {'compiled s':>11s} {'speedup':>8s}  identical")
    for label, (name, cargs) in _cases(args.scale).items():
        tp, op = _best(getattr(_kernels_py, name), cargs, args.repeat)
        tc, oc = _best(getattr(compiled, name), cargs, args.repeat)
        print(f"{label:36s} {tp:10.4f} {tc:11.5f} {tp / tc:8.1f}  {_same(op, oc)}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
