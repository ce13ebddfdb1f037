"""Compiled vs numpy kernels, timed through the public MIC and scagnostics calls.

    python benchmarks/bench_kernels.py [--sizes 100,400,1000] [--repeat 3]

The backends are swapped in-process by rebinding the kernel functions that
numeric.py and scagnostics.py look up at call time.
"""

import argparse
import statistics
import time
from contextlib import contextmanager

import numpy as np

from pairscore import _kernels, numeric, scagnostics
from pairscore._kernels import _py

NAMES = ("equipartition", "clumps", "optimize_x_axis", "prim_mst")

try:
    from pairscore._kernels import _ckernels
except ImportError:  # extension not built
    _ckernels = None


@contextmanager
def backend(mod):
    saved = {n: getattr(_kernels, n) for n in NAMES}
    for n in NAMES:
        setattr(_kernels, n, getattr(mod, n))
    try:
        yield
    finally:
        for n, f in saved.items():
            setattr(_kernels, n, f)


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times), statistics.median(times)


def workloads(n, rng):
    x = rng.normal(size=n)
    y = np.sin(3 * x) + rng.normal(scale=0.3, size=n)
    # scagnostics bins above 250 points, so feed the MST a raw cloud of size n too
    pts = rng.uniform(size=(n, 2))
    return {
        "mic": lambda: numeric.mic(x, y),
        "scagnostics": lambda: scagnostics.scagnostics(x, y),
        "prim_mst": lambda: _kernels.prim_mst(pts),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="100,400,1000")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    backends = [("python", _py)] + ([("cython", _ckernels)] if _ckernels else [])
    if _ckernels is None:
        print("compiled extension not available; timing the numpy fallback only")
    print(f"{'workload':<12} {'n':>6} " + " ".join(f"{b:>12}" for b, _ in backends)
          + ("  speedup" if len(backends) == 2 else ""))
    for n in (int(s) for s in args.sizes.split(",")):
        rng = np.random.default_rng(args.seed)
        for name, fn in workloads(n, rng).items():
            cells = []
            for _, mod in backends:
                with backend(mod):
                    fn()  # warm-up
                    cells.append(best_of(fn, args.repeat)[0])
            line = f"{name:<12} {n:>6} " + " ".join(f"{t * 1e3:>10.2f}ms" for t in cells)
            if len(cells) == 2:
                line += f"  {cells[0] / cells[1]:>6.1f}x"
            print(line)


if __name__ == "__main__":
    main()
