#!/usr/bin/env python3
"""Benchmark the compiled eigensolver kernel against its pure-python twin.

The symmetric eigendecomposition is the hot inner loop of every interior-point
iteration (scaling updates and step-length checks), so this is the number that
decides end-to-end solve times.  Run after `pip install -e .`:

    python3 benchmarks/bench_eig.py            # kernel micro-benchmark
    python3 benchmarks/bench_eig.py --solve    # end-to-end SDP solve per backend
"""

import argparse
import time

import numpy as np


def _time(fn, min_seconds=0.2):
    fn()  # warm up
    n = 0
    t0 = time.perf_counter()
    while True:
        fn()
        n += 1
        dt = time.perf_counter() - t0
        if dt >= min_seconds:
            return dt / n


def bench_kernels(sizes):
    from dmabeam._core import tridiag_ql_py

    try:
        from dmabeam._core import tridiag_ql as compiled
    except ImportError:
        compiled = None
        print("compiled kernel unavailable; showing pure-python timings only")

    rng = np.random.default_rng(0)
    header = f"{'n':>5} {'python (ms)':>12}"
    if compiled is not None:
        header += f" {'compiled (ms)':>14} {'speedup':>8}"
    print(header)
    for n in sizes:
        a = rng.standard_normal((n, n))
        a = a + a.T
        t_py = _time(lambda: tridiag_ql_py.symmetric_eig(a))
        line = f"{n:>5} {1e3 * t_py:>12.3f}"
        if compiled is not None:
            t_c = _time(lambda: compiled.symmetric_eig(a))
            line += f" {1e3 * t_c:>14.3f} {t_py / t_c:>8.1f}x"
        print(line)


def bench_solve():
    """Same multi-user SDP solved with each backend (monkeypatched selection)."""
    import dmabeam._core as core
    from dmabeam import sdp
    from dmabeam._core import tridiag_ql_py

    try:
        from dmabeam._core import tridiag_ql as compiled
    except ImportError:
        compiled = None

    rng = np.random.default_rng(1)
    k, n = 3, 16
    channels = [rng.standard_normal(n) + 1j * rng.standard_normal(n) for _ in range(k)]
    outer = [np.outer(c, c.conj()) for c in channels]
    cons = []
    for i in range(k):
        terms = [(i, outer[i])] + [(m, -2.0 * outer[i]) for m in range(k) if m != i]
        cons.append(sdp.TraceConstraint(terms=terms, rhs=1.0))
    prob = sdp.SdpProblem(block_dims=[n] * k, objective=[np.eye(n)] * k, constraints=cons)

    backends = [("python", tridiag_ql_py.symmetric_eig)]
    if compiled is not None:
        backends.insert(0, ("compiled", compiled.symmetric_eig))
    saved = core.symmetric_eig
    try:
        results = {}
        for name, fn in backends:
            core.symmetric_eig = fn
            sol = sdp.solve(prob)
            t = _time(lambda: sdp.solve(prob), min_seconds=0.5)
            results[name] = (t, sol.objective_value, sol.iterations)
            print(
                f"{name:>9}: {1e3 * t:8.1f} ms/solve  "
                f"objective {sol.objective_value:.9e}  iterations {sol.iterations}"
            )
    finally:
        core.symmetric_eig = saved
    if len(results) == 2:
        ratio = results["python"][0] / results["compiled"][0]
        agree = abs(results["python"][1] - results["compiled"][1]) / results["compiled"][1]
        print(f"speedup {ratio:.1f}x, objective agreement {agree:.2e} relative")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="16,32,64,96,128")
    parser.add_argument("--solve", action="store_true", help="end-to-end SDP benchmark")
    args = parser.parse_args()
    if args.solve:
        bench_solve()
    else:
        bench_kernels([int(s) for s in args.sizes.split(",")])


if __name__ == "__main__":
    main()
