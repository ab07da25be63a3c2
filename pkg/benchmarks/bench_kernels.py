"""Compare the compiled and pure-Python mode-action kernels.

    python3 benchmarks/bench_kernels.py [--degree 6] [--qmax 16] [--repeat 3]

Each backend starts from an empty memo cache; the best of ``--repeat`` runs
is reported.
"""
import argparse
import random
import time

from padicvoa import _kernels_py as py

try:
    from padicvoa import _ckernels as cy
except ImportError:
    cy = None


def workload_traces(mod, degree, qmax):
    total = 0
    for w in range(degree + 1):
        for J in mod.partitions(w):
            for d in range(qmax + 1):
                total += mod.slice_trace(J, d)
    return total


def workload_products(mod, n=3000, seed=0):
    rng = random.Random(seed)
    acc = 0
    for _ in range(n):
        J = rng.choice(mod.partitions(rng.randint(0, 5)))
        c = rng.choice(mod.partitions(rng.randint(0, 8)))
        t = rng.randint(-4, 6)
        acc += len(mod.mode_act(J, t, c))
    return acc


def timed(mod, fn, *args, repeat=3):
    best, result = float("inf"), None
    for _ in range(repeat):
        mod.clear_cache()
        t0 = time.perf_counter()
        result = fn(mod, *args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--degree", type=int, default=6)
    ap.add_argument("--qmax", type=int, default=16)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    cases = [
        (f"zero-mode traces, |J| <= {args.degree}, q^0..q^{args.qmax}", workload_traces,
         (args.degree, args.qmax)),
        ("3000 random mode products", workload_products, ()),
    ]
    print(f"{'workload':<48} {'python':>9} {'cython':>9} {'speedup':>8}")
    for name, fn, extra in cases:
        tp, rp = timed(py, fn, *extra, repeat=args.repeat)
        if cy is None:
            print(f"{name:<48} {tp:9.3f} {'n/a':>9} {'n/a':>8}")
            continue
        tc, rc = timed(cy, fn, *extra, repeat=args.repeat)
        if rp != rc:
            raise SystemExit(f"backends disagree on {name}: {rp} != {rc}")
        print(f"{name:<48} {tp:9.3f} {tc:9.3f} {tp / tc:7.2f}x")
    if cy is None:
        print("compiled extension not built; only the Python backend was timed")


if __name__ == "__main__":
    main()
