"""Time the compiled kernels against the numpy fallback on representative inputs.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Prints one line per kernel with the best wall time of each backend and the
speedup, after checking both backends return the same answer.
"""
import argparse
import time

import numpy as np

from ldlc._kernels import backends
from ldlc.polyspace import product_table, space


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def cases(rng):
    m2 = rng.integers(0, 2, (96, 128), dtype=np.uint8)
    m3 = rng.integers(0, 3, (60, 80), dtype=np.uint8)
    rm = space(5, 2, 2).generator_tables  # dim 16, 32 positions: 2^16 coset words
    rm3 = space(3, 2, 3).generator_tables  # dim 10, 27 positions: 3^10 words
    sd, out = space(9, 3, 3), space(9, 6, 3)
    idx = product_table(sd, sd, out)
    a, b = rng.integers(0, 3, sd.dim, dtype=np.uint8), rng.integers(0, 3, sd.dim, dtype=np.uint8)
    stack = rng.integers(0, 3, (2000, 6, 6), dtype=np.uint8)
    off2 = rng.integers(0, 2, 32, dtype=np.uint8)
    off3 = rng.integers(0, 3, 27, dtype=np.uint8)
    return {
        "rref F2 96x128": lambda k: k.rref_inplace(m2.copy(), 2),
        "rref F3 60x80": lambda k: k.rref_inplace(m3.copy(), 3),
        "min_weight_coset F2 dim 16": lambda k: k.min_weight_coset(rm, off2, 2)[0],
        "min_weight_coset F3 dim 10": lambda k: k.min_weight_coset(rm3, off3, 3)[0],
        "poly_mul F3 P^9_3 x P^9_3": lambda k: k.poly_mul(a, b, idx, 3, out.dim),
        "rank_batch F3 2000 x 6x6": lambda k: k.rank_batch(stack, 3),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    kinds = backends()
    if "cython" not in kinds:
        print("compiled extension not built; run: python3 setup.py build_ext --inplace")
    rng = np.random.default_rng(0)
    print(f"{'kernel':32s} {'python':>10s} {'cython':>10s} {'speedup':>8s}")
    for name, fn in cases(rng).items():
        tp, op = _best(lambda: fn(kinds["python"]), args.repeat)
        if "cython" in kinds:
            tc, oc = _best(lambda: fn(kinds["cython"]), args.repeat)
            same = np.array_equal(np.asarray(op, dtype=object), np.asarray(oc, dtype=object))
            flag = "" if same else "  MISMATCH"
            print(f"{name:32s} {tp:10.4f} {tc:10.4f} {tp / tc:7.1f}x{flag}")
        else:
            print(f"{name:32s} {tp:10.4f} {'-':>10s} {'-':>8s}")


if __name__ == "__main__":
    main()
