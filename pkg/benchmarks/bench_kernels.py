"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--threads 1]

Each case also checks that the two backends return identical arrays.
"""
import argparse
import time

import numpy as np

from cubelab._kernels import backends


def cases(rng):
    for k, N in ((2, 512), (3, 64), (3, 128), (4, 24)):
        vals = rng.uniform(-1, 1, ((1 << k) - 1, k * (N - 1) + 1))
        yield f"cube_row_sums k={k} N={N}", "cube_row_sums", (vals, k, N)
    for k, p in ((2, 64), (3, 32), (4, 12)):
        yield f"box_row_sums k={k} p={p}", "box_row_sums", (rng.uniform(-1, 1, p), k)
    for N in (256, 2048):
        b = rng.uniform(-1, 1, N)
        c = rng.uniform(-1, 1, 2 * N - 1)
        yield f"correlation_direct N={N}", "correlation_direct", (b, c, N)


def best_of(fn, args, repeat, threads):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn(*args, nthreads=threads)
        best = min(best, time.perf_counter() - t)
    return best, np.asarray(out)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    mods = backends()
    if "cython" not in mods:
        print("compiled backend not built; timing the fallback only")
    names = sorted(mods)
    print(f"{'case':32s}" + "".join(f"{n:>12s}" for n in names) + ("   speedup  identical" if len(names) > 1 else ""))
    for label, kernel, a in cases(np.random.default_rng(args.seed)):
        times, outs = {}, {}
        for n in names:
            times[n], outs[n] = best_of(getattr(mods[n], kernel), a, args.repeat, args.threads)
        line = f"{label:32s}" + "".join(f"{times[n]:11.4f}s" for n in names)
        if len(names) > 1:
            same = np.array_equal(outs["cython"], outs["python"])
            line += f"  {times['python'] / times['cython']:7.1f}x  {same}"
        print(line)


if __name__ == "__main__":
    main()
