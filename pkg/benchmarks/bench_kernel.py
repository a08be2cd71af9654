"""Time the compiled polynomial kernel against the pure-Python fallback.

    python3 benchmarks/bench_kernel.py [--terms 12] [--vars 4] [--repeat 5]
"""
import argparse
import importlib
import timeit

import numpy as np
from gmpy2 import mpq

from curvlab import _kernel_py


def random_poly(rng, m, terms, degree=4):
    out = {}
    for _ in range(terms):
        e = tuple(int(v) for v in rng.integers(0, degree + 1, m))
        c = mpq(int(rng.integers(-9, 10)), int(rng.integers(1, 6)))
        if c:
            out[e] = c if c.denominator != 1 else int(c)
    return out


def workloads(k, a, b, point):
    return {
        "add": lambda: k.add(a, b),
        "mul": lambda: k.mul(a, b),
        "partial": lambda: k.partial(a, 0),
        "evaluate": lambda: k.evaluate(a, point),
        "truncate": lambda: k.truncate(a, 3),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--terms", type=int, default=12)
    ap.add_argument("--vars", type=int, default=4)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--number", type=int, default=2000)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(0)
    a = random_poly(rng, args.vars, args.terms)
    b = random_poly(rng, args.vars, args.terms)
    point = [mpq(int(rng.integers(-4, 5)), 3) for _ in range(args.vars)]

    kernels = {"python": _kernel_py}
    try:
        kernels["compiled"] = importlib.import_module("curvlab._kernel")
    except ImportError:
        print("compiled kernel not built; timing the fallback only")

    print(f"{'op':<10}" + "".join(f"{name:>14}" for name in kernels) + f"{'speedup':>10}")
    for op in workloads(_kernel_py, a, b, point):
        row = {}
        for name, k in kernels.items():
            fn = workloads(k, a, b, point)[op]
            best = min(timeit.repeat(fn, number=args.number, repeat=args.repeat))
            row[name] = best / args.number * 1e6
        line = f"{op:<10}" + "".join(f"{row[n]:>12.2f}us" for n in kernels)
        if "compiled" in row:
            line += f"{row['python'] / row['compiled']:>9.2f}x"
        print(line)


if __name__ == "__main__":
    main()
