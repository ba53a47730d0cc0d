#!/usr/bin/env python3
"""Compare the compiled kernels against the pure-Python fallback.

Runs the blocked product on identical inputs under both backends,
verifies the outputs are bit-identical, and reports the speedup.

    python benchmarks/compare_backends.py --prec dd,qd --dims 32,64 --nmin 16
"""

import argparse
import sys
import time

from mpmm import backend
from mpmm.matrix import DenseMatrix, generate_test_pair
from mpmm.multiply import _block_into
from mpmm.predict import _zero
from mpmm.scalar import PrecisionSpec


def bench(a, b, n_min, threads, repeats):
    out = DenseMatrix.zeros(a.rows, b.cols, a.prec)
    samples = []
    for _ in range(repeats):
        _zero(out)
        t0 = time.perf_counter()
        _block_into(a, b, out, n_min, threads)
        samples.append(time.perf_counter() - t0)
    return min(samples), out


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--prec", default="dd,qd")
    parser.add_argument("--dims", default="32,64")
    parser.add_argument("--nmin", type=int, default=16)
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args(argv)

    if not backend.HAVE_EXT:
        print("compiled kernels not built; nothing to compare", file=sys.stderr)
        return 1

    print(f"{'prec':>8} {'n':>6} {'ext_s':>10} {'pure_s':>10} {'speedup':>8}  bit-identical")
    for tok in args.prec.split(","):
        prec = PrecisionSpec.parse(tok)
        for n in (int(d) for d in args.dims.split(",")):
            a, b = generate_test_pair(n, prec)
            backend.use("ext")
            t_ext, c_ext = bench(a, b, args.nmin, args.threads, args.repeats)
            backend.use("python")
            t_pure, c_pure = bench(a, b, args.nmin, args.threads, args.repeats)
            backend.use("ext")
            same = c_ext == c_pure
            print(f"{prec.token:>8} {n:>6} {t_ext:>10.4f} {t_pure:>10.4f} "
                  f"{t_pure / t_ext:>7.1f}x  {same}")
            if not same:
                print("backend outputs diverged!", file=sys.stderr)
                return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
