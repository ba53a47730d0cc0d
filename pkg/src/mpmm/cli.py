"""Command-line front end.

Subcommands::

    mpmm tune     run a tuning sweep, write a table file + CSV report
    mpmm verify   cross-check the three kernels against each other
    mpmm predict  per-candidate slice timings and extrapolations
    mpmm report   re-emit a table as CSV or as a winners grid

Exit codes: 0 success, 2 usage, 3 I/O, 4 verification failure,
5 measurement anomaly.  Timed subcommands take a lock file so two of
them never overlap.  ``MPMM_THREADS_MAX`` caps every thread list.
"""

import argparse
import contextlib
import csv
import os
import platform
import sys
import tempfile

from . import __version__
from . import backend
from .errors import MeasurementError, MpmmError, TableFormatError
from .matrix import frobenius_rel_diff, generate_test_pair
from .multiply import matmul_block, matmul_simple, matmul_strassen
from .predict import select_block_size
from .scalar import PrecisionSpec
from .timing import TimingPolicy, measure
from .tune import TuningConfig, load_table, prec_sort_key, rel_diff, tune_sweep

EX_OK = 0
EX_USAGE = 2
EX_IO = 3
EX_VERIFY = 4
EX_MEASURE = 5


# ---------------------------------------------------------------------------
# argument parsing helpers
# ---------------------------------------------------------------------------

def _parse_precs(text):
    return [PrecisionSpec.parse(tok) for tok in text.split(",") if tok]


def _parse_ints(text):
    return [int(tok) for tok in text.split(",") if tok]


def _parse_dims(text):
    """Comma list of dimensions; a ``+-1`` suffix expands n to n-1,n,n+1."""
    dims = []
    for tok in text.split(","):
        if not tok:
            continue
        if tok.endswith("+-1"):
            n = int(tok[:-3])
            dims.extend((n - 1, n, n + 1))
        else:
            dims.append(int(tok))
    return sorted(set(dims))


def _cap_threads(threads):
    cap = os.environ.get("MPMM_THREADS_MAX")
    if not cap:
        return threads
    cap = int(cap)
    out = []
    for t in threads:
        t = min(t, cap)
        if t not in out:
            out.append(t)
    return out


def _policy_from_args(args):
    return TimingPolicy(warmup_runs=args.warmup, measured_runs=args.repeats,
                        aggregator=args.agg)


def _add_timing_flags(parser):
    parser.add_argument("--warmup", type=int, default=0, help="warm-up runs per measurement")
    parser.add_argument("--repeats", type=int, default=1, help="measured runs per measurement")
    parser.add_argument("--agg", choices=("median", "min", "mean"), default="median")


@contextlib.contextmanager
def _bench_lock():
    path = os.path.join(tempfile.gettempdir(), "mpmm-bench.lock")
    try:
        fd = os.open(path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    except FileExistsError:
        raise MeasurementError(
            f"another timed mpmm run holds {path}; remove it if stale") from None
    try:
        os.write(fd, str(os.getpid()).encode())
        yield
    finally:
        os.close(fd)
        os.unlink(path)


def _host_lines():
    return [
        f"host: {platform.node()} ({platform.machine()}, {os.cpu_count()} cpus)",
        f"python: {platform.python_version()}, mpmm {__version__}, backend {backend.backend_name()}",
    ]


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

_CSV_FIELDS = ["prec", "bits", "n", "threads", "best_n_min", "block_s",
               "selection_s", "predicted_s", "rel_diff", "simple_s",
               "strassen_s", "winner"]


def _write_csv(table, fp):
    for line in _host_lines():
        fp.write(f"# {line}\n")
    writer = csv.writer(fp)
    writer.writerow(_CSV_FIELDS)
    for r in sorted(table.rows, key=lambda r: (prec_sort_key(r.prec), r.n, r.threads)):
        writer.writerow([
            r.prec.kind.value, r.prec.bits, r.n, r.threads, r.best_n_min,
            repr(r.block_time_s), repr(r.selection_time_s),
            "" if r.predicted_s is None else repr(r.predicted_s),
            "" if r.rel_diff is None else repr(r.rel_diff),
            "" if r.simple_time_s is None else repr(r.simple_time_s),
            "" if r.strassen_time_s is None else repr(r.strassen_time_s),
            r.winner.token,
        ])


def _winner_cell(choice):
    if choice.kind.value == "strassen":
        return "S"
    if choice.kind.value == "block":
        return f"B@{choice.n_min}"
    return "smp"


def _write_winners(table, fp):
    """One grid per thread count: rows = dimensions, columns = precisions."""
    precs = sorted({r.prec for r in table.rows}, key=prec_sort_key)
    dims = sorted({r.n for r in table.rows})
    threads = sorted({r.threads for r in table.rows})
    by_key = {(r.prec, r.n, r.threads): r for r in table.rows}
    width = max([8] + [len(p.token) + 2 for p in precs])
    for t in threads:
        fp.write(f"winners for threads={t}\n")
        fp.write("n".ljust(8) + "".join(p.token.rjust(width) for p in precs) + "\n")
        for n in dims:
            cells = []
            for p in precs:
                r = by_key.get((p, n, t))
                cells.append(_winner_cell(r.winner) if r else "?")
            fp.write(str(n).ljust(8) + "".join(c.rjust(width) for c in cells) + "\n")
        fp.write("\n")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_tune(args):
    threads = _cap_threads(_parse_ints(args.threads))
    cfg = TuningConfig(
        precisions=_parse_precs(args.prec),
        dims=_parse_dims(args.dims),
        block_candidates=_parse_ints(args.nmin),
        thread_counts=threads,
        strassen_cutoff=args.cutoff,
        timing=_policy_from_args(args),
        slice_multiplier=args.slice_mult,
        simple_limit=args.simple_limit,
        predict=not args.no_predict,
        out_path=args.out,
    )
    with _bench_lock():
        table = tune_sweep(cfg)
    csv_path = args.csv or args.out + ".csv"
    with open(csv_path, "w", encoding="utf-8", newline="") as fp:
        _write_csv(table, fp)
    print(f"tuned {len(table.rows)} grid points "
          f"({len(table.failures)} failed) in {table.total_tuning_time_s:.3f} s "
          f"(selection phase {table.prediction_total_s:.3f} s)")
    for (prec, t), n_star in sorted(table.thresholds.items(),
                                    key=lambda kv: (prec_sort_key(kv[0][0]), kv[0][1])):
        print(f"threshold {prec.token} threads={t}: n >= {n_star}")
    print(f"table: {args.out}\ncsv: {csv_path}")
    return EX_OK


def _verify_bounds(prec, n):
    u = prec.unit_roundoff()
    return 4.0 * n * u, 100.0 * n * u


def _cmd_verify(args):
    threads = _cap_threads([args.threads])[0]
    failures = 0
    with _bench_lock():
        for prec in _parse_precs(args.prec):
            for n in _parse_dims(args.dims):
                a, b = generate_test_pair(n, prec)
                c_simple = matmul_simple(a, b, threads)
                c_block = matmul_block(a, b, args.nmin, threads)
                c_str = matmul_strassen(a, b, args.cutoff, args.nmin, threads)
                block_bound, str_bound = _verify_bounds(prec, n)
                d_block = frobenius_rel_diff(c_block, c_simple)
                d_str = frobenius_rel_diff(c_str, c_simple)
                ok = d_block <= block_bound and d_str <= str_bound
                failures += 0 if ok else 1
                print(f"{prec.token} n={n}: block-vs-simple {d_block:.3e} "
                      f"(bound {block_bound:.3e}), strassen-vs-simple {d_str:.3e} "
                      f"(bound {str_bound:.3e}) {'ok' if ok else 'FAIL'}")
    if failures:
        print(f"{failures} case(s) violated the agreement bounds", file=sys.stderr)
        return EX_VERIFY
    return EX_OK


def _cmd_predict(args):
    prec = PrecisionSpec.parse(args.prec)
    threads = _cap_threads([args.threads])[0]
    candidates = sorted(_parse_ints(args.nmin))
    policy = _policy_from_args(args)
    with _bench_lock():
        a, b = generate_test_pair(args.dim, prec)
        best, records = select_block_size(a, b, candidates, threads, policy,
                                          args.slice_mult)
        print(f"{'n_min':>8} {'slice_rows':>10} {'slice_s':>12} {'predicted_s':>12}")
        for r in records:
            print(f"{r.n_min:>8} {r.slice_rows:>10} {r.slice_time_s:>12.4g} "
                  f"{r.predicted_full_s:>12.4g}")
        chosen = next(r for r in records if r.n_min == best)
        from .matrix import DenseMatrix
        from .multiply import _block_into
        from .predict import _zero
        out = DenseMatrix.zeros(a.rows, b.cols, prec)
        full = measure(lambda: _block_into(a, b, out, best, threads), policy,
                       setup=lambda: _zero(out))
        diff = rel_diff(chosen.predicted_full_s, full)
    print(f"best n_min={best} block_s={full:.4g} slice_s={chosen.slice_time_s:.4g} "
          f"predicted_s={chosen.predicted_full_s:.4g} rel_diff={diff:.2%}")
    return EX_OK


def _cmd_report(args):
    table = load_table(args.infile)
    out_fp = open(args.out, "w", encoding="utf-8", newline="") if args.out else sys.stdout
    try:
        if args.format == "csv":
            _write_csv(table, out_fp)
        else:
            _write_winners(table, out_fp)
    finally:
        if args.out:
            out_fp.close()
    return EX_OK


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="mpmm",
        description="Tune and benchmark extended-precision dense matrix multiplication.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tune", help="run a tuning sweep and persist the table")
    p.add_argument("--prec", required=True, help="comma list: dd, qd, ap:<bits>")
    p.add_argument("--dims", required=True, help="comma list of n; suffix +-1 expands")
    p.add_argument("--nmin", required=True, help="comma list of block-size candidates")
    p.add_argument("--threads", required=True, help="comma list of thread counts")
    p.add_argument("--out", required=True, help="tuning-table output path")
    p.add_argument("--csv", help="CSV report path (default: <out>.csv)")
    p.add_argument("--no-predict", action="store_true",
                   help="measure every candidate in full instead of predicting")
    p.add_argument("--slice-mult", type=int, default=2, dest="slice_mult")
    p.add_argument("--cutoff", type=int, default=64, help="Strassen recursion floor")
    p.add_argument("--simple-limit", type=int, default=512, dest="simple_limit",
                   help="skip the simple algorithm above this dimension")
    _add_timing_flags(p)
    p.set_defaults(fn=_cmd_tune)

    p = sub.add_parser("verify", help="cross-check the three kernels")
    p.add_argument("--prec", required=True)
    p.add_argument("--dims", required=True)
    p.add_argument("--nmin", type=int, default=64)
    p.add_argument("--cutoff", type=int, default=64)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("predict", help="slice timings and extrapolations for one dimension")
    p.add_argument("--prec", required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--nmin", required=True)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--slice-mult", type=int, default=2, dest="slice_mult")
    _add_timing_flags(p)
    p.set_defaults(fn=_cmd_predict)

    p = sub.add_parser("report", help="re-emit a tuning table")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--format", choices=("csv", "winners"), default="csv")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(fn=_cmd_report)

    return parser


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as ex:
        return ex.code if ex.code is not None else EX_USAGE
    try:
        return args.fn(args)
    except MeasurementError as ex:
        print(f"measurement error: {ex}", file=sys.stderr)
        return EX_MEASURE
    except TableFormatError as ex:
        print(f"format error: {ex}", file=sys.stderr)
        return EX_IO
    except OSError as ex:
        print(f"i/o error: {ex}", file=sys.stderr)
        return EX_IO
    except (MpmmError, ValueError) as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EX_USAGE


if __name__ == "__main__":
    sys.exit(main())
