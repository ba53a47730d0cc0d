"""The three multiplication algorithms: simple, blocked, Strassen.

All kernels accept a thread count and partition disjoint output regions
(rows for simple, block-grid cells for blocked, the seven top-level
products for Strassen); every element is produced by exactly one task
with a fixed accumulation order, so results are bit-identical for any
thread count.  Compiled dd/qd kernels release the GIL, so thread pools
give real parallelism there; ap work is GIL-bound and threads mostly
overlap, which changes timings but never results.
"""

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _ap_kernels, backend
from .errors import PrecisionMismatchError, RangeError, ShapeError
from .matrix import DenseMatrix
from .scalar import Kind


class Algorithm(enum.Enum):
    SIMPLE = "simple"
    BLOCK = "block"
    STRASSEN = "strassen"


DEFAULT_STRASSEN_CUTOFF = 64
DEFAULT_BLOCK_SIZE = 64


@dataclass(frozen=True)
class AlgorithmChoice:
    kind: Algorithm
    n_min: Optional[int] = None
    cutoff: Optional[int] = None

    def __post_init__(self):
        if self.kind is Algorithm.BLOCK:
            if not self.n_min or self.n_min < 1:
                raise ValueError("blocked algorithm needs a positive block size")
        if self.kind is Algorithm.STRASSEN:
            if not self.cutoff or self.cutoff < 2:
                raise ValueError("Strassen needs a recursion cutoff >= 2")
            if not self.n_min or self.n_min < 1:
                raise ValueError("Strassen needs a positive leaf block size")

    @property
    def token(self):
        if self.kind is Algorithm.SIMPLE:
            return "simple"
        if self.kind is Algorithm.BLOCK:
            return f"block:{self.n_min}"
        return f"strassen:{self.cutoff}/{self.n_min}"

    @staticmethod
    def parse(tok):
        if tok == "simple":
            return AlgorithmChoice(Algorithm.SIMPLE)
        if tok.startswith("block:"):
            return AlgorithmChoice(Algorithm.BLOCK, n_min=int(tok[6:]))
        if tok.startswith("strassen:"):
            cut, _, leaf = tok[9:].partition("/")
            return AlgorithmChoice(Algorithm.STRASSEN, n_min=int(leaf), cutoff=int(cut))
        raise ValueError(f"bad algorithm token {tok!r}")

    def __str__(self):
        return self.token


class StrassenStats:
    """Per-recursion-level operation counts (serial runs only)."""

    def __init__(self):
        self.multiplications = 0
        self.additions = 0


# ---------------------------------------------------------------------------
# work partitioning
# ---------------------------------------------------------------------------

def _split_range(total, parts):
    parts = max(1, min(parts, total))
    base, rem = divmod(total, parts)
    bounds = []
    lo = 0
    for p in range(parts):
        hi = lo + base + (1 if p < rem else 0)
        if hi > lo:
            bounds.append((lo, hi))
        lo = hi
    return bounds


def _run_partitioned(worker, total, threads):
    if total == 0:
        return
    if threads == 1 or total == 1:
        worker(0, total)
        return
    bounds = _split_range(total, threads)
    if len(bounds) == 1:
        worker(0, total)
        return
    with ThreadPoolExecutor(max_workers=len(bounds)) as pool:
        futures = [pool.submit(worker, lo, hi) for lo, hi in bounds]
        for f in futures:
            f.result()


def _check_pair(a, b, threads):
    if a.cols != b.rows:
        raise ShapeError(f"inner dimensions differ: {a.rows}x{a.cols} times {b.rows}x{b.cols}")
    if a.prec != b.prec:
        raise PrecisionMismatchError(f"operand precisions differ: {a.prec} vs {b.prec}")
    if threads < 1:
        raise ValueError("thread count must be positive")


def _check_finite(c):
    if c.prec.kind is not Kind.AP and not np.isfinite(c.data).all():
        raise RangeError("matrix product overflowed the working precision")
    return c


# ---------------------------------------------------------------------------
# simple and blocked products
# ---------------------------------------------------------------------------

def _simple_into(a, b, c, threads):
    if a.prec.kind is Kind.AP:
        def worker(lo, hi):
            _ap_kernels.simple_rows(a.data, b.data, a.rows, a.cols, b.cols,
                                    a.prec.bits, lo, hi, c.data)
    else:
        kern = backend.kernels()
        fn = kern.dd_simple_rows if a.prec.kind is Kind.DD else kern.qd_simple_rows

        def worker(lo, hi):
            fn(a.data, b.data, c.data, lo, hi)
    _run_partitioned(worker, a.rows, threads)


def _block_into(a, b, c, n_min, threads):
    cells = (-(-a.rows // n_min)) * (-(-b.cols // n_min))
    if a.prec.kind is Kind.AP:
        def worker(lo, hi):
            _ap_kernels.block_cells(a.data, b.data, a.rows, a.cols, b.cols,
                                    a.prec.bits, n_min, lo, hi, c.data)
    else:
        kern = backend.kernels()
        fn = kern.dd_block_cells if a.prec.kind is Kind.DD else kern.qd_block_cells

        def worker(lo, hi):
            fn(a.data, b.data, c.data, n_min, lo, hi)
    _run_partitioned(worker, cells, threads)


def matmul_simple(a, b, threads=1):
    """Triple-loop product; k accumulated in ascending order."""
    _check_pair(a, b, threads)
    c = DenseMatrix.zeros(a.rows, b.cols, a.prec)
    _simple_into(a, b, c, threads)
    return _check_finite(c)


def matmul_block(a, b, n_min, threads=1):
    """Cache-blocked product with at-most-``n_min`` block extents.

    The accumulation order per element equals the simple kernel's, so the
    result is bit-identical to :func:`matmul_simple` at every block size.
    """
    _check_pair(a, b, threads)
    if n_min < 1:
        raise ValueError("block size must be positive")
    c = DenseMatrix.zeros(a.rows, b.cols, a.prec)
    _block_into(a, b, c, n_min, threads)
    return _check_finite(c)


# ---------------------------------------------------------------------------
# elementwise helpers (Strassen plumbing)
# ---------------------------------------------------------------------------

def _ewise(x, y, subtract, stats=None):
    out = DenseMatrix.zeros(x.rows, x.cols, x.prec)
    if x.prec.kind is Kind.AP:
        fn = _ap_kernels.ewise_sub if subtract else _ap_kernels.ewise_add
        fn(x.data, y.data, x.prec.bits, 0, x.rows * x.cols, out.data)
    else:
        kern = backend.kernels()
        if x.prec.kind is Kind.DD:
            fn = kern.dd_ewise_sub if subtract else kern.dd_ewise_add
        else:
            fn = kern.qd_ewise_sub if subtract else kern.qd_ewise_add
        fn(x.data, y.data, out.data, 0, x.rows)
    if stats is not None:
        stats.additions += 1
    return out


def _pad_square(mat, size):
    if mat.rows == size:
        return mat
    if mat.prec.kind is Kind.AP:
        from . import bigfloat as bf
        data = [bf.AP_ZERO] * (size * size)
        for i in range(mat.rows):
            data[i * size:i * size + mat.cols] = mat.data[i * mat.cols:(i + 1) * mat.cols]
        return DenseMatrix(size, size, mat.prec, data)
    comps = mat.data.shape[2]
    data = np.zeros((size, size, comps))
    data[:mat.rows, :mat.cols] = mat.data
    return DenseMatrix(size, size, mat.prec, data)


def _crop(mat, rows, cols):
    if mat.rows == rows and mat.cols == cols:
        return mat
    if mat.prec.kind is Kind.AP:
        data = []
        for i in range(rows):
            data.extend(mat.data[i * mat.cols:i * mat.cols + cols])
        return DenseMatrix(rows, cols, mat.prec, data)
    return DenseMatrix(rows, cols, mat.prec, np.ascontiguousarray(mat.data[:rows, :cols]))


def _quadrant(mat, qi, qj, h):
    if mat.prec.kind is Kind.AP:
        data = []
        for i in range(qi * h, qi * h + h):
            data.extend(mat.data[i * mat.cols + qj * h:i * mat.cols + qj * h + h])
        return DenseMatrix(h, h, mat.prec, data)
    block = mat.data[qi * h:(qi + 1) * h, qj * h:(qj + 1) * h]
    return DenseMatrix(h, h, mat.prec, np.ascontiguousarray(block))


def _assemble(c11, c12, c21, c22):
    h = c11.rows
    prec = c11.prec
    if prec.kind is Kind.AP:
        data = []
        for i in range(h):
            data.extend(c11.data[i * h:(i + 1) * h])
            data.extend(c12.data[i * h:(i + 1) * h])
        for i in range(h):
            data.extend(c21.data[i * h:(i + 1) * h])
            data.extend(c22.data[i * h:(i + 1) * h])
        return DenseMatrix(2 * h, 2 * h, prec, data)
    comps = c11.data.shape[2]
    data = np.zeros((2 * h, 2 * h, comps))
    data[:h, :h] = c11.data
    data[:h, h:] = c12.data
    data[h:, :h] = c21.data
    data[h:, h:] = c22.data
    return DenseMatrix(2 * h, 2 * h, prec, data)


# ---------------------------------------------------------------------------
# Strassen
# ---------------------------------------------------------------------------

def matmul_strassen(a, b, cutoff=DEFAULT_STRASSEN_CUTOFF, leaf_n_min=DEFAULT_BLOCK_SIZE,
                    threads=1, stats=None):
    """Divide-and-conquer product with 7 sub-products per level.

    Square inputs only.  Odd dimensions are zero-padded to even at each
    recursion level and cropped on return; below ``cutoff`` the blocked
    kernel with ``leaf_n_min`` takes over.  With ``threads > 1`` the seven
    top-level products run in a pool (serial below), preserving the fixed
    combination order, so results stay thread-count invariant.

    ``stats`` (serial runs only) accumulates per-level multiplication and
    addition/subtraction counts.
    """
    if not (a.rows == a.cols == b.rows == b.cols):
        raise ShapeError("Strassen requires square inputs of equal dimension")
    _check_pair(a, b, threads)
    if cutoff < 2:
        raise ValueError("Strassen cutoff must be >= 2")
    if leaf_n_min < 1:
        raise ValueError("leaf block size must be positive")
    if stats is not None and threads != 1:
        raise ValueError("operation counting is only supported for serial runs")
    c = _strassen_rec(a, b, cutoff, leaf_n_min, threads, stats)
    return _check_finite(c)


def _strassen_rec(a, b, cutoff, leaf_n_min, threads, stats):
    n = a.rows
    if n <= cutoff:
        c = DenseMatrix.zeros(n, n, a.prec)
        _block_into(a, b, c, leaf_n_min, 1)
        return c

    even = n + (n & 1)
    ap = _pad_square(a, even)
    bp = _pad_square(b, even)
    h = even // 2
    a11 = _quadrant(ap, 0, 0, h)
    a12 = _quadrant(ap, 0, 1, h)
    a21 = _quadrant(ap, 1, 0, h)
    a22 = _quadrant(ap, 1, 1, h)
    b11 = _quadrant(bp, 0, 0, h)
    b12 = _quadrant(bp, 0, 1, h)
    b21 = _quadrant(bp, 1, 0, h)
    b22 = _quadrant(bp, 1, 1, h)

    operands = (
        (_ewise(a11, a22, False, stats), _ewise(b11, b22, False, stats)),
        (_ewise(a21, a22, False, stats), b11),
        (a11, _ewise(b12, b22, True, stats)),
        (a22, _ewise(b21, b11, True, stats)),
        (_ewise(a11, a12, False, stats), b22),
        (_ewise(a21, a11, True, stats), _ewise(b11, b12, False, stats)),
        (_ewise(a12, a22, True, stats), _ewise(b21, b22, False, stats)),
    )
    if stats is not None:
        stats.multiplications += 7

    if threads > 1:
        with ThreadPoolExecutor(max_workers=min(threads, 7)) as pool:
            futures = [pool.submit(_strassen_rec, x, y, cutoff, leaf_n_min, 1, None)
                       for x, y in operands]
            p1, p2, p3, p4, p5, p6, p7 = (f.result() for f in futures)
    else:
        p1, p2, p3, p4, p5, p6, p7 = (_strassen_rec(x, y, cutoff, leaf_n_min, 1, stats)
                                      for x, y in operands)

    c11 = _ewise(_ewise(_ewise(p1, p4, False, stats), p5, True, stats), p7, False, stats)
    c12 = _ewise(p3, p5, False, stats)
    c21 = _ewise(p2, p4, False, stats)
    c22 = _ewise(_ewise(_ewise(p1, p3, False, stats), p2, True, stats), p6, False, stats)
    return _crop(_assemble(c11, c12, c21, c22), n, n)


# ---------------------------------------------------------------------------
# dispatch by choice
# ---------------------------------------------------------------------------

def run_choice(a, b, choice, threads=1):
    if choice.kind is Algorithm.SIMPLE:
        return matmul_simple(a, b, threads)
    if choice.kind is Algorithm.BLOCK:
        return matmul_block(a, b, choice.n_min, threads)
    return matmul_strassen(a, b, choice.cutoff, choice.n_min, threads)
