"""Dense matrices, test-problem generators, block partitions and norms.

Storage is row major and uniform in precision.  dd/qd matrices hold their
components in a C-contiguous float64 array of shape ``(m, n, 2)`` or
``(m, n, 4)`` so the compiled kernels can walk raw doubles; ap matrices
hold a flat list of big-float handles.  Matrices are immutable from the
library user's point of view: kernels write only into freshly allocated
outputs, so concurrent readers are always safe.
"""

from dataclasses import dataclass

import numpy as np

from . import bigfloat as bf
from . import ddqd
from .errors import PrecisionMismatchError, ShapeError, TableFormatError
from .scalar import Kind, PrecisionSpec, Scalar

_COMPONENTS = {Kind.DD: 2, Kind.QD: 4}


class DenseMatrix:
    __slots__ = ("rows", "cols", "prec", "data")

    def __init__(self, rows, cols, prec, data):
        if rows < 1 or cols < 1:
            raise ShapeError("matrix dimensions must be positive")
        self.rows = rows
        self.cols = cols
        self.prec = prec
        if prec.kind is Kind.AP:
            if len(data) != rows * cols:
                raise ShapeError("flat data length must equal rows*cols")
        else:
            want = (rows, cols, _COMPONENTS[prec.kind])
            if data.shape != want:
                raise ShapeError(f"component array shape {data.shape} != {want}")
        self.data = data

    # -- construction -------------------------------------------------------

    @staticmethod
    def zeros(rows, cols, prec):
        if prec.kind is Kind.AP:
            return DenseMatrix(rows, cols, prec, [bf.AP_ZERO] * (rows * cols))
        comps = _COMPONENTS[prec.kind]
        return DenseMatrix(rows, cols, prec, np.zeros((rows, cols, comps)))

    @staticmethod
    def from_scalars(rows_of_scalars, prec):
        m = len(rows_of_scalars)
        n = len(rows_of_scalars[0])
        out = DenseMatrix.zeros(m, n, prec)
        for i, row in enumerate(rows_of_scalars):
            if len(row) != n:
                raise ShapeError("ragged rows")
            for j, s in enumerate(row):
                if s.prec != prec:
                    raise PrecisionMismatchError("element precision differs from matrix precision")
                _put(out, i, j, s.payload)
        return out

    @staticmethod
    def from_ints(rows_of_ints, prec):
        return DenseMatrix.from_scalars(
            [[Scalar.from_int(int(v), prec) for v in row] for row in rows_of_ints], prec)

    @staticmethod
    def identity(n, prec):
        out = DenseMatrix.zeros(n, n, prec)
        one = Scalar.from_float(1.0, prec)
        for i in range(n):
            _put(out, i, i, one.payload)
        return out

    # -- element access ------------------------------------------------------

    def get(self, i, j):
        """Element at 0-based (i, j) as a Scalar."""
        if self.prec.kind is Kind.AP:
            return Scalar(self.prec, self.data[i * self.cols + j])
        return Scalar(self.prec, tuple(float(c) for c in self.data[i, j]))

    def to_float_array(self):
        """Lossy double-precision view, mainly for debugging and display."""
        if self.prec.kind is Kind.AP:
            return np.array([bf.ap_to_float(v) for v in self.data]).reshape(self.rows, self.cols)
        return self.data.sum(axis=2)

    def __eq__(self, other):
        if not isinstance(other, DenseMatrix):
            return NotImplemented
        if (self.rows, self.cols, self.prec) != (other.rows, other.cols, other.prec):
            return False
        if self.prec.kind is Kind.AP:
            return self.data == other.data
        return bool(np.array_equal(self.data, other.data))

    def __repr__(self):
        return f"DenseMatrix({self.rows}x{self.cols}, {self.prec})"


def _put(mat, i, j, payload):
    if mat.prec.kind is Kind.AP:
        mat.data[i * mat.cols + j] = payload
    else:
        mat.data[i, j] = payload


def leading_rows(mat, r):
    """The first ``r`` rows, sharing storage where the layout allows."""
    if not 1 <= r <= mat.rows:
        raise ShapeError(f"cannot take {r} leading rows of {mat.rows}")
    if mat.prec.kind is Kind.AP:
        return DenseMatrix(r, mat.cols, mat.prec, mat.data[: r * mat.cols])
    return DenseMatrix(r, mat.cols, mat.prec, mat.data[:r])


# ---------------------------------------------------------------------------
# block partitions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BlockPartition:
    n_min: int
    row_extents: tuple
    inner_extents: tuple
    col_extents: tuple

    @property
    def m_blocks(self):
        return len(self.row_extents)

    @property
    def l_blocks(self):
        return len(self.inner_extents)

    @property
    def n_blocks(self):
        return len(self.col_extents)


def _axis_extents(dim, n_min):
    full, rem = divmod(dim, n_min)
    extents = (n_min,) * full
    if rem:
        extents += (rem,)
    return extents


def make_partition(m, l, n, n_min):
    """Ceil-divide each axis into blocks of at most ``n_min``."""
    if n_min < 1:
        raise ShapeError("block size must be positive")
    return BlockPartition(
        n_min=n_min,
        row_extents=_axis_extents(m, n_min),
        inner_extents=_axis_extents(l, n_min),
        col_extents=_axis_extents(n, n_min),
    )


# ---------------------------------------------------------------------------
# test-problem generator
# ---------------------------------------------------------------------------

def generate_test_pair(n, prec):
    """The benchmark pair A[i][j] = sqrt(5)*(i+j-1), B[i][j] = sqrt(3)*(n-i).

    Indices are 1-based in the formulas.  Irrational entries keep big-float
    mantissas fully populated, so timings are not flattered by short
    mantissa shortcuts in the backend.  Entries are computed once per
    distinct integer factor at guard precision, then rounded to the target
    precision; repeated calls are bit-identical.
    """
    if n < 1:
        raise ShapeError("matrix dimension must be positive")
    guard = prec.bits + bf.GUARD_BITS
    sqrt5 = bf.ap_sqrt(bf.ap_from_int(5), guard)
    sqrt3 = bf.ap_sqrt(bf.ap_from_int(3), guard)

    a_vals = {}
    for k in range(1, 2 * n):
        v = bf.ap_mul(sqrt5, bf.ap_from_int(k), guard)
        a_vals[k] = Scalar._from_ap_exactish(v, prec).payload
    b_vals = {0: Scalar.zero(prec).payload}
    for k in range(1, n):
        v = bf.ap_mul(sqrt3, bf.ap_from_int(k), guard)
        b_vals[k] = Scalar._from_ap_exactish(v, prec).payload

    a = DenseMatrix.zeros(n, n, prec)
    b = DenseMatrix.zeros(n, n, prec)
    for i in range(n):
        for j in range(n):
            _put(a, i, j, a_vals[i + j + 1])
        row_val = b_vals[n - 1 - i]
        for j in range(n):
            _put(b, i, j, row_val)
    return a, b


# ---------------------------------------------------------------------------
# norms and comparison
# ---------------------------------------------------------------------------

def _frobenius_sq(mat):
    """Sum of squared elements, in the working precision."""
    if mat.prec.kind is Kind.DD:
        acc = ddqd.DD_ZERO
        flat = mat.data.reshape(-1, 2)
        for hi, lo in flat.tolist():
            acc = ddqd.dd_add(acc, ddqd.dd_mul((hi, lo), (hi, lo)))
        return acc
    if mat.prec.kind is Kind.QD:
        acc = ddqd.QD_ZERO
        flat = mat.data.reshape(-1, 4)
        for c0, c1, c2, c3 in flat.tolist():
            v = (c0, c1, c2, c3)
            acc = ddqd.qd_add(acc, ddqd.qd_mul(v, v))
        return acc
    bits = mat.prec.bits
    acc = bf.AP_ZERO
    for v in mat.data:
        acc = bf.ap_add(acc, bf.ap_mul(v, v, bits), bits)
    return acc


def frobenius_norm(mat):
    """Frobenius norm in the working precision, reported as a double."""
    sq = _frobenius_sq(mat)
    if mat.prec.kind is Kind.DD:
        return ddqd.dd_to_float(ddqd.dd_sqrt(sq))
    if mat.prec.kind is Kind.QD:
        return ddqd.qd_to_float(ddqd.qd_sqrt(sq))
    return bf.ap_to_float(bf.ap_sqrt(sq, mat.prec.bits))


def frobenius_rel_diff(x, y):
    """``||X - Y||_F / ||Y||_F`` in the working precision, as a double.

    Returns ``||X||_F`` when ``||Y||_F`` is zero.  Ratios below the double
    subnormal floor (~1e-308) report as 0.0, which every bound used in
    this library treats as agreement.
    """
    if (x.rows, x.cols) != (y.rows, y.cols):
        raise ShapeError(f"shape mismatch: {x.rows}x{x.cols} vs {y.rows}x{y.cols}")
    if x.prec != y.prec:
        raise PrecisionMismatchError(f"precision mismatch: {x.prec} vs {y.prec}")

    kind = x.prec.kind
    if kind is Kind.DD:
        diff_sq = ddqd.DD_ZERO
        y_sq = ddqd.DD_ZERO
        xf = x.data.reshape(-1, 2).tolist()
        yf = y.data.reshape(-1, 2).tolist()
        for (xh, xl), (yh, yl) in zip(xf, yf):
            d = ddqd.dd_sub((xh, xl), (yh, yl))
            diff_sq = ddqd.dd_add(diff_sq, ddqd.dd_mul(d, d))
            y_sq = ddqd.dd_add(y_sq, ddqd.dd_mul((yh, yl), (yh, yl)))
        diff_n = ddqd.dd_sqrt(diff_sq)
        y_n = ddqd.dd_sqrt(y_sq)
        if y_n == ddqd.DD_ZERO:
            return ddqd.dd_to_float(diff_n)
        return ddqd.dd_to_float(ddqd.dd_div(diff_n, y_n))
    if kind is Kind.QD:
        diff_sq = ddqd.QD_ZERO
        y_sq = ddqd.QD_ZERO
        xf = x.data.reshape(-1, 4).tolist()
        yf = y.data.reshape(-1, 4).tolist()
        for xc, yc in zip(xf, yf):
            xv = tuple(xc)
            yv = tuple(yc)
            d = ddqd.qd_sub(xv, yv)
            diff_sq = ddqd.qd_add(diff_sq, ddqd.qd_mul(d, d))
            y_sq = ddqd.qd_add(y_sq, ddqd.qd_mul(yv, yv))
        diff_n = ddqd.qd_sqrt(diff_sq)
        y_n = ddqd.qd_sqrt(y_sq)
        if y_n == ddqd.QD_ZERO:
            return ddqd.qd_to_float(diff_n)
        return ddqd.qd_to_float(ddqd.qd_div(diff_n, y_n))

    bits = x.prec.bits
    diff_sq = bf.AP_ZERO
    y_sq = bf.AP_ZERO
    for xv, yv in zip(x.data, y.data):
        d = bf.ap_sub(xv, yv, bits)
        diff_sq = bf.ap_add(diff_sq, bf.ap_mul(d, d, bits), bits)
        y_sq = bf.ap_add(y_sq, bf.ap_mul(yv, yv, bits), bits)
    diff_n = bf.ap_sqrt(diff_sq, bits)
    y_n = bf.ap_sqrt(y_sq, bits)
    if bf.ap_is_zero(y_n):
        return bf.ap_to_float(diff_n)
    return bf.ap_to_float(bf.ap_div(diff_n, y_n, bits))


# ---------------------------------------------------------------------------
# debug dump format: bit-exact, line oriented
# ---------------------------------------------------------------------------

def _ap_token(v):
    sign, man, exp = bf.ap_man_exp(v)
    if man == 0:
        return "0x0p+0"
    return f"{'-' if sign else ''}0x{man:x}p{exp:+d}"


def _parse_ap_token(tok):
    neg = tok.startswith("-")
    if neg:
        tok = tok[1:]
    if not tok.startswith("0x") or "p" not in tok:
        raise TableFormatError(f"bad big-float token {tok!r}")
    man_s, exp_s = tok[2:].split("p", 1)
    return bf.ap_from_man_exp(1 if neg else 0, int(man_s, 16), int(exp_s))


def write_matrix(mat, fp):
    """Textual dump: header ``rows cols precision``, then one row per line,
    elements space-separated, components comma-separated hex floats."""
    fp.write(f"{mat.rows} {mat.cols} {mat.prec.token}\n")
    if mat.prec.kind is Kind.AP:
        for i in range(mat.rows):
            row = mat.data[i * mat.cols:(i + 1) * mat.cols]
            fp.write(" ".join(_ap_token(v) for v in row) + "\n")
        return
    for i in range(mat.rows):
        row = mat.data[i].tolist()
        fp.write(" ".join(",".join(c.hex() for c in el) for el in row) + "\n")


def read_matrix(fp):
    header = fp.readline().split()
    if len(header) != 3:
        raise TableFormatError("bad matrix dump header")
    try:
        rows, cols = int(header[0]), int(header[1])
        prec = PrecisionSpec.parse(header[2])
    except ValueError as ex:
        raise TableFormatError(f"bad matrix dump header: {ex}") from None
    out = DenseMatrix.zeros(rows, cols, prec)
    for i in range(rows):
        toks = fp.readline().split()
        if len(toks) != cols:
            raise TableFormatError(f"row {i} has {len(toks)} elements, expected {cols}")
        for j, tok in enumerate(toks):
            if prec.kind is Kind.AP:
                _put(out, i, j, _parse_ap_token(tok))
            else:
                comps = tuple(float.fromhex(c) for c in tok.split(","))
                if len(comps) != _COMPONENTS[prec.kind]:
                    raise TableFormatError(f"element {i},{j} has {len(comps)} components")
                _put(out, i, j, comps)
    return out
