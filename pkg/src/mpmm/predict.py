"""Runtime prediction for the blocked algorithm.

A full-size blocked multiplication is estimated by timing the product of
a short leading slice of A against all of B, then scaling by the row
ratio.  Keeping B whole keeps the cache hit pattern of the full product,
which is what makes the extrapolation accurate; the slice height is
``slice_multiplier * n_min`` rows (clamped to m), two block rows by
default, exposed as a knob in case a host behaves differently.

Callers must not run other timed work concurrently with these functions.
"""

from dataclasses import dataclass

from .matrix import DenseMatrix, leading_rows
from .multiply import _block_into
from .scalar import Kind
from .timing import TimingPolicy, measure

DEFAULT_SLICE_MULTIPLIER = 2


@dataclass(frozen=True)
class PredictionRecord:
    """One block-size candidate: measured slice time and extrapolation."""
    n_min: int
    slice_rows: int
    full_rows: int
    slice_time_s: float
    predicted_full_s: float

    @property
    def scale_factor(self):
        return self.full_rows / self.slice_rows


def slice_rows_for(n_min, m, slice_multiplier=DEFAULT_SLICE_MULTIPLIER):
    """Rows of A used for the timed slice: min(slice_multiplier*n_min, m)."""
    if n_min < 1 or m < 1:
        raise ValueError("block size and row count must be positive")
    if slice_multiplier < 1:
        raise ValueError("slice multiplier must be positive")
    return min(slice_multiplier * n_min, m)


def predict_full_time(slice_time_s, m, n_min, slice_multiplier=DEFAULT_SLICE_MULTIPLIER):
    """Extrapolate a slice time to the full row count."""
    if slice_time_s <= 0.0:
        raise ValueError("slice time must be positive")
    return slice_time_s * (m / slice_rows_for(n_min, m, slice_multiplier))


def _zero(mat):
    if mat.prec.kind is Kind.AP:
        from .bigfloat import AP_ZERO
        for i in range(len(mat.data)):
            mat.data[i] = AP_ZERO
    else:
        mat.data.fill(0.0)


def time_slice(a, b, n_min, threads=1, policy=None,
               slice_multiplier=DEFAULT_SLICE_MULTIPLIER):
    """Seconds for the leading-rows slice of ``a`` times all of ``b``.

    The product itself is discarded; allocation and buffer reset stay
    outside the timed region.
    """
    policy = policy or TimingPolicy()
    rows = slice_rows_for(n_min, a.rows, slice_multiplier)
    a_slice = leading_rows(a, rows)
    out = DenseMatrix.zeros(rows, b.cols, a.prec)
    elapsed = measure(lambda: _block_into(a_slice, b, out, n_min, threads),
                      policy, setup=lambda: _zero(out))
    return elapsed, rows


def choose_best(records):
    """Smallest predicted time; ties go to the smaller block size."""
    return min(records, key=lambda r: (r.predicted_full_s, r.n_min)).n_min


def select_block_size(a, b, candidates, threads=1, policy=None,
                      slice_multiplier=DEFAULT_SLICE_MULTIPLIER):
    """Predict the full-size time for each candidate block size.

    Returns ``(best_n_min, records)`` with one record per candidate;
    candidates must be nonempty and ascending.
    """
    if not candidates:
        raise ValueError("need at least one block-size candidate")
    if list(candidates) != sorted(candidates):
        raise ValueError("candidates must be sorted ascending")
    records = []
    for n_min in candidates:
        elapsed, rows = time_slice(a, b, n_min, threads, policy, slice_multiplier)
        records.append(PredictionRecord(
            n_min=n_min,
            slice_rows=rows,
            full_rows=a.rows,
            slice_time_s=elapsed,
            predicted_full_s=elapsed * (a.rows / rows),
        ))
    return choose_best(records), records
