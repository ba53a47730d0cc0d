"""Extended-precision dense matrix multiplication with runtime-predicted
block-size autotuning.

Double-double, quad-double and arbitrary-precision matrices; simple,
blocked and Strassen products; a predictor that estimates full-size
blocked runtimes from a short timed slice; and a tuner that sweeps
(precision, dimension, threads) grids and persists the winners.
"""

__version__ = "0.1.0"

from .backend import HAVE_EXT, available_backends, backend_name, use as use_backend
from .errors import (MeasurementError, MpmmError, PrecisionMismatchError,
                     RangeError, ShapeError, TableFormatError)
from .eft import quick_two_sum, two_prod, two_sum
from .matrix import (BlockPartition, DenseMatrix, frobenius_norm,
                     frobenius_rel_diff, generate_test_pair, leading_rows,
                     make_partition, read_matrix, write_matrix)
from .multiply import (Algorithm, AlgorithmChoice, StrassenStats,
                       matmul_block, matmul_simple, matmul_strassen, run_choice)
from .predict import (PredictionRecord, choose_best, predict_full_time,
                      select_block_size, slice_rows_for, time_slice)
from .scalar import (Kind, PrecisionSpec, Scalar, scalar_add, scalar_div,
                     scalar_mul, scalar_neg, scalar_sqrt, scalar_sub)
from .timing import TimingPolicy, measure
from .tune import (TuningConfig, TuningFailure, TuningResult, TuningTable,
                   extract_threshold, load_table, lookup_best, rel_diff,
                   save_table, tune_one, tune_sweep)

__all__ = [
    "__version__",
    "HAVE_EXT", "available_backends", "backend_name", "use_backend",
    "MpmmError", "RangeError", "PrecisionMismatchError", "ShapeError",
    "TableFormatError", "MeasurementError",
    "two_sum", "two_prod", "quick_two_sum",
    "Kind", "PrecisionSpec", "Scalar",
    "scalar_add", "scalar_sub", "scalar_mul", "scalar_div", "scalar_sqrt", "scalar_neg",
    "DenseMatrix", "BlockPartition", "make_partition", "generate_test_pair",
    "leading_rows", "frobenius_norm", "frobenius_rel_diff", "write_matrix", "read_matrix",
    "Algorithm", "AlgorithmChoice", "StrassenStats",
    "matmul_simple", "matmul_block", "matmul_strassen", "run_choice",
    "TimingPolicy", "measure",
    "PredictionRecord", "slice_rows_for", "predict_full_time", "time_slice",
    "select_block_size", "choose_best",
    "TuningConfig", "TuningResult", "TuningTable", "TuningFailure",
    "tune_one", "tune_sweep", "extract_threshold", "rel_diff",
    "save_table", "load_table", "lookup_best",
]
