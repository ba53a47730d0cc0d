"""The tuning pipeline: pick a block size by prediction, measure the three
algorithms, pick the winner; sweep grids of (precision, dimension, threads);
extract Strassen thresholds; persist everything.

A tuning-table file is line oriented, versioned, and bit-exact: all times
are hexadecimal floats.  Grammar (``#`` starts a comment)::

    mpmmtune v1
    total <hex>
    predtotal <hex>
    <kind>,<bits> <n> <threads> <best_nmin> <t_block> <t_predphase> \
        <t_predicted|-> <reldiff|-> <t_simple|-> <t_strassen|-> <winner>
    threshold <kind>,<bits> <threads> <n*>
    failed <kind>,<bits> <n> <threads> <message...>
"""

from dataclasses import dataclass, field
from typing import Optional

from .errors import TableFormatError
from .matrix import DenseMatrix, generate_test_pair
from .multiply import (Algorithm, AlgorithmChoice, DEFAULT_BLOCK_SIZE,
                       DEFAULT_STRASSEN_CUTOFF, _block_into, _simple_into,
                       matmul_strassen)
from .predict import select_block_size
from .scalar import Kind, PrecisionSpec
from .timing import TimingPolicy, measure

FORMAT_HEADER = "mpmmtune v1"

# Kind ordering used wherever tables are sorted for output.
_KIND_ORDER = {Kind.DD: 0, Kind.QD: 1, Kind.AP: 2}


def prec_sort_key(prec):
    return (_KIND_ORDER[prec.kind], prec.bits)


def rel_diff(predicted_s, actual_s):
    """|predicted - actual| / actual."""
    if actual_s <= 0.0:
        raise ValueError("actual time must be positive")
    return abs(predicted_s - actual_s) / actual_s


@dataclass
class TuningConfig:
    precisions: list
    dims: list
    block_candidates: list
    thread_counts: list
    strassen_cutoff: int = DEFAULT_STRASSEN_CUTOFF
    timing: TimingPolicy = field(default_factory=TimingPolicy)
    slice_multiplier: int = 2
    simple_limit: int = 512
    predict: bool = True
    out_path: Optional[str] = None

    def __post_init__(self):
        if not self.precisions or not self.dims or not self.block_candidates \
                or not self.thread_counts:
            raise ValueError("tuning grid lists must be nonempty")
        if any(n < 2 for n in self.dims):
            raise ValueError("tuned dimensions must be >= 2")
        if any(t < 1 for t in self.thread_counts):
            raise ValueError("thread counts must be positive")
        self.block_candidates = sorted(self.block_candidates)


@dataclass
class TuningResult:
    prec: PrecisionSpec
    n: int
    threads: int
    best_n_min: int
    block_time_s: float
    selection_time_s: float          # slice time of the chosen candidate
    predicted_s: Optional[float]     # None when prediction was skipped
    rel_diff: Optional[float]
    simple_time_s: Optional[float]   # None above the simple-size limit
    strassen_time_s: Optional[float]
    winner: AlgorithmChoice


@dataclass
class TuningFailure:
    prec: PrecisionSpec
    n: int
    threads: int
    message: str


@dataclass
class TuningTable:
    rows: list
    thresholds: dict                 # (PrecisionSpec, threads) -> n*
    total_tuning_time_s: float = 0.0
    prediction_total_s: float = 0.0
    failures: list = field(default_factory=list)


def _pick_winner(block_time, strassen_time, simple_time, best_n_min, cutoff):
    # Tie-break: blocked beats Strassen beats simple (cheaper memory first).
    entries = [(block_time, 0, AlgorithmChoice(Algorithm.BLOCK, n_min=best_n_min))]
    if strassen_time is not None:
        entries.append((strassen_time, 1,
                        AlgorithmChoice(Algorithm.STRASSEN, n_min=best_n_min, cutoff=cutoff)))
    if simple_time is not None:
        entries.append((simple_time, 2, AlgorithmChoice(Algorithm.SIMPLE)))
    return min(entries, key=lambda e: (e[0], e[1]))[2]


def _measure_block(a, b, n_min, threads, policy):
    from .predict import _zero
    out = DenseMatrix.zeros(a.rows, b.cols, a.prec)
    return measure(lambda: _block_into(a, b, out, n_min, threads),
                   policy, setup=lambda: _zero(out))


def _measure_simple(a, b, threads, policy):
    from .predict import _zero
    out = DenseMatrix.zeros(a.rows, b.cols, a.prec)
    return measure(lambda: _simple_into(a, b, out, threads),
                   policy, setup=lambda: _zero(out))


def tune_one(prec, n, threads, cfg, _accum=None):
    """Tune a single grid point.

    Step 1 selects the block size (predicted, or exhaustively measured
    with ``cfg.predict`` off); step 2 measures the three algorithms;
    step 3 picks the fastest with the documented tie-break.
    """
    a, b = generate_test_pair(n, prec)
    policy = cfg.timing

    if cfg.predict:
        best_n_min, records = select_block_size(
            a, b, cfg.block_candidates, threads, policy, cfg.slice_multiplier)
        chosen = next(r for r in records if r.n_min == best_n_min)
        selection_time = chosen.slice_time_s
        predicted = chosen.predicted_full_s
        phase_cost = sum(r.slice_time_s for r in records)
    else:
        timed = [(_measure_block(a, b, c, threads, policy), c)
                 for c in cfg.block_candidates]
        best_time, best_n_min = min(timed)
        selection_time = phase_cost = sum(t for t, _ in timed)
        predicted = None
    if _accum is not None:
        _accum["selection"] = _accum.get("selection", 0.0) + phase_cost

    block_time = _measure_block(a, b, best_n_min, threads, policy)
    diff = rel_diff(predicted, block_time) if predicted is not None else None

    simple_time = None
    if n <= cfg.simple_limit:
        simple_time = _measure_simple(a, b, threads, policy)

    strassen_time = measure(
        lambda: matmul_strassen(a, b, cfg.strassen_cutoff, best_n_min, threads), policy)

    return TuningResult(
        prec=prec, n=n, threads=threads, best_n_min=best_n_min,
        block_time_s=block_time, selection_time_s=selection_time,
        predicted_s=predicted, rel_diff=diff,
        simple_time_s=simple_time, strassen_time_s=strassen_time,
        winner=_pick_winner(block_time, strassen_time, simple_time,
                            best_n_min, cfg.strassen_cutoff),
    )


def tune_sweep(cfg):
    """Tune every (precision, dimension, threads) grid point, serially.

    Failed points are recorded as gaps; completed rows are kept.  The
    prediction-phase cost is accumulated separately so the saving against
    exhaustive block-size search stays checkable.
    """
    clock = cfg.timing.clock
    t_start = clock()
    rows = []
    failures = []
    accum = {}
    warmed = set()
    warm_n = max(2, min(16, min(cfg.dims)))
    for prec in sorted(cfg.precisions, key=prec_sort_key):
        for n in sorted(cfg.dims):
            for threads in sorted(cfg.thread_counts):
                if (prec, threads) not in warmed:
                    wa, wb = generate_test_pair(warm_n, prec)
                    out = DenseMatrix.zeros(warm_n, warm_n, prec)
                    _block_into(wa, wb, out, min(cfg.block_candidates), threads)
                    warmed.add((prec, threads))
                try:
                    rows.append(tune_one(prec, n, threads, cfg, _accum=accum))
                except Exception as ex:  # noqa: BLE001 - grid gaps are recorded
                    failures.append(TuningFailure(prec, n, threads, str(ex)))
    thresholds = {}
    for prec in cfg.precisions:
        for threads in cfg.thread_counts:
            found = extract_threshold(rows, prec, threads)
            if found is not None:
                thresholds[(prec, threads)] = found
    table = TuningTable(
        rows=rows, thresholds=thresholds,
        total_tuning_time_s=clock() - t_start,
        prediction_total_s=accum.get("selection", 0.0),
        failures=failures,
    )
    if cfg.out_path:
        save_table(table, cfg.out_path)
    return table


def extract_threshold(rows, prec, threads):
    """Smallest swept n at and above which Strassen always wins, or None."""
    pts = sorted((r.n, r.winner.kind) for r in rows
                 if r.prec == prec and r.threads == threads)
    found = None
    for n, kind in reversed(pts):
        if kind is Algorithm.STRASSEN:
            found = n
        else:
            break
    return found


# ---------------------------------------------------------------------------
# persistence
# ---------------------------------------------------------------------------

def _prec_token(prec):
    return f"{prec.kind.value},{prec.bits}"


def _parse_prec(tok):
    try:
        kind_s, bits_s = tok.split(",")
        kind = Kind(kind_s)
        bits = int(bits_s)
    except ValueError:
        raise TableFormatError(f"bad precision field {tok!r}") from None
    if kind is Kind.DD:
        return PrecisionSpec.dd()
    if kind is Kind.QD:
        return PrecisionSpec.qd()
    return PrecisionSpec.ap(bits)


def _hex(v):
    return "-" if v is None else float(v).hex()


def _unhex(tok):
    if tok == "-":
        return None
    try:
        return float.fromhex(tok)
    except ValueError:
        raise TableFormatError(f"bad hex float {tok!r}") from None


def save_table(table, path):
    with open(path, "w", encoding="utf-8") as fp:
        fp.write(FORMAT_HEADER + "\n")
        fp.write(f"total {_hex(table.total_tuning_time_s)}\n")
        fp.write(f"predtotal {_hex(table.prediction_total_s)}\n")
        for r in table.rows:
            fp.write(" ".join([
                _prec_token(r.prec), str(r.n), str(r.threads), str(r.best_n_min),
                _hex(r.block_time_s), _hex(r.selection_time_s), _hex(r.predicted_s),
                _hex(r.rel_diff), _hex(r.simple_time_s), _hex(r.strassen_time_s),
                r.winner.token,
            ]) + "\n")
        for (prec, threads), n_star in table.thresholds.items():
            fp.write(f"threshold {_prec_token(prec)} {threads} {n_star}\n")
        for f in table.failures:
            fp.write(f"failed {_prec_token(f.prec)} {f.n} {f.threads} {f.message}\n")


def load_table(path):
    rows = []
    thresholds = {}
    failures = []
    total = 0.0
    predtotal = 0.0
    with open(path, "r", encoding="utf-8") as fp:
        header = None
        for raw in fp:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if header is None:
                if line != FORMAT_HEADER:
                    raise TableFormatError(f"unknown table format/version: {line!r}")
                header = line
                continue
            toks = line.split()
            if toks[0] == "total":
                total = _unhex(toks[1])
            elif toks[0] == "predtotal":
                predtotal = _unhex(toks[1])
            elif toks[0] == "threshold":
                if len(toks) != 4:
                    raise TableFormatError(f"bad threshold line: {line!r}")
                thresholds[(_parse_prec(toks[1]), int(toks[2]))] = int(toks[3])
            elif toks[0] == "failed":
                if len(toks) < 4:
                    raise TableFormatError(f"bad failed line: {line!r}")
                failures.append(TuningFailure(
                    _parse_prec(toks[1]), int(toks[2]), int(toks[3]),
                    " ".join(toks[4:])))
            else:
                if len(toks) != 11:
                    raise TableFormatError(f"bad result row ({len(toks)} fields): {line!r}")
                rows.append(TuningResult(
                    prec=_parse_prec(toks[0]), n=int(toks[1]), threads=int(toks[2]),
                    best_n_min=int(toks[3]),
                    block_time_s=_unhex(toks[4]), selection_time_s=_unhex(toks[5]),
                    predicted_s=_unhex(toks[6]), rel_diff=_unhex(toks[7]),
                    simple_time_s=_unhex(toks[8]), strassen_time_s=_unhex(toks[9]),
                    winner=AlgorithmChoice.parse(toks[10]),
                ))
        if header is None:
            raise TableFormatError("empty tuning-table file")
    return TuningTable(rows=rows, thresholds=thresholds,
                       total_tuning_time_s=total, prediction_total_s=predtotal,
                       failures=failures)


# ---------------------------------------------------------------------------
# lookup
# ---------------------------------------------------------------------------

def lookup_best(table, prec, n, threads):
    """Best known algorithm for (prec, n, threads).

    Returns ``(choice, source)`` where source is one of ``exact``,
    ``nearest``, ``threshold`` or ``default`` so callers can see which
    fallback produced the answer.
    """
    same = [r for r in table.rows if r.prec == prec and r.threads == threads]
    exact = [r for r in same if r.n == n]
    if exact:
        return exact[0].winner, "exact"
    smaller = [r for r in same if r.n <= n]
    if smaller:
        return max(smaller, key=lambda r: r.n).winner, "nearest"
    n_star = table.thresholds.get((prec, threads))
    if n_star is not None and n >= n_star:
        return AlgorithmChoice(Algorithm.STRASSEN, n_min=DEFAULT_BLOCK_SIZE,
                               cutoff=DEFAULT_STRASSEN_CUTOFF), "threshold"
    return AlgorithmChoice(Algorithm.BLOCK, n_min=DEFAULT_BLOCK_SIZE), "default"
