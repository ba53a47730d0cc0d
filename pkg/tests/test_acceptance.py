"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Criteria 6 and 7 are hardware-dependent and CI-soft: a miss emits a
warning report instead of failing the build.  Everything else is hard.
Run with ``pytest tests/test_acceptance.py -v -s``.
"""

import math
import random
import sys
import time
import warnings

import pytest
from mpmath import workprec

import mpmm.cli as cli
from mpmm import ddqd
from mpmm.eft import two_prod, two_sum
from mpmm.matrix import frobenius_rel_diff, generate_test_pair
from mpmm.multiply import (Algorithm, AlgorithmChoice, matmul_block,
                           matmul_simple, matmul_strassen)
from mpmm.predict import predict_full_time, select_block_size
from mpmm.scalar import PrecisionSpec
from mpmm.timing import TimingPolicy
from mpmm.tune import (TuningFailure, TuningResult, TuningTable,
                       extract_threshold, load_table, rel_diff, save_table)

from conftest import random_int_matrix
from oracles import dd_to_mp, exact_prod_matches, exact_sum_matches

DD = PrecisionSpec.dd()
U_DD = 2.0 ** -106


def report(num, ok, detail, soft=False):
    status = "PASS" if ok else ("WARN" if soft else "FAIL")
    # written to the real stdout so the line survives pytest's capture
    print(f"\nACCEPTANCE {num}: {status} - {detail}", file=sys.__stdout__)
    if ok:
        return
    if soft:
        warnings.warn(f"criterion {num} (CI-soft) missed: {detail}")
    else:
        pytest.fail(f"criterion {num}: {detail}")


def test_criterion_1_error_free_transforms():
    rng = random.Random(1)
    t0 = time.perf_counter()
    failures = 0
    for _ in range(1_000_000):
        a = math.ldexp(rng.uniform(-1.0, 1.0), rng.randint(-80, 80))
        b = math.ldexp(rng.uniform(-1.0, 1.0), rng.randint(-80, 80))
        s, e = two_sum(a, b)
        if not exact_sum_matches(a, b, s, e):
            failures += 1
        p, e = two_prod(a, b)
        if not exact_prod_matches(a, b, p, e):
            failures += 1
    elapsed = time.perf_counter() - t0
    report(1, failures == 0 and elapsed < 60.0,
           f"1e6 random pairs, {failures} failures, {elapsed:.1f} s (< 60 s)")


def test_criterion_2_dd_arithmetic_accuracy():
    rng = random.Random(2)
    tol = 2.0 ** -104
    worst = 0.0
    failures = 0
    with workprec(280):
        for _ in range(100_000):
            x = ddqd.dd_add((rng.uniform(-1e6, 1e6), 0.0),
                            (rng.uniform(-1e-10, 1e-10), 0.0))
            y = ddqd.dd_add((rng.uniform(-1e6, 1e6), 0.0),
                            (rng.uniform(-1e-10, 1e-10), 0.0))
            xm, ym = dd_to_mp(x), dd_to_mp(y)
            for got, want in ((dd_to_mp(ddqd.dd_add(x, y)), xm + ym),
                              (dd_to_mp(ddqd.dd_mul(x, y)), xm * ym)):
                if want == 0:
                    continue
                err = abs((got - want) / want)
                worst = max(worst, err)
                if err > tol:
                    failures += 1
    report(2, failures == 0,
           f"1e5 random pairs vs 256-bit oracle, {failures} failures, "
           f"worst 2^{math.log2(float(worst)):.1f} (bound 2^-104)")


def test_criterion_3_kernel_equivalence_exact():
    rng = random.Random(3)
    bad = []
    for n in (2, 3, 8, 16, 17):
        a = random_int_matrix(rng, n, n, DD, bound=8)
        b = random_int_matrix(rng, n, n, DD, bound=8)
        ref = matmul_simple(a, b)
        for n_min in (2, 4, n):
            if matmul_block(a, b, n_min) != ref:
                bad.append(f"block n={n} n_min={n_min}")
        if matmul_strassen(a, b, cutoff=2, leaf_n_min=2) != ref:
            bad.append(f"strassen n={n}")
    for n in (8, 64):
        a, b = generate_test_pair(n, DD)
        if matmul_block(a, b, n) != matmul_simple(a, b):
            bad.append(f"single-block n={n}")
    report(3, not bad, f"integer and single-block equivalence; mismatches: {bad or 'none'}")


def test_criterion_4_kernel_equivalence_rounded():
    t0 = time.perf_counter()
    bad = []
    details = []
    for n in (63, 64, 100, 257):
        a, b = generate_test_pair(n, DD)
        ref = matmul_simple(a, b, threads=2)
        d_str = frobenius_rel_diff(matmul_strassen(a, b, 64, 64, threads=2), ref)
        d_blk = frobenius_rel_diff(matmul_block(a, b, 64, threads=2), ref)
        details.append(f"n={n}: strassen {d_str:.2e} block {d_blk:.2e}")
        if d_str > 100.0 * U_DD * n:
            bad.append(f"strassen n={n} {d_str:.3e} > {100.0 * U_DD * n:.3e}")
        if d_blk > 4.0 * n * U_DD:
            bad.append(f"block n={n} {d_blk:.3e}")
    elapsed = time.perf_counter() - t0
    report(4, not bad and elapsed < 300.0,
           f"{'; '.join(details)}; {elapsed:.1f} s (< 300 s); violations: {bad or 'none'}")


def test_criterion_5_prediction_arithmetic():
    checks = [
        (abs(predict_full_time(5.77, 1024, 64) - 46.16) < 1e-9, "46.16"),
        (abs(predict_full_time(5.77, 1024, 64) - 46.1) / 46.1 < 0.002, "within 0.2% of 46.1"),
        (abs(predict_full_time(32.5, 1024, 128) - 130.0) < 1e-9, "130.0"),
        (round(100 * rel_diff(46.1, 45.97), 2) == 0.28, "0.28%"),
        (round(100 * rel_diff(13.8, 14.66), 2) == 5.87, "5.87%"),
    ]
    bad = [label for ok, label in checks if not ok]
    report(5, not bad, f"published-value spot checks; failed: {bad or 'none'}")


def test_criterion_6_prediction_accuracy_desk_scale():
    candidates = [16, 32, 64, 128]
    # Shared hosts show multi-second CPU-steal windows; min-of-5 plus
    # measuring each candidate's slice and full run back to back keeps a
    # slowdown on the ratio's two sides correlated, so it cancels.
    policy = TimingPolicy(warmup_runs=1, measured_runs=5, aggregator="min")
    from mpmm.predict import time_slice
    from mpmm.tune import _measure_block
    worst_rel = 0.0
    chosen_gap = 0.0
    details = []
    for n in (256, 512):
        a, b = generate_test_pair(n, DD)
        rels = {}
        full = {}
        for c in candidates:
            slice_s, _rows = time_slice(a, b, c, 1, policy)
            full[c] = _measure_block(a, b, c, 1, policy)
            rels[c] = rel_diff(predict_full_time(slice_s, n, c), full[c])
        best, _records = select_block_size(a, b, candidates, 1, policy)
        worst_rel = max(worst_rel, max(rels.values()))
        gap = full[best] / min(full.values()) - 1.0
        chosen_gap = max(chosen_gap, gap)
        details.append(f"n={n}: best={best} rels=" +
                       ",".join(f"{c}:{rels[c]:.1%}" for c in candidates) +
                       f" gap={gap:.1%}")
    ok = worst_rel <= 0.15 and chosen_gap <= 0.10
    report(6, ok, f"{'; '.join(details)} (bounds: rel<=15%, gap<=10%)", soft=True)


def test_criterion_7_tuning_cost_saving():
    candidates = [16, 32, 64, 128]
    policy = TimingPolicy(warmup_runs=1, measured_runs=5, aggregator="min")
    a, b = generate_test_pair(256, DD)
    _, records = select_block_size(a, b, candidates, 1, policy)
    prediction_phase = sum(r.slice_time_s for r in records)
    from mpmm.tune import _measure_block
    exhaustive_phase = sum(_measure_block(a, b, c, 1, policy) for c in candidates)
    ratio = prediction_phase / exhaustive_phase
    report(7, ratio <= 0.7,
           f"prediction {prediction_phase:.2f} s vs exhaustive {exhaustive_phase:.2f} s, "
           f"ratio {ratio:.2f} (<= 0.70)", soft=True)


def test_criterion_8_threads_invariance():
    a, b = generate_test_pair(128, DD)
    base = (matmul_simple(a, b, 1), matmul_block(a, b, 32, 1),
            matmul_strassen(a, b, 64, 32, 1))
    bad = []
    for threads in (2, 4):
        if matmul_simple(a, b, threads) != base[0]:
            bad.append(f"simple@{threads}")
        if matmul_block(a, b, 32, threads) != base[1]:
            bad.append(f"block@{threads}")
        if matmul_strassen(a, b, 64, 32, threads) != base[2]:
            bad.append(f"strassen@{threads}")
    report(8, not bad, f"dd n=128, threads 1/2/4 bit-identical; mismatches: {bad or 'none'}")


def test_criterion_9_threshold_and_persistence(tmp_path):
    bad = []

    def synth(winner_map):
        rows = []
        for n, is_str in winner_map.items():
            rows.append(TuningResult(
                prec=DD, n=n, threads=1, best_n_min=8, block_time_s=1.0,
                selection_time_s=0.2, predicted_s=1.0, rel_diff=0.0,
                simple_time_s=None, strassen_time_s=0.5 if is_str else 2.0,
                winner=AlgorithmChoice(Algorithm.STRASSEN, n_min=8, cutoff=64)
                if is_str else AlgorithmChoice(Algorithm.BLOCK, n_min=8)))
        return rows

    if extract_threshold(synth({64: False, 128: True, 256: True, 512: True}), DD, 1) != 128:
        bad.append("suffix rule")
    if extract_threshold(synth({64: False, 128: False}), DD, 1) is not None:
        bad.append("absent threshold")
    if extract_threshold(synth({63: True, 64: True, 128: True}), DD, 1) != 63:
        bad.append("threshold at lowest grid point")

    table = TuningTable(
        rows=synth({64: False, 128: True}),
        thresholds={(DD, 1): 128}, total_tuning_time_s=12.5,
        prediction_total_s=1.25,
        failures=[TuningFailure(DD, 512, 4, "gap")])
    p1 = tmp_path / "a.tbl"
    p2 = tmp_path / "b.tbl"
    save_table(table, str(p1))
    if load_table(str(p1)) != table:
        bad.append("round trip")
    save_table(load_table(str(p1)), str(p2))
    if p1.read_text() != p2.read_text():
        bad.append("re-emission")

    fixture = "\n".join([
        "mpmmtune v1",
        "total " + (45.97).hex(),
        "predtotal " + (5.77).hex(),
        f"dd,106 1024 1 64 {(45.97).hex()} {(5.77).hex()} {(46.1).hex()} "
        f"{(0.0028).hex()} - {(25.54).hex()} strassen:64/64",
        f"ap,128 1024 2 32 {(67.72).hex()} {(4.43).hex()} {(70.8).hex()} "
        f"{(0.0455).hex()} - {(88.15).hex()} block:32",
        "threshold dd,106 1 64",
    ]) + "\n"
    p3 = tmp_path / "fixture.tbl"
    p3.write_text(fixture)
    loaded = load_table(str(p3))
    if not (loaded.rows[0].block_time_s == 45.97
            and loaded.rows[0].winner.kind is Algorithm.STRASSEN
            and loaded.rows[1].winner.kind is Algorithm.BLOCK
            and loaded.thresholds[(DD, 1)] == 64):
        bad.append("fixture parse")
    p4 = tmp_path / "fixture2.tbl"
    save_table(loaded, str(p4))
    if p4.read_text() != fixture:
        bad.append("fixture re-emission")

    report(9, not bad, f"synthetic thresholds + persistence; failed: {bad or 'none'}")


def test_criterion_10_end_to_end_smoke(tmp_path, capsys):
    out = tmp_path / "smoke.tbl"
    t0 = time.perf_counter()
    rc = cli.main(["tune", "--prec", "dd,ap:128", "--dims", "64,128",
                   "--nmin", "8,16,32", "--threads", "1,2", "--out", str(out)])
    elapsed = time.perf_counter() - t0
    ok = rc == cli.EX_OK
    table = load_table(str(out)) if ok else None
    if ok:
        ok = len(table.rows) + len(table.failures) == 8 and len(table.rows) == 8
        ok = ok and (out.parent / (out.name + ".csv")).exists()
    if ok:
        rc2 = cli.main(["report", "--in", str(out), "--format", "winners"])
        grid = capsys.readouterr().out
        ok = rc2 == cli.EX_OK and "?" not in grid
        for t in (1, 2):
            ok = ok and f"winners for threads={t}" in grid
        for n in (64, 128):
            ok = ok and f"\n{n}" in grid
    ok = ok and elapsed < 900.0
    report(10, ok, f"tune 8 grid points + winners grid in {elapsed:.1f} s (< 900 s)")
