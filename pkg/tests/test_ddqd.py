import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mpf, workprec

from mpmm import ddqd
from mpmm.errors import RangeError

from oracles import dd_to_mp, qd_to_mp

# Observed worst cases sit well below these pins (mul ~2^-107, add 2^-105,
# div ~2^-104.8); 2^-104 is the documented contract (about 2 ulp).
DD_TOL = 2.0 ** -104
QD_TOL = 2.0 ** -208

mid = st.floats(min_value=-1e8, max_value=1e8, allow_nan=False, allow_infinity=False)
tiny = st.floats(min_value=-1e-9, max_value=1e-9, allow_nan=False, allow_infinity=False)


def make_dd(a, b):
    return ddqd.dd_add((a, 0.0), (b, 0.0))


def make_qd(a, b):
    q = ddqd.qd_add(ddqd.qd_from_float(a), ddqd.qd_from_float(b))
    q = ddqd.qd_add(q, ddqd.qd_from_float(a * 2.0 ** -70))
    return ddqd.qd_add(q, ddqd.qd_from_float(b * 2.0 ** -120))


def rel_err_mp(got, want):
    if want == 0:
        return abs(got)
    return abs((got - want) / want)


# ---------------------------------------------------------------------------
# double-double
# ---------------------------------------------------------------------------

def test_dd_add_representable_pair():
    assert ddqd.dd_add((1.0, 0.0), (2.0 ** -100, 0.0)) == (1.0, 2.0 ** -100)


def test_dd_exact_cancellation():
    x = make_dd(3.7, 1e-20)
    assert ddqd.dd_sub(x, x) == (0.0, 0.0)


def test_dd_ops_against_oracle(rng):
    worst = {"add": 0.0, "mul": 0.0, "div": 0.0}
    with workprec(280):
        for _ in range(5000):
            x = make_dd(rng.uniform(-1e6, 1e6), rng.uniform(-1e-10, 1e-10))
            y = make_dd(rng.uniform(-1e6, 1e6), rng.uniform(-1e-10, 1e-10))
            xm, ym = dd_to_mp(x), dd_to_mp(y)
            worst["add"] = max(worst["add"], rel_err_mp(dd_to_mp(ddqd.dd_add(x, y)), xm + ym))
            worst["mul"] = max(worst["mul"], rel_err_mp(dd_to_mp(ddqd.dd_mul(x, y)), xm * ym))
            worst["div"] = max(worst["div"], rel_err_mp(dd_to_mp(ddqd.dd_div(x, y)), xm / ym))
    for name, err in worst.items():
        assert err <= DD_TOL, f"dd {name} error {float(err):.3e}"


def test_dd_sqrt_against_oracle(rng):
    with workprec(280):
        for _ in range(2000):
            x = make_dd(rng.uniform(1e-6, 1e12), rng.uniform(0, 1e-18))
            got = dd_to_mp(ddqd.dd_sqrt(x))
            want = dd_to_mp(x) ** mpf(0.5)
            assert rel_err_mp(got, want) <= DD_TOL
    assert ddqd.dd_sqrt((0.0, 0.0)) == (0.0, 0.0)
    with pytest.raises(ValueError):
        ddqd.dd_sqrt((-1.0, 0.0))


@settings(max_examples=400)
@given(mid, tiny, mid, tiny)
def test_dd_results_normalized(a, e1, b, e2):
    x = make_dd(a, e1)
    y = make_dd(b, e2)
    for op in (ddqd.dd_add, ddqd.dd_sub, ddqd.dd_mul):
        hi, lo = op(x, y)
        assert hi + lo == hi, f"{op.__name__} produced non-normalized pair"


def test_dd_pure_function():
    x = make_dd(1.25, 3e-20)
    y = make_dd(-7.5, 1e-22)
    assert ddqd.dd_mul(x, y) == ddqd.dd_mul(x, y)
    assert ddqd.dd_add(x, y) == ddqd.dd_add(x, y)


def test_dd_overflow_signals():
    big = (1e308, 0.0)
    with pytest.raises(RangeError):
        ddqd.dd_add(big, big)
    with pytest.raises(ZeroDivisionError):
        ddqd.dd_div((1.0, 0.0), (0.0, 0.0))


def test_dd_mul_pow2_exact():
    x = make_dd(3.1415, 2.2e-17)
    assert ddqd.dd_mul_pow2(x, 0.5) == (x[0] * 0.5, x[1] * 0.5)


# ---------------------------------------------------------------------------
# quad-double
# ---------------------------------------------------------------------------

def test_qd_ops_against_oracle(rng):
    worst = {"add": 0.0, "mul": 0.0, "div": 0.0}
    with workprec(500):
        for _ in range(3000):
            x = make_qd(rng.uniform(-1e6, 1e6), rng.uniform(-1e-12, 1e-12))
            y = make_qd(rng.uniform(-1e6, 1e6), rng.uniform(-1e-12, 1e-12))
            xm, ym = qd_to_mp(x), qd_to_mp(y)
            worst["add"] = max(worst["add"], rel_err_mp(qd_to_mp(ddqd.qd_add(x, y)), xm + ym))
            worst["mul"] = max(worst["mul"], rel_err_mp(qd_to_mp(ddqd.qd_mul(x, y)), xm * ym))
            worst["div"] = max(worst["div"], rel_err_mp(qd_to_mp(ddqd.qd_div(x, y)), xm / ym))
    for name, err in worst.items():
        assert err <= QD_TOL, f"qd {name} error 2^{math.log2(float(err)):.1f}"


def test_qd_sqrt_against_oracle(rng):
    with workprec(500):
        for _ in range(500):
            x = make_qd(rng.uniform(1e-3, 1e9), rng.uniform(0, 1e-15))
            got = qd_to_mp(ddqd.qd_sqrt(x))
            want = qd_to_mp(x) ** mpf(0.5)
            assert rel_err_mp(got, want) <= QD_TOL
    with pytest.raises(ValueError):
        ddqd.qd_sqrt((-4.0, 0.0, 0.0, 0.0))


def test_qd_components_non_overlapping(rng):
    for _ in range(500):
        x = make_qd(rng.uniform(-1e6, 1e6), rng.uniform(-1e-10, 1e-10))
        y = make_qd(rng.uniform(-1e6, 1e6), rng.uniform(-1e-10, 1e-10))
        q = ddqd.qd_mul(x, y)
        for i in range(3):
            hi, lo = q[i], q[i + 1]
            assert hi + lo == hi, f"components {i},{i+1} overlap: {q}"


def test_qd_exact_cancellation():
    x = make_qd(9.75, -3e-21)
    assert ddqd.qd_sub(x, x) == (0.0, 0.0, 0.0, 0.0)


def test_qd_zero_behavior():
    z = ddqd.QD_ZERO
    x = make_qd(2.0, 1e-20)
    assert ddqd.qd_add(x, z) == x
    assert ddqd.qd_mul(x, z) == z
    assert ddqd.qd_sqrt(z) == z
    with pytest.raises(ZeroDivisionError):
        ddqd.qd_div(x, z)


def test_qd_integer_arithmetic_is_exact():
    a = ddqd.qd_from_float(123456.0)
    b = ddqd.qd_from_float(-987.0)
    assert ddqd.qd_mul(a, b) == ddqd.qd_from_float(123456.0 * -987.0)
    assert ddqd.qd_add(a, b) == ddqd.qd_from_float(123456.0 - 987.0)
