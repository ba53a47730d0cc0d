import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mpmm.eft import two_prod, two_sum
from mpmm.errors import RangeError

from oracles import exact_prod_matches, exact_sum_matches

reasonable = st.floats(min_value=-1e150, max_value=1e150,
                       allow_nan=False, allow_infinity=False)


def test_two_sum_below_last_bit():
    assert two_sum(1.0, 2.0 ** -60) == (1.0, 2.0 ** -60)


def test_two_sum_exact_cancellation():
    for a in (1.0, 3.5, 1e300, 2.0 ** -1000, 0.0):
        assert two_sum(a, -a) == (0.0, 0.0)


def test_two_prod_identity():
    for x in (1.0, -2.75, 1e-30, 12345.678):
        assert two_prod(x, 1.0) == (x, 0.0)


def test_two_prod_square_of_split_constant():
    v = float(2 ** 27 + 1)
    # (2^27+1)^2 = 2^54 + 2^28 + 1; the trailing 1 cannot fit the mantissa
    assert two_prod(v, v) == (float(2 ** 54 + 2 ** 28), 1.0)


def test_two_prod_tenth_squared_exact():
    p, e = two_prod(0.1, 0.1)
    assert exact_prod_matches(0.1, 0.1, p, e)
    assert e != 0.0


def test_random_exactness(rng):
    for _ in range(10000):
        a = rng.uniform(-1e12, 1e12) * 10.0 ** rng.randint(-12, 12)
        b = rng.uniform(-1e12, 1e12) * 10.0 ** rng.randint(-12, 12)
        s, e = two_sum(a, b)
        assert exact_sum_matches(a, b, s, e)
        p, e = two_prod(a, b)
        assert exact_prod_matches(a, b, p, e)


@settings(max_examples=300)
@given(reasonable, reasonable)
def test_two_sum_exactness_property(a, b):
    s, e = two_sum(a, b)
    assert exact_sum_matches(a, b, s, e)
    assert s == a + b


@settings(max_examples=300)
@given(reasonable, reasonable)
def test_two_prod_exactness_property(a, b):
    try:
        p, e = two_prod(a, b)
    except RangeError:
        assert a * b == 0.0 or abs(a * b) < 2.0 ** -969 or math.isinf(a * b)
        return
    assert exact_prod_matches(a, b, p, e)
    assert p == a * b


def test_two_sum_overflow_signals():
    with pytest.raises(RangeError):
        two_sum(1e308, 1e308)


def test_two_prod_overflow_signals():
    with pytest.raises(RangeError):
        two_prod(1e200, 1e200)
    with pytest.raises(RangeError):
        two_prod(2.0 ** 1000, 2.0 ** -100)  # splitter overflow on the large operand


def test_two_prod_underflow_signals():
    with pytest.raises(RangeError):
        two_prod(1e-200, 1e-200)
    assert two_prod(0.0, 1e-300) == (0.0, 0.0)


def test_nonfinite_inputs_rejected():
    with pytest.raises(ValueError):
        two_sum(float("nan"), 1.0)
    with pytest.raises(ValueError):
        two_prod(float("inf"), 1.0)
