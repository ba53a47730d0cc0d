"""Double-double and quad-double arithmetic on plain float tuples.

A double-double value is an unevaluated sum ``hi + lo`` of two doubles with
``fl(hi + lo) == hi`` (~106 mantissa bits); a quad-double is four pairwise
non-overlapping doubles in descending magnitude (~212 bits).

The double-double operations use the accurate double-word algorithms
(worst case ~3 units in the 106-bit last place).  The quad-double
operations collect exact partial terms and compress them with repeated
error-free vector passes followed by a renormalization; this keeps the
whole code path branch-for-branch identical to the compiled kernels.

This module is the reference implementation: the compiled kernel mirrors
the exact same floating-point operation sequences, so both produce
bit-identical results.
"""

import math

from .eft import _quick_two_sum_raw, _two_prod_raw, _two_sum_raw
from .errors import RangeError

DD_ZERO = (0.0, 0.0)
QD_ZERO = (0.0, 0.0, 0.0, 0.0)

# Compression passes for quad-double term sums; each pass gains roughly one
# factor of 2^-53 in the captured precision, four passes overshoot 212 bits.
_QD_PASSES = 4


def _check_dd(hi, lo):
    if not math.isfinite(hi):
        raise RangeError("double-double result overflowed")
    return hi, lo


def _check_qd(q):
    if not math.isfinite(q[0]):
        raise RangeError("quad-double result overflowed")
    return q


# ---------------------------------------------------------------------------
# double-double
# ---------------------------------------------------------------------------

def dd_from_float(a):
    return float(a), 0.0


def dd_normalize(hi, lo):
    return _quick_two_sum_raw(hi, lo)


def dd_to_float(x):
    return x[0] + x[1]


def dd_neg(x):
    return -x[0], -x[1]


def dd_add(x, y):
    s1, s2 = _two_sum_raw(x[0], y[0])
    t1, t2 = _two_sum_raw(x[1], y[1])
    s2 += t1
    s1, s2 = _quick_two_sum_raw(s1, s2)
    s2 += t2
    hi, lo = _quick_two_sum_raw(s1, s2)
    return _check_dd(hi, lo)


def dd_sub(x, y):
    return dd_add(x, (-y[0], -y[1]))


def dd_mul(x, y):
    # All three significant partial products are formed error-free; only
    # the sub-ulp tail is folded with plain adds, keeping the worst case
    # near one ulp of the 106-bit result.
    p, e = _two_prod_raw(x[0], y[0])
    p1, e1 = _two_prod_raw(x[0], y[1])
    p2, e2 = _two_prod_raw(x[1], y[0])
    tail = (e1 + e2) + x[1] * y[1]
    s, r1 = _two_sum_raw(p1, p2)
    s, r2 = _two_sum_raw(e, s)
    lo_sum = (r1 + r2) + tail
    hi, w = _quick_two_sum_raw(p, s)
    w += lo_sum
    hi, lo = _quick_two_sum_raw(hi, w)
    return _check_dd(hi, lo)


def dd_mul_double(x, d):
    p, e = _two_prod_raw(x[0], d)
    e += x[1] * d
    hi, lo = _quick_two_sum_raw(p, e)
    return _check_dd(hi, lo)


def dd_mul_pow2(x, d):
    # d must be a power of two: exact componentwise scaling.
    return x[0] * d, x[1] * d


def dd_div(x, y):
    if y[0] == 0.0:
        raise ZeroDivisionError("double-double division by zero")
    q1 = x[0] / y[0]
    r = dd_add(x, dd_neg(dd_mul_double(y, q1)))
    q2 = r[0] / y[0]
    r = dd_add(r, dd_neg(dd_mul_double(y, q2)))
    q3 = r[0] / y[0]
    r = dd_add(r, dd_neg(dd_mul_double(y, q3)))
    q4 = r[0] / y[0]
    # exact bottom-up fold of the descending quotient terms
    s, t3 = _quick_two_sum_raw(q3, q4)
    s, t2 = _quick_two_sum_raw(q2, s)
    hi, t1 = _quick_two_sum_raw(q1, s)
    lo = t1 + (t2 + t3)
    hi, lo = _quick_two_sum_raw(hi, lo)
    return _check_dd(hi, lo)


def dd_sqrt(x):
    if x[0] < 0.0:
        raise ValueError("square root of a negative double-double")
    if x[0] == 0.0 and x[1] == 0.0:
        return DD_ZERO
    r = dd_from_float(math.sqrt(x[0]))
    for _ in range(2):
        r = dd_mul_pow2(dd_add(r, dd_div(x, r)), 0.5)
    return r


# ---------------------------------------------------------------------------
# quad-double
# ---------------------------------------------------------------------------

def _renorm5(x0, x1, x2, x3, x4):
    """Fold five roughly-descending components into four non-overlapping ones."""
    s, x4 = _quick_two_sum_raw(x3, x4)
    s, x3 = _quick_two_sum_raw(x2, s)
    s, x2 = _quick_two_sum_raw(x1, s)
    s, x1 = _quick_two_sum_raw(x0, s)

    c0 = c1 = c2 = c3 = 0.0
    k = 0
    acc = s
    for t in (x1, x2, x3, x4):
        if k == 3:
            acc += t
            continue
        acc, e = _quick_two_sum_raw(acc, t)
        if e != 0.0:
            if k == 0:
                c0 = acc
            elif k == 1:
                c1 = acc
            else:
                c2 = acc
            k += 1
            acc = e
    if k == 0:
        c0 = acc
    elif k == 1:
        c1 = acc
    elif k == 2:
        c2 = acc
    else:
        c3 = acc
    return c0, c1, c2, c3


def _compress4(terms):
    """Exactly sum a term list and round it to four components."""
    v = [t for t in terms if t != 0.0]
    n = len(v)
    if n == 0:
        return QD_ZERO
    for _ in range(_QD_PASSES):
        s = v[0]
        for i in range(1, n):
            s, e = _two_sum_raw(s, v[i])
            v[i - 1] = e
        v[n - 1] = s
    if n <= 4:
        w = [0.0] * (4 - n) + v
        return _renorm5(w[3], w[2], w[1], w[0], 0.0)
    tail = 0.0
    for i in range(n - 4):
        tail += v[i]
    return _renorm5(v[n - 1], v[n - 2], v[n - 3], v[n - 4], tail)


def qd_from_float(a):
    return float(a), 0.0, 0.0, 0.0


def qd_to_float(x):
    return ((x[3] + x[2]) + x[1]) + x[0]


def qd_neg(x):
    return -x[0], -x[1], -x[2], -x[3]


def qd_add(x, y):
    return _check_qd(_compress4((x[0], y[0], x[1], y[1], x[2], y[2], x[3], y[3])))


def qd_sub(x, y):
    return qd_add(x, qd_neg(y))


def qd_mul(x, y):
    x0, x1, x2, x3 = x
    y0, y1, y2, y3 = y
    p00, q00 = _two_prod_raw(x0, y0)
    p01, q01 = _two_prod_raw(x0, y1)
    p10, q10 = _two_prod_raw(x1, y0)
    p02, q02 = _two_prod_raw(x0, y2)
    p11, q11 = _two_prod_raw(x1, y1)
    p20, q20 = _two_prod_raw(x2, y0)
    p03, q03 = _two_prod_raw(x0, y3)
    p12, q12 = _two_prod_raw(x1, y2)
    p21, q21 = _two_prod_raw(x2, y1)
    p30, q30 = _two_prod_raw(x3, y0)
    # fourth-order cross terms are kept as plain products
    r13 = x1 * y3
    r22 = x2 * y2
    r31 = x3 * y1
    return _check_qd(_compress4((
        p00, q00, p01, q01, p10, q10, p02, q02, p11, q11, p20, q20,
        p03, q03, p12, q12, p21, q21, p30, q30, r13, r22, r31,
    )))


def qd_mul_double(x, d):
    p0, q0 = _two_prod_raw(x[0], d)
    p1, q1 = _two_prod_raw(x[1], d)
    p2, q2 = _two_prod_raw(x[2], d)
    r3 = x[3] * d
    return _check_qd(_compress4((p0, q0, p1, q1, p2, q2, r3)))


def qd_mul_pow2(x, d):
    return x[0] * d, x[1] * d, x[2] * d, x[3] * d


def qd_div(x, y):
    if y[0] == 0.0:
        raise ZeroDivisionError("quad-double division by zero")
    q0 = x[0] / y[0]
    r = qd_sub(x, qd_mul_double(y, q0))
    q1 = r[0] / y[0]
    r = qd_sub(r, qd_mul_double(y, q1))
    q2 = r[0] / y[0]
    r = qd_sub(r, qd_mul_double(y, q2))
    q3 = r[0] / y[0]
    r = qd_sub(r, qd_mul_double(y, q3))
    q4 = r[0] / y[0]
    return _check_qd(_renorm5(q0, q1, q2, q3, q4))


def qd_sqrt(x):
    if x[0] < 0.0:
        raise ValueError("square root of a negative quad-double")
    if x == QD_ZERO or (x[0] == 0.0 and x[1] == 0.0 and x[2] == 0.0 and x[3] == 0.0):
        return QD_ZERO
    r = qd_from_float(math.sqrt(x[0]))
    for _ in range(3):
        r = qd_mul_pow2(qd_add(r, qd_div(x, r)), 0.5)
    return r
