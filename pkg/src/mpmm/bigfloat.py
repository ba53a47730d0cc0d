"""Adapter over the mpmath big-float facility.

Values are raw mpf tuples ``(sign, mantissa, exponent, bitcount)`` handled
through mpmath's functional layer, which rounds correctly to an explicit
bit count and keeps no global state: every call is pure, so values can be
used freely from any thread.

All operations take the target mantissa width in bits; ``prec=0`` calls
below mean "exact", which mpmath supports for add/sub/mul/negate.
"""

import math

from mpmath import libmp

from .errors import RangeError

_RND = libmp.round_nearest

AP_ZERO = libmp.fzero

# Guard bits used when a decimal literal or an irrational intermediate is
# produced before the final rounding to the target precision.
GUARD_BITS = 64


def ap_add(x, y, bits):
    return libmp.mpf_add(x, y, bits, _RND)


def ap_sub(x, y, bits):
    return libmp.mpf_sub(x, y, bits, _RND)


def ap_mul(x, y, bits):
    return libmp.mpf_mul(x, y, bits, _RND)


def ap_div(x, y, bits):
    if y == AP_ZERO:
        raise ZeroDivisionError("big-float division by zero")
    return libmp.mpf_div(x, y, bits, _RND)


def ap_sqrt(x, bits):
    try:
        return libmp.mpf_sqrt(x, bits, _RND)
    except libmp.ComplexResult:
        raise ValueError("square root of a negative big-float") from None


def ap_neg(x):
    return libmp.mpf_neg(x)


def ap_abs(x):
    return libmp.mpf_abs(x)


def ap_round(x, bits):
    """Re-round a value to ``bits`` mantissa bits."""
    return libmp.mpf_pos(x, bits, _RND)


def ap_from_float(v):
    return libmp.from_float(v)


def ap_from_int(k, bits=0):
    return libmp.from_int(k, bits, _RND) if bits else libmp.from_int(k)


def ap_from_str(s, bits):
    return libmp.from_str(s, bits, _RND)


def ap_to_float(x):
    v = libmp.to_float(x, rnd=_RND)
    if math.isinf(v) and x[1] != 0:
        raise RangeError("big-float too large for a double")
    return v


def ap_cmp(x, y):
    return libmp.mpf_cmp(x, y)


def ap_is_zero(x):
    return x[1] == 0 and x[2] == 0


def ap_man_exp(x):
    """Decompose into ``(sign, mantissa, exponent)`` with mantissa an int."""
    sign, man, exp, _ = x
    return sign, int(man), exp


def ap_from_man_exp(sign, man, exp):
    v = libmp.from_man_exp(man, exp)
    return libmp.mpf_neg(v) if sign else v


# ---------------------------------------------------------------------------
# conversions between component formats
# ---------------------------------------------------------------------------

def ap_from_components(comps):
    """Exact big-float value of an unevaluated double sum (DD/QD components)."""
    acc = AP_ZERO
    for c in comps:
        acc = libmp.mpf_add(acc, libmp.from_float(c), 0, _RND)
    return acc


def components_from_ap(x, count):
    """Round a big-float to ``count`` descending double components."""
    comps = []
    rest = x
    for _ in range(count):
        c = libmp.to_float(rest, rnd=_RND)
        comps.append(c)
        rest = libmp.mpf_sub(rest, libmp.from_float(c), 0, _RND)
    return tuple(comps)
