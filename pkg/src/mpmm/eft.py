"""Error-free transformations on IEEE-754 doubles.

two_sum and two_prod return a rounded result together with its exact
rounding error, so that ``s + e`` equals the mathematical result without
any loss.  They are the bricks every double-double and quad-double
operation is built from.

The module-level functions validate their operands and signal
:class:`~mpmm.errors.RangeError` where exactness cannot be guaranteed;
the ``_raw`` variants skip the checks and are meant for composition
inside already-guarded code paths.
"""

import math

from .errors import RangeError

# 2^27 + 1, Veltkamp splitter constant.
_SPLITTER = 134217729.0
# |a| >= 2^996 overflows the splitter product.
_SPLIT_MAX = 2.0 ** 996
# A nonzero product below 2^-969 can have a rounding error under the
# subnormal floor, i.e. not exactly representable.
_PROD_MIN = 2.0 ** -969


def _two_sum_raw(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _quick_two_sum_raw(a, b):
    # Requires |a| >= |b| (or a == 0); 3 flops instead of 6.
    s = a + b
    return s, b - (s - a)


def _split(a):
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def _two_prod_raw(a, b):
    p = a * b
    ahi, alo = _split(a)
    bhi, blo = _split(b)
    return p, ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo


def two_sum(a, b):
    """Return ``(s, e)`` with ``s = fl(a + b)`` and ``s + e == a + b`` exactly."""
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError("two_sum requires finite operands")
    s, e = _two_sum_raw(a, b)
    if math.isinf(s):
        raise RangeError(f"two_sum overflow: {a!r} + {b!r}")
    return s, e


def quick_two_sum(a, b):
    """two_sum specialization assuming ``|a| >= |b|``."""
    return _quick_two_sum_raw(a, b)


def two_prod(a, b):
    """Return ``(p, e)`` with ``p = fl(a * b)`` and ``p + e == a * b`` exactly."""
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError("two_prod requires finite operands")
    if abs(a) >= _SPLIT_MAX or abs(b) >= _SPLIT_MAX:
        raise RangeError(f"two_prod operand too large to split exactly: {a!r}, {b!r}")
    p, e = _two_prod_raw(a, b)
    if math.isinf(p):
        raise RangeError(f"two_prod overflow: {a!r} * {b!r}")
    if abs(p) < _PROD_MIN and a != 0.0 and b != 0.0:
        raise RangeError(f"two_prod underflow, error term not representable: {a!r} * {b!r}")
    return p, e
