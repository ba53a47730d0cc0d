"""Extended-precision scalars: precision descriptors and elementary arithmetic.

Three precision families are supported:

* ``dd``   - double-double, a normalized (hi, lo) pair of doubles (~106 bits)
* ``qd``   - quad-double, four non-overlapping doubles (~212 bits)
* ``ap:p`` - big-float with a ``p``-bit mantissa (24 <= p <= 2^20)

A :class:`Scalar` is immutable; all operations are pure functions, so
values may be shared or copied across threads freely.
"""

import enum
from dataclasses import dataclass

from . import bigfloat as bf
from . import ddqd
from .errors import PrecisionMismatchError

DD_BITS = 106
QD_BITS = 212
AP_MIN_BITS = 24
AP_MAX_BITS = 1 << 20


class Kind(enum.Enum):
    DD = "dd"
    QD = "qd"
    AP = "ap"


@dataclass(frozen=True)
class PrecisionSpec:
    kind: Kind
    bits: int

    def __post_init__(self):
        if self.kind is Kind.DD and self.bits != DD_BITS:
            raise ValueError("double-double carries a fixed 106-bit mantissa")
        if self.kind is Kind.QD and self.bits != QD_BITS:
            raise ValueError("quad-double carries a fixed 212-bit mantissa")
        if self.kind is Kind.AP and not (AP_MIN_BITS <= self.bits <= AP_MAX_BITS):
            raise ValueError(f"big-float mantissa bits must lie in [{AP_MIN_BITS}, {AP_MAX_BITS}]")

    @staticmethod
    def dd():
        return PrecisionSpec(Kind.DD, DD_BITS)

    @staticmethod
    def qd():
        return PrecisionSpec(Kind.QD, QD_BITS)

    @staticmethod
    def ap(bits):
        return PrecisionSpec(Kind.AP, int(bits))

    @staticmethod
    def parse(token):
        """Parse ``dd``, ``qd`` or ``ap:<bits>``."""
        token = token.strip().lower()
        if token == "dd":
            return PrecisionSpec.dd()
        if token == "qd":
            return PrecisionSpec.qd()
        if token.startswith("ap:"):
            try:
                bits = int(token[3:])
            except ValueError:
                raise ValueError(f"bad precision token {token!r}") from None
            return PrecisionSpec.ap(bits)
        raise ValueError(f"bad precision token {token!r}")

    @property
    def token(self):
        if self.kind is Kind.AP:
            return f"ap:{self.bits}"
        return self.kind.value

    @property
    def unit_roundoff_exp(self):
        """Exponent ``-p`` such that the unit roundoff is ``2^-p``."""
        return -self.bits

    def unit_roundoff(self):
        """Unit roundoff as a double; underflows to 0.0 below ~2^-1074."""
        return 2.0 ** -self.bits

    def __str__(self):
        return self.token


def _require_same_prec(x, y):
    if x.prec != y.prec:
        raise PrecisionMismatchError(f"operand precisions differ: {x.prec} vs {y.prec}")


class Scalar:
    """A number in one of the supported precisions.

    The payload is a (hi, lo) tuple for dd, a 4-tuple for qd, and a raw
    big-float handle for ap.
    """

    __slots__ = ("prec", "payload")

    def __init__(self, prec, payload):
        object.__setattr__(self, "prec", prec)
        object.__setattr__(self, "payload", payload)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    @staticmethod
    def zero(prec):
        if prec.kind is Kind.DD:
            return Scalar(prec, ddqd.DD_ZERO)
        if prec.kind is Kind.QD:
            return Scalar(prec, ddqd.QD_ZERO)
        return Scalar(prec, bf.AP_ZERO)

    @staticmethod
    def from_float(v, prec):
        if prec.kind is Kind.DD:
            return Scalar(prec, ddqd.dd_from_float(v))
        if prec.kind is Kind.QD:
            return Scalar(prec, ddqd.qd_from_float(v))
        return Scalar(prec, bf.ap_round(bf.ap_from_float(v), prec.bits))

    @staticmethod
    def from_int(k, prec):
        return Scalar._from_ap_exactish(bf.ap_from_int(k), prec)

    @staticmethod
    def from_str(s, prec):
        # Decimal literals go through the big-float backend at guard
        # precision, then round once to the target format.
        v = bf.ap_from_str(s, prec.bits + bf.GUARD_BITS)
        return Scalar._from_ap_exactish(v, prec)

    @staticmethod
    def _from_ap_exactish(v, prec):
        """Round a (possibly wider) big-float value into the target format."""
        if prec.kind is Kind.DD:
            hi, lo = bf.components_from_ap(v, 2)
            return Scalar(prec, ddqd.dd_normalize(hi, lo))
        if prec.kind is Kind.QD:
            c = bf.components_from_ap(v, 4)
            return Scalar(prec, ddqd._renorm5(c[0], c[1], c[2], c[3], 0.0))
        return Scalar(prec, bf.ap_round(v, prec.bits))

    def to_float(self):
        if self.prec.kind is Kind.DD:
            return ddqd.dd_to_float(self.payload)
        if self.prec.kind is Kind.QD:
            return ddqd.qd_to_float(self.payload)
        return bf.ap_to_float(self.payload)

    def to_ap_exact(self):
        """Exact value as a big-float handle (no rounding)."""
        if self.prec.kind is Kind.AP:
            return self.payload
        return bf.ap_from_components(self.payload)

    def is_zero(self):
        if self.prec.kind is Kind.AP:
            return bf.ap_is_zero(self.payload)
        return all(c == 0.0 for c in self.payload)

    def __eq__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.prec == other.prec and self.payload == other.payload

    def __hash__(self):
        return hash((self.prec, self.payload))

    def __repr__(self):
        return f"Scalar({self.prec}, {self.payload!r})"

    def __add__(self, other):
        return scalar_add(self, other)

    def __sub__(self, other):
        return scalar_sub(self, other)

    def __mul__(self, other):
        return scalar_mul(self, other)

    def __truediv__(self, other):
        return scalar_div(self, other)

    def __neg__(self):
        return scalar_neg(self)


def scalar_add(x, y):
    _require_same_prec(x, y)
    k = x.prec.kind
    if k is Kind.DD:
        return Scalar(x.prec, ddqd.dd_add(x.payload, y.payload))
    if k is Kind.QD:
        return Scalar(x.prec, ddqd.qd_add(x.payload, y.payload))
    return Scalar(x.prec, bf.ap_add(x.payload, y.payload, x.prec.bits))


def scalar_sub(x, y):
    _require_same_prec(x, y)
    k = x.prec.kind
    if k is Kind.DD:
        return Scalar(x.prec, ddqd.dd_sub(x.payload, y.payload))
    if k is Kind.QD:
        return Scalar(x.prec, ddqd.qd_sub(x.payload, y.payload))
    return Scalar(x.prec, bf.ap_sub(x.payload, y.payload, x.prec.bits))


def scalar_mul(x, y):
    _require_same_prec(x, y)
    k = x.prec.kind
    if k is Kind.DD:
        return Scalar(x.prec, ddqd.dd_mul(x.payload, y.payload))
    if k is Kind.QD:
        return Scalar(x.prec, ddqd.qd_mul(x.payload, y.payload))
    return Scalar(x.prec, bf.ap_mul(x.payload, y.payload, x.prec.bits))


def scalar_div(x, y):
    _require_same_prec(x, y)
    k = x.prec.kind
    if k is Kind.DD:
        return Scalar(x.prec, ddqd.dd_div(x.payload, y.payload))
    if k is Kind.QD:
        return Scalar(x.prec, ddqd.qd_div(x.payload, y.payload))
    return Scalar(x.prec, bf.ap_div(x.payload, y.payload, x.prec.bits))


def scalar_sqrt(x):
    k = x.prec.kind
    if k is Kind.DD:
        return Scalar(x.prec, ddqd.dd_sqrt(x.payload))
    if k is Kind.QD:
        return Scalar(x.prec, ddqd.qd_sqrt(x.payload))
    return Scalar(x.prec, bf.ap_sqrt(x.payload, x.prec.bits))


def scalar_neg(x):
    k = x.prec.kind
    if k is Kind.DD:
        return Scalar(x.prec, ddqd.dd_neg(x.payload))
    if k is Kind.QD:
        return Scalar(x.prec, ddqd.qd_neg(x.payload))
    return Scalar(x.prec, bf.ap_neg(x.payload))
