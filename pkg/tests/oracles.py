"""Independent reference arithmetic used by the test suite.

Exact dyadic checks run on Python integers via float.as_integer_ratio,
completely outside any floating-point path.  High-precision references
use mpmath at a working precision far above the format under test.
"""

from fractions import Fraction

from mpmath import mpf


def _dyadic(x):
    """Represent a finite float exactly as (numerator, k) with x = n / 2^k."""
    n, d = float(x).as_integer_ratio()
    return n, d.bit_length() - 1


def exact_sum_matches(a, b, s, e):
    """Integer check that s + e == a + b exactly."""
    na, ka = _dyadic(a)
    nb, kb = _dyadic(b)
    ns, ks = _dyadic(s)
    ne, ke = _dyadic(e)
    kk = max(ka, kb, ks, ke)
    return (na << (kk - ka)) + (nb << (kk - kb)) == (ns << (kk - ks)) + (ne << (kk - ke))


def exact_prod_matches(a, b, p, e):
    """Integer check that p + e == a * b exactly."""
    na, ka = _dyadic(a)
    nb, kb = _dyadic(b)
    np_, kp = _dyadic(p)
    ne, ke = _dyadic(e)
    kl = ka + kb
    kk = max(kl, kp, ke)
    return (na * nb) << (kk - kl) == (np_ << (kk - kp)) + (ne << (kk - ke))


def dd_to_mp(x):
    return mpf(x[0]) + mpf(x[1])


def qd_to_mp(x):
    return mpf(x[0]) + mpf(x[1]) + mpf(x[2]) + mpf(x[3])


def scalar_to_mp(s):
    """Exact mpf value of a Scalar (caller sets the working precision)."""
    from mpmm.scalar import Kind
    if s.prec.kind is Kind.DD:
        return dd_to_mp(s.payload)
    if s.prec.kind is Kind.QD:
        return qd_to_mp(s.payload)
    sign, man, exp, _ = s.payload
    v = mpf(int(man)) * mpf(2) ** exp
    return -v if sign else v


def ap_to_fraction(x):
    """Exact rational value of a raw big-float tuple."""
    sign, man, exp, _ = x
    man = int(man)
    if man == 0:
        return Fraction(0)
    f = Fraction(man, 1) * (Fraction(2) ** exp)
    return -f if sign else f


def ap_half_ulp(x, bits):
    """Half an ulp of the bits-wide format at x's magnitude, as a Fraction."""
    _, man, exp, bc = x
    if int(man) == 0:
        return Fraction(0)
    top_exp = exp + bc - 1
    return Fraction(2) ** (top_exp - bits + 1) / 2


def matmul_reference(a, b, workbits):
    """Row-major exact-precision product of two DenseMatrix operands,
    evaluated in mpmath at workbits (caller wraps in workprec)."""
    m, l, n = a.rows, a.cols, b.cols
    av = [[scalar_to_mp(a.get(i, k)) for k in range(l)] for i in range(m)]
    bv = [[scalar_to_mp(b.get(k, j)) for j in range(n)] for k in range(l)]
    return [[sum(av[i][k] * bv[k][j] for k in range(l)) for j in range(n)]
            for i in range(m)]
