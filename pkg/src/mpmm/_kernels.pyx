# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for dd/qd matrices.

Operation-for-operation mirror of ``_kernels_py``: identical floating-point
sequences and loop orders, so both backends produce bit-identical output.
Must be compiled without contraction (-ffp-contract=off) and without any
fast-math relaxation; see setup.py.

All heavy loops release the GIL, so Python-level thread pools get real
parallelism out of these kernels.
"""

NAME = "ext"

cdef double _SPLITTER = 134217729.0  # 2^27 + 1
cdef int _QD_PASSES = 4


cdef inline double _two_prod(double a, double b, double* err) noexcept nogil:
    cdef double p = a * b
    cdef double t = _SPLITTER * a
    cdef double ahh = t - (t - a)
    cdef double ahl = a - ahh
    cdef double bhh, bhl
    t = _SPLITTER * b
    bhh = t - (t - b)
    bhl = b - bhh
    err[0] = ((ahh * bhh - p) + ahh * bhl + ahl * bhh) + ahl * bhl
    return p


# ---------------------------------------------------------------------------
# double-double
# ---------------------------------------------------------------------------

def dd_simple_rows(double[:, :, ::1] a, double[:, :, ::1] b, double[:, :, ::1] c,
                   Py_ssize_t i0, Py_ssize_t i1):
    cdef Py_ssize_t l = a.shape[1]
    cdef Py_ssize_t n = b.shape[1]
    cdef Py_ssize_t i, j, k
    cdef double ah, alo, bh, blo, p, t, ahh, ahl, bhh, bhl, e, ph, pl
    cdef double s, r, phh, p1, e1, p2, e2, aloh, alol, bloh, blol, tail, r2, losum
    cdef double ch, cl, s1, s2, v, t1, t2, w, u
    with nogil:
        for i in range(i0, i1):
            for j in range(n):
                ch = 0.0
                cl = 0.0
                for k in range(l):
                    ah = a[i, k, 0]
                    alo = a[i, k, 1]
                    bh = b[k, j, 0]
                    blo = b[k, j, 1]
                    t = _SPLITTER * ah
                    ahh = t - (t - ah)
                    ahl = ah - ahh
                    t = _SPLITTER * bh
                    bhh = t - (t - bh)
                    bhl = bh - bhh
                    t = _SPLITTER * alo
                    aloh = t - (t - alo)
                    alol = alo - aloh
                    t = _SPLITTER * blo
                    bloh = t - (t - blo)
                    blol = blo - bloh
                    p = ah * bh
                    e = ((ahh * bhh - p) + ahh * bhl + ahl * bhh) + ahl * bhl
                    p1 = ah * blo
                    e1 = ((ahh * bloh - p1) + ahh * blol + ahl * bloh) + ahl * blol
                    p2 = alo * bh
                    e2 = ((aloh * bhh - p2) + aloh * bhl + alol * bhh) + alol * bhl
                    tail = (e1 + e2) + alo * blo
                    s = p1 + p2
                    v = s - p1
                    r = (p1 - (s - v)) + (p2 - v)
                    s2 = e + s
                    v = s2 - e
                    r2 = (e - (s2 - v)) + (s - v)
                    losum = (r + r2) + tail
                    ph = p + s2
                    w = s2 - (ph - p)
                    w = w + losum
                    phh = ph + w
                    pl = w - (phh - ph)
                    ph = phh
                    s1 = ch + ph
                    v = s1 - ch
                    s2 = (ch - (s1 - v)) + (ph - v)
                    t1 = cl + pl
                    w = t1 - cl
                    t2 = (cl - (t1 - w)) + (pl - w)
                    s2 = s2 + t1
                    u = s1 + s2
                    s2 = s2 - (u - s1)
                    s1 = u
                    s2 = s2 + t2
                    ch = s1 + s2
                    cl = s2 - (ch - s1)
                c[i, j, 0] = ch
                c[i, j, 1] = cl


def dd_block_cells(double[:, :, ::1] a, double[:, :, ::1] b, double[:, :, ::1] c,
                   Py_ssize_t n_min, Py_ssize_t cell0, Py_ssize_t cell1):
    cdef Py_ssize_t m = a.shape[0]
    cdef Py_ssize_t l = a.shape[1]
    cdef Py_ssize_t n = b.shape[1]
    cdef Py_ssize_t nb_cols = (n + n_min - 1) // n_min
    cdef Py_ssize_t lb = (l + n_min - 1) // n_min
    cdef Py_ssize_t cell, ib, jb, ilo, ihi, jlo, jhi, kb, klo, khi, i, j, k
    cdef double ah, alo, bh, blo, p, t, ahh, ahl, bhh, bhl, e, ph, pl
    cdef double s, r, phh, p1, e1, p2, e2, aloh, alol, bloh, blol, tail, r2, losum
    cdef double ch, cl, s1, s2, v, t1, t2, w, u
    with nogil:
        for cell in range(cell0, cell1):
            ib = cell // nb_cols
            jb = cell - ib * nb_cols
            ilo = ib * n_min
            ihi = ilo + n_min
            if ihi > m:
                ihi = m
            jlo = jb * n_min
            jhi = jlo + n_min
            if jhi > n:
                jhi = n
            for kb in range(lb):
                klo = kb * n_min
                khi = klo + n_min
                if khi > l:
                    khi = l
                for i in range(ilo, ihi):
                    for j in range(jlo, jhi):
                        ch = c[i, j, 0]
                        cl = c[i, j, 1]
                        for k in range(klo, khi):
                            ah = a[i, k, 0]
                            alo = a[i, k, 1]
                            bh = b[k, j, 0]
                            blo = b[k, j, 1]
                            t = _SPLITTER * ah
                            ahh = t - (t - ah)
                            ahl = ah - ahh
                            t = _SPLITTER * bh
                            bhh = t - (t - bh)
                            bhl = bh - bhh
                            t = _SPLITTER * alo
                            aloh = t - (t - alo)
                            alol = alo - aloh
                            t = _SPLITTER * blo
                            bloh = t - (t - blo)
                            blol = blo - bloh
                            p = ah * bh
                            e = ((ahh * bhh - p) + ahh * bhl + ahl * bhh) + ahl * bhl
                            p1 = ah * blo
                            e1 = ((ahh * bloh - p1) + ahh * blol + ahl * bloh) + ahl * blol
                            p2 = alo * bh
                            e2 = ((aloh * bhh - p2) + aloh * bhl + alol * bhh) + alol * bhl
                            tail = (e1 + e2) + alo * blo
                            s = p1 + p2
                            v = s - p1
                            r = (p1 - (s - v)) + (p2 - v)
                            s2 = e + s
                            v = s2 - e
                            r2 = (e - (s2 - v)) + (s - v)
                            losum = (r + r2) + tail
                            ph = p + s2
                            w = s2 - (ph - p)
                            w = w + losum
                            phh = ph + w
                            pl = w - (phh - ph)
                            ph = phh
                            s1 = ch + ph
                            v = s1 - ch
                            s2 = (ch - (s1 - v)) + (ph - v)
                            t1 = cl + pl
                            w = t1 - cl
                            t2 = (cl - (t1 - w)) + (pl - w)
                            s2 = s2 + t1
                            u = s1 + s2
                            s2 = s2 - (u - s1)
                            s1 = u
                            s2 = s2 + t2
                            ch = s1 + s2
                            cl = s2 - (ch - s1)
                        c[i, j, 0] = ch
                        c[i, j, 1] = cl


cdef inline void _dd_add(double xh, double xl, double yh, double yl,
                         double* hi, double* lo) noexcept nogil:
    cdef double s1 = xh + yh
    cdef double v = s1 - xh
    cdef double s2 = (xh - (s1 - v)) + (yh - v)
    cdef double t1 = xl + yl
    cdef double w = t1 - xl
    cdef double t2 = (xl - (t1 - w)) + (yl - w)
    cdef double u
    s2 = s2 + t1
    u = s1 + s2
    s2 = s2 - (u - s1)
    s1 = u
    s2 = s2 + t2
    hi[0] = s1 + s2
    lo[0] = s2 - (hi[0] - s1)


def dd_ewise_add(double[:, :, ::1] x, double[:, :, ::1] y, double[:, :, ::1] out,
                 Py_ssize_t i0, Py_ssize_t i1):
    cdef Py_ssize_t n = x.shape[1]
    cdef Py_ssize_t i, j
    cdef double hi, lo
    with nogil:
        for i in range(i0, i1):
            for j in range(n):
                _dd_add(x[i, j, 0], x[i, j, 1], y[i, j, 0], y[i, j, 1], &hi, &lo)
                out[i, j, 0] = hi
                out[i, j, 1] = lo


def dd_ewise_sub(double[:, :, ::1] x, double[:, :, ::1] y, double[:, :, ::1] out,
                 Py_ssize_t i0, Py_ssize_t i1):
    cdef Py_ssize_t n = x.shape[1]
    cdef Py_ssize_t i, j
    cdef double hi, lo
    with nogil:
        for i in range(i0, i1):
            for j in range(n):
                _dd_add(x[i, j, 0], x[i, j, 1], -y[i, j, 0], -y[i, j, 1], &hi, &lo)
                out[i, j, 0] = hi
                out[i, j, 1] = lo


# ---------------------------------------------------------------------------
# quad-double
# ---------------------------------------------------------------------------

cdef inline void _renorm5(double x0, double x1, double x2, double x3, double x4,
                          double* out) noexcept nogil:
    cdef double s, t, acc, e, v
    cdef double rest[4]
    cdef int k = 0, idx
    s = x3 + x4
    x4 = x4 - (s - x3)
    t = x2 + s
    x3 = s - (t - x2)
    s = x1 + t
    x2 = t - (s - x1)
    t = x0 + s
    x1 = s - (t - x0)
    out[0] = 0.0
    out[1] = 0.0
    out[2] = 0.0
    out[3] = 0.0
    rest[0] = x1
    rest[1] = x2
    rest[2] = x3
    rest[3] = x4
    acc = t
    for idx in range(4):
        v = rest[idx]
        if k == 3:
            acc += v
            continue
        s = acc + v
        e = v - (s - acc)
        acc = s
        if e != 0.0:
            out[k] = acc
            k += 1
            acc = e
    out[k] = acc


cdef inline void _compress4(double* terms, int nterms, double* out) noexcept nogil:
    cdef double buf[24]
    cdef double w[4]
    cdef int n = 0, i, p
    cdef double s, y, t, bb, tail
    for i in range(nterms):
        if terms[i] != 0.0:
            buf[n] = terms[i]
            n += 1
    if n == 0:
        out[0] = 0.0
        out[1] = 0.0
        out[2] = 0.0
        out[3] = 0.0
        return
    for p in range(_QD_PASSES):
        s = buf[0]
        for i in range(1, n):
            y = buf[i]
            t = s + y
            bb = t - s
            buf[i - 1] = (s - (t - bb)) + (y - bb)
            s = t
        buf[n - 1] = s
    if n <= 4:
        for i in range(4):
            w[i] = 0.0
        for i in range(n):
            w[4 - n + i] = buf[i]
        _renorm5(w[3], w[2], w[1], w[0], 0.0, out)
        return
    tail = 0.0
    for i in range(n - 4):
        tail += buf[i]
    _renorm5(buf[n - 1], buf[n - 2], buf[n - 3], buf[n - 4], tail, out)


cdef inline void _qd_mul_add(double* cc,
                             double x0, double x1, double x2, double x3,
                             double y0, double y1, double y2, double y3) noexcept nogil:
    # cc += x*y via one product compression and one addition compression,
    # matching the scalar qd_mul / qd_add composition.
    cdef double terms[23]
    cdef double prod[4]
    cdef double addt[8]
    terms[0] = _two_prod(x0, y0, &terms[1])
    terms[2] = _two_prod(x0, y1, &terms[3])
    terms[4] = _two_prod(x1, y0, &terms[5])
    terms[6] = _two_prod(x0, y2, &terms[7])
    terms[8] = _two_prod(x1, y1, &terms[9])
    terms[10] = _two_prod(x2, y0, &terms[11])
    terms[12] = _two_prod(x0, y3, &terms[13])
    terms[14] = _two_prod(x1, y2, &terms[15])
    terms[16] = _two_prod(x2, y1, &terms[17])
    terms[18] = _two_prod(x3, y0, &terms[19])
    terms[20] = x1 * y3
    terms[21] = x2 * y2
    terms[22] = x3 * y1
    _compress4(terms, 23, prod)
    addt[0] = cc[0]
    addt[1] = prod[0]
    addt[2] = cc[1]
    addt[3] = prod[1]
    addt[4] = cc[2]
    addt[5] = prod[2]
    addt[6] = cc[3]
    addt[7] = prod[3]
    _compress4(addt, 8, cc)


def qd_simple_rows(double[:, :, ::1] a, double[:, :, ::1] b, double[:, :, ::1] c,
                   Py_ssize_t i0, Py_ssize_t i1):
    cdef Py_ssize_t l = a.shape[1]
    cdef Py_ssize_t n = b.shape[1]
    cdef Py_ssize_t i, j, k
    cdef double acc[4]
    with nogil:
        for i in range(i0, i1):
            for j in range(n):
                acc[0] = 0.0
                acc[1] = 0.0
                acc[2] = 0.0
                acc[3] = 0.0
                for k in range(l):
                    _qd_mul_add(acc, a[i, k, 0], a[i, k, 1], a[i, k, 2], a[i, k, 3],
                                b[k, j, 0], b[k, j, 1], b[k, j, 2], b[k, j, 3])
                c[i, j, 0] = acc[0]
                c[i, j, 1] = acc[1]
                c[i, j, 2] = acc[2]
                c[i, j, 3] = acc[3]


def qd_block_cells(double[:, :, ::1] a, double[:, :, ::1] b, double[:, :, ::1] c,
                   Py_ssize_t n_min, Py_ssize_t cell0, Py_ssize_t cell1):
    cdef Py_ssize_t m = a.shape[0]
    cdef Py_ssize_t l = a.shape[1]
    cdef Py_ssize_t n = b.shape[1]
    cdef Py_ssize_t nb_cols = (n + n_min - 1) // n_min
    cdef Py_ssize_t lb = (l + n_min - 1) // n_min
    cdef Py_ssize_t cell, ib, jb, ilo, ihi, jlo, jhi, kb, klo, khi, i, j, k
    cdef double acc[4]
    with nogil:
        for cell in range(cell0, cell1):
            ib = cell // nb_cols
            jb = cell - ib * nb_cols
            ilo = ib * n_min
            ihi = ilo + n_min
            if ihi > m:
                ihi = m
            jlo = jb * n_min
            jhi = jlo + n_min
            if jhi > n:
                jhi = n
            for kb in range(lb):
                klo = kb * n_min
                khi = klo + n_min
                if khi > l:
                    khi = l
                for i in range(ilo, ihi):
                    for j in range(jlo, jhi):
                        acc[0] = c[i, j, 0]
                        acc[1] = c[i, j, 1]
                        acc[2] = c[i, j, 2]
                        acc[3] = c[i, j, 3]
                        for k in range(klo, khi):
                            _qd_mul_add(acc, a[i, k, 0], a[i, k, 1], a[i, k, 2], a[i, k, 3],
                                        b[k, j, 0], b[k, j, 1], b[k, j, 2], b[k, j, 3])
                        c[i, j, 0] = acc[0]
                        c[i, j, 1] = acc[1]
                        c[i, j, 2] = acc[2]
                        c[i, j, 3] = acc[3]


def qd_ewise_add(double[:, :, ::1] x, double[:, :, ::1] y, double[:, :, ::1] out,
                 Py_ssize_t i0, Py_ssize_t i1):
    cdef Py_ssize_t n = x.shape[1]
    cdef Py_ssize_t i, j
    cdef double addt[8]
    cdef double res[4]
    with nogil:
        for i in range(i0, i1):
            for j in range(n):
                addt[0] = x[i, j, 0]
                addt[1] = y[i, j, 0]
                addt[2] = x[i, j, 1]
                addt[3] = y[i, j, 1]
                addt[4] = x[i, j, 2]
                addt[5] = y[i, j, 2]
                addt[6] = x[i, j, 3]
                addt[7] = y[i, j, 3]
                _compress4(addt, 8, res)
                out[i, j, 0] = res[0]
                out[i, j, 1] = res[1]
                out[i, j, 2] = res[2]
                out[i, j, 3] = res[3]


def qd_ewise_sub(double[:, :, ::1] x, double[:, :, ::1] y, double[:, :, ::1] out,
                 Py_ssize_t i0, Py_ssize_t i1):
    cdef Py_ssize_t n = x.shape[1]
    cdef Py_ssize_t i, j
    cdef double addt[8]
    cdef double res[4]
    with nogil:
        for i in range(i0, i1):
            for j in range(n):
                addt[0] = x[i, j, 0]
                addt[1] = -y[i, j, 0]
                addt[2] = x[i, j, 1]
                addt[3] = -y[i, j, 1]
                addt[4] = x[i, j, 2]
                addt[5] = -y[i, j, 2]
                addt[6] = x[i, j, 3]
                addt[7] = -y[i, j, 3]
                _compress4(addt, 8, res)
                out[i, j, 0] = res[0]
                out[i, j, 1] = res[1]
                out[i, j, 2] = res[2]
                out[i, j, 3] = res[3]
