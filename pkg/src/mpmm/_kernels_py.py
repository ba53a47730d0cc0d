"""Pure-Python fallback kernels for dd/qd matrices.

Every function here mirrors the compiled extension operation for
operation: identical floating-point sequences, identical loop orders, so
both backends produce bit-identical outputs.  Arrays are C-contiguous
float64 with a trailing component axis (2 for dd, 4 for qd).

Kernels are serial; callers partition work into disjoint output regions
(row ranges or block-grid cell ranges).
"""

NAME = "python"

_SPLITTER = 134217729.0  # 2^27 + 1
_QD_PASSES = 4


# ---------------------------------------------------------------------------
# double-double
# ---------------------------------------------------------------------------

def dd_simple_rows(a, b, c, i0, i1):
    """c[i0:i1] = (a @ b)[i0:i1], k accumulated in ascending order."""
    l = a.shape[1]
    n = b.shape[1]
    al = a.tolist()
    bl = b.tolist()
    for i in range(i0, i1):
        arow = al[i]
        crow = []
        for j in range(n):
            ch = 0.0
            cl = 0.0
            for k in range(l):
                ah, alo = arow[k]
                bh, blo = bl[k][j]
                # two_prod(ah, bh)
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
                # c += (ph, pl), accurate double-word add
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
            crow.append([ch, cl])
        c[i] = crow


def dd_block_cells(a, b, c, n_min, cell0, cell1):
    """Blocked product over flattened (ib, jb) output cells [cell0, cell1).

    Block-k sweeps ascending with in-block k ascending, so each element's
    accumulation order equals the simple kernel's.
    """
    m = a.shape[0]
    l = a.shape[1]
    n = b.shape[1]
    nb_cols = -(-n // n_min)
    lb = -(-l // n_min)
    al = a.tolist()
    bl = b.tolist()
    for cell in range(cell0, cell1):
        ib, jb = divmod(cell, nb_cols)
        ilo = ib * n_min
        ihi = min(ilo + n_min, m)
        jlo = jb * n_min
        jhi = min(jlo + n_min, n)
        acc = [[[0.0, 0.0] for _ in range(jhi - jlo)] for _ in range(ihi - ilo)]
        for kb in range(lb):
            klo = kb * n_min
            khi = min(klo + n_min, l)
            for i in range(ilo, ihi):
                arow = al[i]
                accrow = acc[i - ilo]
                for j in range(jlo, jhi):
                    cell_acc = accrow[j - jlo]
                    ch, cl = cell_acc
                    for k in range(klo, khi):
                        ah, alo = arow[k]
                        bh, blo = bl[k][j]
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
                    cell_acc[0] = ch
                    cell_acc[1] = cl
        c[ilo:ihi, jlo:jhi] = acc


def _dd_add(xh, xl, yh, yl):
    s1 = xh + yh
    v = s1 - xh
    s2 = (xh - (s1 - v)) + (yh - v)
    t1 = xl + yl
    w = t1 - xl
    t2 = (xl - (t1 - w)) + (yl - w)
    s2 = s2 + t1
    u = s1 + s2
    s2 = s2 - (u - s1)
    s1 = u
    s2 = s2 + t2
    hi = s1 + s2
    lo = s2 - (hi - s1)
    return hi, lo


def dd_ewise_add(x, y, out, i0, i1):
    n = x.shape[1]
    xl = x.tolist()
    yl = y.tolist()
    for i in range(i0, i1):
        xrow = xl[i]
        yrow = yl[i]
        out[i] = [list(_dd_add(xrow[j][0], xrow[j][1], yrow[j][0], yrow[j][1]))
                  for j in range(n)]


def dd_ewise_sub(x, y, out, i0, i1):
    n = x.shape[1]
    xl = x.tolist()
    yl = y.tolist()
    for i in range(i0, i1):
        xrow = xl[i]
        yrow = yl[i]
        out[i] = [list(_dd_add(xrow[j][0], xrow[j][1], -yrow[j][0], -yrow[j][1]))
                  for j in range(n)]


# ---------------------------------------------------------------------------
# quad-double
# ---------------------------------------------------------------------------

def _renorm5(x0, x1, x2, x3, x4):
    s = x3 + x4
    x4 = x4 - (s - x3)
    t = x2 + s
    x3 = s - (t - x2)
    s = x1 + t
    x2 = t - (s - x1)
    t = x0 + s
    x1 = s - (t - x0)

    c0 = c1 = c2 = c3 = 0.0
    k = 0
    acc = t
    for v in (x1, x2, x3, x4):
        if k == 3:
            acc += v
            continue
        s = acc + v
        e = v - (s - acc)
        acc = s
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
    v = [x for x in terms if x != 0.0]
    n = len(v)
    if n == 0:
        return 0.0, 0.0, 0.0, 0.0
    for _ in range(_QD_PASSES):
        s = v[0]
        for i in range(1, n):
            y = v[i]
            t = s + y
            bb = t - s
            v[i - 1] = (s - (t - bb)) + (y - bb)
            s = t
        v[n - 1] = s
    if n <= 4:
        w = [0.0] * (4 - n) + v
        return _renorm5(w[3], w[2], w[1], w[0], 0.0)
    tail = 0.0
    for i in range(n - 4):
        tail += v[i]
    return _renorm5(v[n - 1], v[n - 2], v[n - 3], v[n - 4], tail)


def _two_prod(a, b):
    p = a * b
    t = _SPLITTER * a
    ahh = t - (t - a)
    ahl = a - ahh
    t = _SPLITTER * b
    bhh = t - (t - b)
    bhl = b - bhh
    return p, ((ahh * bhh - p) + ahh * bhl + ahl * bhh) + ahl * bhl


def _qd_mul(x0, x1, x2, x3, y0, y1, y2, y3):
    p00, q00 = _two_prod(x0, y0)
    p01, q01 = _two_prod(x0, y1)
    p10, q10 = _two_prod(x1, y0)
    p02, q02 = _two_prod(x0, y2)
    p11, q11 = _two_prod(x1, y1)
    p20, q20 = _two_prod(x2, y0)
    p03, q03 = _two_prod(x0, y3)
    p12, q12 = _two_prod(x1, y2)
    p21, q21 = _two_prod(x2, y1)
    p30, q30 = _two_prod(x3, y0)
    return _compress4((
        p00, q00, p01, q01, p10, q10, p02, q02, p11, q11, p20, q20,
        p03, q03, p12, q12, p21, q21, p30, q30,
        x1 * y3, x2 * y2, x3 * y1,
    ))


def _qd_add(x0, x1, x2, x3, y0, y1, y2, y3):
    return _compress4((x0, y0, x1, y1, x2, y2, x3, y3))


def qd_simple_rows(a, b, c, i0, i1):
    l = a.shape[1]
    n = b.shape[1]
    al = a.tolist()
    bl = b.tolist()
    for i in range(i0, i1):
        arow = al[i]
        crow = []
        for j in range(n):
            c0 = c1 = c2 = c3 = 0.0
            for k in range(l):
                x0, x1, x2, x3 = arow[k]
                y0, y1, y2, y3 = bl[k][j]
                p0, p1, p2, p3 = _qd_mul(x0, x1, x2, x3, y0, y1, y2, y3)
                c0, c1, c2, c3 = _compress4((c0, p0, c1, p1, c2, p2, c3, p3))
            crow.append([c0, c1, c2, c3])
        c[i] = crow


def qd_block_cells(a, b, c, n_min, cell0, cell1):
    m = a.shape[0]
    l = a.shape[1]
    n = b.shape[1]
    nb_cols = -(-n // n_min)
    lb = -(-l // n_min)
    al = a.tolist()
    bl = b.tolist()
    for cell in range(cell0, cell1):
        ib, jb = divmod(cell, nb_cols)
        ilo = ib * n_min
        ihi = min(ilo + n_min, m)
        jlo = jb * n_min
        jhi = min(jlo + n_min, n)
        acc = [[[0.0, 0.0, 0.0, 0.0] for _ in range(jhi - jlo)] for _ in range(ihi - ilo)]
        for kb in range(lb):
            klo = kb * n_min
            khi = min(klo + n_min, l)
            for i in range(ilo, ihi):
                arow = al[i]
                accrow = acc[i - ilo]
                for j in range(jlo, jhi):
                    cell_acc = accrow[j - jlo]
                    c0, c1, c2, c3 = cell_acc
                    for k in range(klo, khi):
                        x0, x1, x2, x3 = arow[k]
                        y0, y1, y2, y3 = bl[k][j]
                        p0, p1, p2, p3 = _qd_mul(x0, x1, x2, x3, y0, y1, y2, y3)
                        c0, c1, c2, c3 = _compress4((c0, p0, c1, p1, c2, p2, c3, p3))
                    cell_acc[0] = c0
                    cell_acc[1] = c1
                    cell_acc[2] = c2
                    cell_acc[3] = c3
        c[ilo:ihi, jlo:jhi] = acc


def qd_ewise_add(x, y, out, i0, i1):
    n = x.shape[1]
    xl = x.tolist()
    yl = y.tolist()
    for i in range(i0, i1):
        xrow = xl[i]
        yrow = yl[i]
        out[i] = [list(_qd_add(*xrow[j], *yrow[j])) for j in range(n)]


def qd_ewise_sub(x, y, out, i0, i1):
    n = x.shape[1]
    xl = x.tolist()
    yl = y.tolist()
    for i in range(i0, i1):
        xrow = xl[i]
        yrow = yl[i]
        out[i] = [list(_qd_add(xrow[j][0], xrow[j][1], xrow[j][2], xrow[j][3],
                               -yrow[j][0], -yrow[j][1], -yrow[j][2], -yrow[j][3]))
                  for j in range(n)]
