"""Matrix kernels for arbitrary-precision elements.

These always run in Python: elements are big-float handles, so there is
no component array for the compiled backend to walk.  Loop orders match
the dd/qd kernels (ascending k everywhere), and all operations round to
the matrix's mantissa width.
"""

from mpmath import libmp

_RND = libmp.round_nearest
_ZERO = libmp.fzero


def simple_rows(a, b, m, l, n, bits, i0, i1, out):
    mpf_add = libmp.mpf_add
    mpf_mul = libmp.mpf_mul
    for i in range(i0, i1):
        arow = a[i * l:(i + 1) * l]
        base = i * n
        for j in range(n):
            acc = _ZERO
            for k in range(l):
                acc = mpf_add(acc, mpf_mul(arow[k], b[k * n + j], bits, _RND), bits, _RND)
            out[base + j] = acc


def block_cells(a, b, m, l, n, bits, n_min, cell0, cell1, out):
    mpf_add = libmp.mpf_add
    mpf_mul = libmp.mpf_mul
    nb_cols = -(-n // n_min)
    lb = -(-l // n_min)
    for cell in range(cell0, cell1):
        ib, jb = divmod(cell, nb_cols)
        ilo = ib * n_min
        ihi = min(ilo + n_min, m)
        jlo = jb * n_min
        jhi = min(jlo + n_min, n)
        for kb in range(lb):
            klo = kb * n_min
            khi = min(klo + n_min, l)
            for i in range(ilo, ihi):
                arow = a[i * l:(i + 1) * l]
                base = i * n
                for j in range(jlo, jhi):
                    acc = out[base + j]
                    for k in range(klo, khi):
                        acc = mpf_add(acc, mpf_mul(arow[k], b[k * n + j], bits, _RND), bits, _RND)
                    out[base + j] = acc


def ewise_add(x, y, bits, lo, hi, out):
    mpf_add = libmp.mpf_add
    for idx in range(lo, hi):
        out[idx] = mpf_add(x[idx], y[idx], bits, _RND)


def ewise_sub(x, y, bits, lo, hi, out):
    mpf_sub = libmp.mpf_sub
    for idx in range(lo, hi):
        out[idx] = mpf_sub(x[idx], y[idx], bits, _RND)
