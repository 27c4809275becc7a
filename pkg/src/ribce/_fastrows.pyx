# cython: language_level=3
"""Compiled twin of ``ribce._pyrows``.

The entries are arbitrary-precision rationals (gmpy2.mpq or Fraction), so the
arithmetic itself stays in object space; the win comes from compiling the loop
shells (indexing, branching, iteration) to C.  Keep in lockstep with _pyrows.
"""

IMPL = "cython"


def row_eliminate(list target, factor, list source):
    cdef Py_ssize_t j, n = len(source)
    cdef object s
    for j in range(n):
        s = source[j]
        if s:
            target[j] = target[j] - factor * s


def pivot_eliminate(list tableau, Py_ssize_t pivot_row, Py_ssize_t col):
    cdef list source = tableau[pivot_row]
    cdef Py_ssize_t n = len(source)
    cdef Py_ssize_t m = len(tableau)
    cdef Py_ssize_t r, j, k, nz = 0
    cdef list row
    cdef object factor, s
    cdef list idx = []
    cdef list val = []
    for j in range(n):
        s = source[j]
        if s:
            idx.append(j)
            val.append(s)
    nz = len(idx)
    for r in range(m):
        if r == pivot_row:
            continue
        row = tableau[r]
        factor = row[col]
        if factor:
            for k in range(nz):
                j = <Py_ssize_t>idx[k]
                row[j] = row[j] - factor * val[k]


def row_scale(list row, factor):
    cdef Py_ssize_t j, n = len(row)
    cdef object x
    for j in range(n):
        x = row[j]
        if x:
            row[j] = x * factor


def row_combine(alpha, list xs, beta, list ys):
    cdef Py_ssize_t j, n = len(xs)
    cdef list out = [None] * n
    for j in range(n):
        out[j] = alpha * xs[j] + beta * ys[j]
    return out


def dot(list xs, list ys):
    cdef Py_ssize_t j, n = len(xs)
    cdef object total = None
    cdef object x, y
    for j in range(n):
        x = xs[j]
        if x:
            y = ys[j]
            if y:
                total = x * y if total is None else total + x * y
    if total is None:
        return 0
    return total
