# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled symmetric eigensolver: Householder tridiagonalization + implicit-shift QL.

Hot kernel of the package; every interior-point iteration performs several
symmetric eigendecompositions through this routine.  A pure-python twin with
identical semantics lives in ``tridiag_ql_py`` and is selected at import when
this extension is unavailable.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, sqrt

cnp.import_array()

cdef double EPS = 2.220446049250313e-16


cdef void _tred2(double[:, ::1] z, double[::1] d, double[::1] e,
                 Py_ssize_t n, bint vectors) noexcept nogil:
    # Householder reduction of a real symmetric matrix to tridiagonal form.
    # On exit d holds the diagonal, e[0] = 0 and e[i] the (i, i-1) offdiagonal;
    # with `vectors`, z is overwritten by the accumulated orthogonal transform.
    cdef Py_ssize_t i, j, k, l
    cdef double scale, hh, h, g, f

    for i in range(n - 1, 0, -1):
        l = i - 1
        h = 0.0
        scale = 0.0
        if l > 0:
            for k in range(l + 1):
                scale += fabs(z[i, k])
            if scale == 0.0:
                e[i] = z[i, l]
            else:
                for k in range(l + 1):
                    z[i, k] /= scale
                    h += z[i, k] * z[i, k]
                f = z[i, l]
                g = -sqrt(h) if f >= 0.0 else sqrt(h)
                e[i] = scale * g
                h -= f * g
                z[i, l] = f - g
                f = 0.0
                for j in range(l + 1):
                    if vectors:
                        z[j, i] = z[i, j] / h
                    g = 0.0
                    for k in range(j + 1):
                        g += z[j, k] * z[i, k]
                    for k in range(j + 1, l + 1):
                        g += z[k, j] * z[i, k]
                    e[j] = g / h
                    f += e[j] * z[i, j]
                hh = f / (h + h)
                for j in range(l + 1):
                    f = z[i, j]
                    g = e[j] - hh * f
                    e[j] = g
                    for k in range(j + 1):
                        z[j, k] -= f * e[k] + g * z[i, k]
        else:
            e[i] = z[i, l]
        d[i] = h

    d[0] = 0.0
    e[0] = 0.0
    for i in range(n):
        if vectors:
            if d[i] != 0.0:
                for j in range(i):
                    g = 0.0
                    for k in range(i):
                        g += z[i, k] * z[k, j]
                    for k in range(i):
                        z[k, j] -= g * z[k, i]
            d[i] = z[i, i]
            z[i, i] = 1.0
            for j in range(i):
                z[j, i] = 0.0
                z[i, j] = 0.0
        else:
            d[i] = z[i, i]


cdef inline double _hypot2(double a, double b) noexcept nogil:
    cdef double aa = fabs(a)
    cdef double ab = fabs(b)
    cdef double t
    if aa > ab:
        t = ab / aa
        return aa * sqrt(1.0 + t * t)
    if ab == 0.0:
        return 0.0
    t = aa / ab
    return ab * sqrt(1.0 + t * t)


cdef int _tql2(double[:, ::1] z, double[::1] d, double[::1] e,
               Py_ssize_t n, bint vectors) noexcept nogil:
    # Implicit-shift QL iteration on the tridiagonal (d, e) produced by _tred2.
    # Returns nonzero if an eigenvalue failed to converge in 50 iterations.
    cdef Py_ssize_t i, k, l, m
    cdef int it
    cdef double s, r, p, g, f, dd, c, b
    cdef bint underflow

    for i in range(1, n):
        e[i - 1] = e[i]
    e[n - 1] = 0.0

    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = fabs(d[m]) + fabs(d[m + 1])
                if fabs(e[m]) <= EPS * dd:
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > 50:
                return 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = _hypot2(g, 1.0)
            if g >= 0.0:
                g = d[m] - d[l] + e[l] / (g + fabs(r))
            else:
                g = d[m] - d[l] + e[l] / (g - fabs(r))
            s = 1.0
            c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = _hypot2(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if vectors:
                    for k in range(n):
                        f = z[k, i + 1]
                        z[k, i + 1] = s * z[k, i] + c * f
                        z[k, i] = c * z[k, i] - s * f
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return 0


def symmetric_eig(a, bint vectors=True):
    """Eigendecomposition of a real symmetric matrix.

    Returns eigenvalues in ascending order and, when ``vectors`` is true, the
    matrix whose columns are the matching orthonormal eigenvectors.  The input
    is not modified; only its lower triangle is referenced.
    """
    z = np.array(a, dtype=np.float64, order="C", copy=True)
    if z.ndim != 2 or z.shape[0] != z.shape[1]:
        raise ValueError("expected a square matrix")
    cdef Py_ssize_t n = z.shape[0]
    if n == 0:
        return np.zeros(0), (np.zeros((0, 0)) if vectors else None)
    d = np.zeros(n)
    e = np.zeros(n)
    cdef double[:, ::1] zv = z
    cdef double[::1] dv = d
    cdef double[::1] ev = e
    cdef int info
    with nogil:
        _tred2(zv, dv, ev, n, vectors)
        info = _tql2(zv, dv, ev, n, vectors)
    if info != 0:
        raise ArithmeticError("QL iteration failed to converge")
    order = np.argsort(d, kind="stable")
    if vectors:
        return d[order], np.ascontiguousarray(z[:, order])
    return d[order], None
