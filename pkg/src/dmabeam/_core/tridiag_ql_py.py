"""Pure-python twin of the compiled symmetric eigensolver.

Same algorithm family as ``tridiag_ql.pyx`` (Householder tridiagonalization
followed by implicit-shift QL); the reduction is expressed through vectorized
rank-2 updates and the QL plane rotations act on whole eigenvector columns,
so the fallback stays usable at the matrix sizes this package works with.
"""

import numpy as np

_EPS = np.finfo(float).eps


def _tridiagonalize(a, vectors):
    """Reduce symmetric ``a`` in place to tridiagonal form; return (d, e, q).

    ``e[i]`` holds the offdiagonal coupling rows i-1 and i (``e[0] = 0``);
    ``q`` accumulates the orthogonal transform when requested, else None.
    """
    n = a.shape[0]
    q = np.eye(n) if vectors else None
    for k in range(n - 1, 1, -1):
        x = a[k, :k]
        scale = np.abs(x).sum()
        if scale == 0.0:
            continue
        x = x / scale
        alpha = np.linalg.norm(x)
        if x[k - 1] >= 0.0:
            alpha = -alpha
        u = x.copy()
        u[k - 1] -= alpha
        unorm2 = u @ u
        if unorm2 == 0.0:
            continue
        beta = 2.0 / unorm2
        # symmetric rank-2 update of the leading block: A <- H A H
        sub = a[:k, :k]
        p = beta * (sub @ u)
        w = p - (0.5 * beta * (p @ u)) * u
        sub -= np.outer(u, w) + np.outer(w, u)
        a[k, :k] = 0.0
        a[:k, k] = 0.0
        a[k, k - 1] = alpha * scale
        a[k - 1, k] = alpha * scale
        if vectors:
            q[:, :k] -= np.outer(q[:, :k] @ u, beta * u)
    d = np.diag(a).copy()
    e = np.zeros(n)
    if n > 1:
        e[1:] = np.diag(a, -1)
    return d, e, q


def _ql_implicit(d, e, z, vectors):
    """Implicit-shift QL on the tridiagonal (d, e), rotating columns of z."""
    n = d.shape[0]
    e = np.roll(e, -1)
    e[n - 1] = 0.0
    for l in range(n):
        iteration = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= _EPS * dd:
                    break
                m += 1
            if m == l:
                break
            iteration += 1
            if iteration > 50:
                raise ArithmeticError("QL iteration failed to converge")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = np.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + (r if g >= 0.0 else -r))
            s = c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = np.hypot(f, g)
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
                    col = z[:, i + 1].copy()
                    z[:, i + 1] = s * z[:, i] + c * col
                    z[:, i] = c * z[:, i] - s * col
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return d


def symmetric_eig(a, vectors=True):
    """Eigendecomposition of a real symmetric matrix (ascending eigenvalues).

    Pure-python twin of the compiled kernel; identical contract.
    """
    z = np.array(a, dtype=np.float64, order="C", copy=True)
    if z.ndim != 2 or z.shape[0] != z.shape[1]:
        raise ValueError("expected a square matrix")
    n = z.shape[0]
    if n == 0:
        return np.zeros(0), (np.zeros((0, 0)) if vectors else None)
    d, e, q = _tridiagonalize(z, vectors)
    if q is None:
        q = np.zeros((0, 0))
    d = _ql_implicit(d, e, q, vectors)
    order = np.argsort(d, kind="stable")
    if vectors:
        return d[order], np.ascontiguousarray(q[:, order])
    return d[order], None
