"""Shared dense complex linear-algebra kernel and unit conversions.

Hermitian eigendecomposition is computed on the 2n x 2n real-symmetric
embedding [[Re, -Im], [Im, Re]] using the package's symmetric QL kernel.
Eigenpairs of the embedding come in duplicate pairs ((x; y) and (-y; x) for
the complex eigenvector x + jy); deduplication extracts one orthonormal
complex eigenvector per pair.
"""

from dataclasses import dataclass

import numpy as np

from . import _core

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class HermitianEig:
    """Eigenvalues (descending) and orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_complex_matrix(m, name="matrix"):
    """Validate and return a finite 2-D complex array."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {a.shape}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError(f"{name} has non-finite entries")
    return a


def embed_hermitian(m):
    """Real-symmetric embedding [[Re, -Im], [Im, Re]] of a complex matrix."""
    re, im = m.real, m.imag
    return np.block([[re, -im], [im, re]])


def hermitian_eig(m) -> HermitianEig:
    """Eigendecomposition of a Hermitian matrix.

    The input must be Hermitian within 1e-12 relative to its largest entry;
    it is symmetrized internally.  Eigenvalues come back in descending order
    with orthonormal eigenvector columns.  The zero matrix yields zero
    eigenvalues and the standard basis.
    """
    a = as_complex_matrix(m)
    n, nc = a.shape
    if n != nc:
        raise ValueError(f"matrix must be square, got {a.shape}")
    if n == 0:
        return HermitianEig(np.zeros(0), np.zeros((0, 0), dtype=complex))
    scale = max(1.0, np.abs(a).max())
    if np.abs(a - a.conj().T).max() > 1e-12 * scale:
        raise ValueError("matrix is not Hermitian within tolerance")
    a = 0.5 * (a + a.conj().T)

    w2, u2 = _symmetric_eig_safe(embed_hermitian(a), vectors=True)
    evals, vecs = _dedup_pairs(w2, u2, n)
    return HermitianEig(evals, vecs)


def _symmetric_eig_safe(s, vectors):
    """Kernel eigendecomposition with a LAPACK safety net on QL breakdown."""
    try:
        return _core.symmetric_eig(s, vectors=vectors)
    except ArithmeticError:
        w, v = np.linalg.eigh(s)
        return (w, v) if vectors else (w, None)


def _dedup_pairs(w, u, n):
    """Collapse the duplicated real-embedding eigenpairs to complex ones.

    ``w``/``u`` are the ascending eigenpairs of the 2n x 2n embedding.
    Eigenvalues are clustered by gap; a cluster of real dimension 2m yields m
    complex eigenvectors via pivoted Gram-Schmidt over the candidate vectors
    x + jy built from the cluster's embedding eigenvectors.  The cluster
    tolerance is relative to the spectral scale (true duplicates agree to a
    few ulps of it), so matrices with uniformly tiny entries keep their
    eigenvalue ordering instead of collapsing into one cluster.
    """
    tol = 64.0 * n * _EPS * np.abs(w).max(initial=0.0)
    bounds = []
    start = 0
    for j in range(1, 2 * n):
        if w[j] - w[j - 1] > tol:
            bounds.append((start, j))
            start = j
    bounds.append((start, 2 * n))
    # duplicate pairs must not straddle clusters: force even sizes
    merged = []
    carry = None
    for lo, hi in bounds:
        if carry is not None:
            lo = carry
            carry = None
        if (hi - lo) % 2 == 1:
            carry = lo
        else:
            merged.append((lo, hi))
    if carry is not None:
        merged.append((carry, 2 * n))

    evals = np.empty(n)
    vecs = np.empty((n, n), dtype=complex)
    out = 0
    for lo, hi in merged:
        m = (hi - lo) // 2
        cand = u[:n, lo:hi] + 1j * u[n:, lo:hi]
        wc = w[lo:hi]
        first = out
        for j in range(m):
            norms = np.linalg.norm(cand, axis=0)
            p = int(np.argmax(norms))
            v = cand[:, p] / norms[p]
            # re-orthogonalize against this cluster's selections (twice)
            for _ in range(2):
                if out > first:
                    sel = vecs[:, first:out]
                    v = v - sel @ (sel.conj().T @ v)
                v = v / np.linalg.norm(v)
            evals[out] = 0.5 * (wc[2 * j] + wc[2 * j + 1])
            vecs[:, out] = v
            out += 1
            cand = cand - np.outer(v, v.conj() @ cand)
    order = np.argsort(-evals, kind="stable")
    return evals[order], vecs[:, order]


def kron(a, b):
    """Kronecker product (thin wrapper kept for a uniform kernel surface)."""
    return np.kron(np.asarray(a), np.asarray(b))


def vec(m):
    """Column-major stacking of a matrix into a vector."""
    return np.asarray(m).reshape(-1, order="F")


def unvec(v, rows, cols):
    """Inverse of :func:`vec`."""
    v = np.asarray(v)
    if v.size != rows * cols:
        raise ValueError(f"cannot reshape length {v.size} into {rows}x{cols}")
    return v.reshape(rows, cols, order="F")


def dbm_to_watts(p_dbm):
    """Convert dBm to watts."""
    p = np.asarray(p_dbm, dtype=float)
    if not np.all(np.isfinite(p)):
        raise ValueError("power in dBm must be finite")
    return 10.0 ** ((p - 30.0) / 10.0)


def watts_to_dbm(p_watts):
    """Convert watts to dBm; zero maps to the -inf sentinel."""
    p = np.asarray(p_watts, dtype=float)
    if np.any(p < 0.0):
        raise ValueError("power in watts must be nonnegative")
    with np.errstate(divide="ignore"):
        out = 10.0 * np.log10(p) + 30.0
    if out.ndim == 0:
        return float(out)
    return out
