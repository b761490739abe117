"""Waveguide-fed array state, Lorentzian weight set, weight-step problem data.

A state couples the planar geometry (one microstrip per row, feeding N_c
elements) with per-element waveguide gains h and tunable weights q.  The
admissible hardware weights live on the Lorentzian circle
q = (j + e^{j phi}) / 2, i.e. |q - j/2| = 1/2: amplitude and phase are
coupled, never independently settable.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from .numerics import vec
from .sdp import extract_rank1

CIRCLE_CENTER = 0.5j
CIRCLE_RADIUS = 0.5


@dataclass(frozen=True)
class DmaState:
    """Geometry plus waveguide gains (diagonal) and per-element weights.

    ``weights`` holds the N reduced weight entries in element order (entry
    n = (i-1)*N_c + l is the weight of element l on microstrip i).  The full
    weight matrix is N x N_r block-diagonal: column i is supported exactly on
    microstrip i's elements.
    """

    geometry: object
    weights: np.ndarray
    waveguide_diag: np.ndarray = None
    lorentzian: bool = False
    element_offsets: np.ndarray = field(default=None, repr=False)
    alpha: np.ndarray = field(default=None, repr=False)
    beta: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        n = self.geometry.n_elements
        q = np.asarray(self.weights, dtype=complex)
        if q.shape != (n,):
            raise ValueError(f"weights must have length {n}")
        object.__setattr__(self, "weights", q)
        if self.waveguide_diag is None:
            h = _waveguide_diag(self.geometry, self.element_offsets, self.alpha, self.beta)
            object.__setattr__(self, "waveguide_diag", h)
        h = np.asarray(self.waveguide_diag, dtype=complex)
        if h.shape != (n,):
            raise ValueError(f"waveguide_diag must have length {n}")
        if np.any(np.abs(h) > 1.0 + 1e-12):
            raise ValueError("waveguide gains must have magnitude <= 1")
        object.__setattr__(self, "waveguide_diag", h)
        if self.lorentzian:
            dist = np.abs(np.abs(q - CIRCLE_CENTER) - CIRCLE_RADIUS)
            if np.any(dist > 1e-9):
                raise ValueError("weights marked Lorentzian are off the circle")

    @property
    def strip_index(self):
        """Microstrip (row) of each element, in element order."""
        return np.arange(self.geometry.n_elements) // self.geometry.n_cols

    def weight_matrix(self):
        """Materialize the block-diagonal N x N_r weight matrix."""
        geo = self.geometry
        q_mat = np.zeros((geo.n_elements, geo.n_rows), dtype=complex)
        q_mat[np.arange(geo.n_elements), self.strip_index] = self.weights
        return q_mat

    def structural_nonzero_indices(self):
        """Column-major vec indices of the structurally nonzero weight entries.

        Index map behind the reduction from the N*N_r-long vectorized weight
        matrix down to the N live entries; entry n sits at vec position
        strip(n)*N + n.
        """
        n = np.arange(self.geometry.n_elements)
        return self.strip_index * self.geometry.n_elements + n

    def with_weights(self, weights, lorentzian=False):
        return replace(self, weights=np.asarray(weights, dtype=complex), lorentzian=lorentzian)


def _waveguide_diag(geometry, offsets, alpha, beta):
    if offsets is None and alpha is None and beta is None:
        return np.ones(geometry.n_elements, dtype=complex)  # flat response
    offsets = np.asarray(offsets, dtype=float)
    alpha = np.zeros(geometry.n_rows) if alpha is None else np.asarray(alpha, dtype=float)
    beta = np.zeros(geometry.n_rows) if beta is None else np.asarray(beta, dtype=float)
    if offsets.shape != (geometry.n_elements,):
        raise ValueError("element_offsets must have one entry per element")
    if alpha.shape != (geometry.n_rows,) or beta.shape != (geometry.n_rows,):
        raise ValueError("alpha/beta must have one entry per microstrip")
    if np.any(alpha < 0):
        raise ValueError("attenuation constants must be nonnegative")
    strip = np.arange(geometry.n_elements) // geometry.n_cols
    return np.exp(-offsets * (alpha[strip] + 1j * beta[strip]))


def transmit_vector(state, w):
    """Aperture excitation H Q w for one digital precoder, via block structure."""
    w = np.asarray(w, dtype=complex)
    if w.shape != (state.geometry.n_rows,):
        raise ValueError(f"precoder must have length {state.geometry.n_rows}")
    return state.waveguide_diag * state.weights * w[state.strip_index]


def lorentzian_project(z, return_ties=False):
    """Entry-wise nearest point on the Lorentzian circle.

    The circle center maps to q = j (phase pi/2); that tie is reported in the
    optional mask.  The result satisfies |q - j/2| = 1/2 exactly.
    """
    z = np.asarray(z, dtype=complex)
    offset = z - CIRCLE_CENTER
    radius = np.abs(offset)
    ties = radius == 0.0
    safe = np.where(ties, 1.0, radius)
    direction = np.where(ties, 1.0 + 0.0j, offset / safe)
    out = CIRCLE_CENTER + CIRCLE_RADIUS * direction
    out = np.where(ties, 1.0j, out)
    if out.ndim == 0:
        out = complex(out)
        ties = bool(ties)
    if return_ties:
        return out, ties
    return out


def lorentzian_phase(q):
    """Phase phi with q = (j + e^{j phi})/2, in [0, 2 pi)."""
    q = np.asarray(q, dtype=complex)
    return np.angle(2.0 * q - 1.0j) % (2.0 * np.pi)


def random_lorentzian_weights(n, rng):
    """Weights with i.i.d. uniform circle phases (seeded initialization)."""
    phi = rng.uniform(0.0, 2.0 * np.pi, size=n)
    return (1.0j + np.exp(1j * phi)) / 2.0


def circle_distance(z):
    """Entry-wise distance to the Lorentzian circle."""
    return np.abs(np.abs(np.asarray(z, dtype=complex) - CIRCLE_CENTER) - CIRCLE_RADIUS)


def fit_circle_scale(q_star, n_theta=64, n_beta=96, golden_iters=60):
    """Best scalar beta*e^{j theta} aligning a weight proposal with the circle.

    The eigenvector step leaves scale and global phase arbitrary; this fits
    them over a theta grid with a beta line search per grid point.  Quality is
    the summed squared circle distance normalized by the scaled cloud energy:
    the raw distance sum is degenerate (the origin lies on the circle, so
    beta -> 0 collapses any cloud onto it), while the normalized form is
    scale-invariant and zero exactly for a perfectly aligned cloud.  The
    identity (beta=1, theta=0) is always in the candidate set, so the fit
    never loses to no fit.
    """
    q = np.asarray(q_star, dtype=complex).ravel()
    energy = np.sum(np.abs(q) ** 2)
    rms = np.sqrt(energy / q.size)
    if rms == 0.0:
        return 1.0, 0.0

    def cost(b, t):
        resid = np.sum(circle_distance(b * np.exp(1j * t) * q) ** 2)
        return float(resid / (b * b * energy))

    lo, hi = 1e-3 * CIRCLE_RADIUS / rms, 20.0 * CIRCLE_RADIUS / rms
    betas = np.geomspace(lo, hi, n_beta)
    best = (cost(1.0, 0.0), 1.0, 0.0)
    for t in np.linspace(0.0, 2.0 * np.pi, n_theta, endpoint=False):
        costs = [cost(b, t) for b in betas]
        j = int(np.argmin(costs))
        b_lo = betas[max(0, j - 1)]
        b_hi = betas[min(n_beta - 1, j + 1)]
        b = _golden_min(lambda b: cost(b, t), b_lo, b_hi, golden_iters)
        c = cost(b, t)
        if c < best[0]:
            best = (c, b, t)
    return best[1], best[2]


def _golden_min(f, lo, hi, iters):
    inv_phi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = f(d)
    return (a + b) / 2.0


def map_to_lorentzian(q_star):
    """Scale-fit then entry-wise projection of a weight proposal."""
    beta, theta = fit_circle_scale(q_star)
    return lorentzian_project(beta * np.exp(1j * theta) * np.asarray(q_star, dtype=complex))


@dataclass(frozen=True)
class WeightSdpData:
    """Reduced problem data for the weight-optimization step.

    ``b_tilde[m]`` gives the transmit-power quadratic form of beam m in the
    reduced weight vector; ``c_tilde[k, m]`` the effective channel of beam m
    into user k (received amplitude is c_tilde^H q); ``big_c_tilde`` the
    rank-one received-power forms.
    """

    b_tilde: np.ndarray
    c_tilde: np.ndarray
    big_c_tilde: np.ndarray


def build_weight_sdp(state, precoders, channels):
    """Quadratic forms of transmit and received power in the reduced weights.

    Uses the structural index map of the block-diagonal weight matrix: the
    vectorized weight matrix is reduced to its N live entries, under which the
    per-beam aperture map becomes diagonal.
    """
    geo = state.geometry
    n = geo.n_elements
    m_beams = len(precoders)
    k_users = len(channels)
    if m_beams != min(k_users, geo.n_rows):
        raise ValueError(
            f"{m_beams} beams for {k_users} users on {geo.n_rows} microstrips; "
            f"expected min(K, N_r) = {min(k_users, geo.n_rows)}"
        )
    w_stack = np.stack([np.asarray(w, dtype=complex) for w in precoders])
    if w_stack.shape != (m_beams, geo.n_rows):
        raise ValueError("each precoder must have one entry per microstrip")
    gam = np.stack([np.asarray(c, dtype=complex) for c in channels])
    if gam.shape != (k_users, n):
        raise ValueError("each channel must have one entry per element")

    nz = state.structural_nonzero_indices()
    strip_of = nz // n  # recover the strip of each live entry from the map
    h = state.waveguide_diag
    diag_map = w_stack[:, strip_of] * h[None, :]  # (M, N): x_m = diag_map[m] * q

    b_tilde = np.zeros((m_beams, n, n), dtype=complex)
    idx = np.arange(n)
    for m in range(m_beams):
        b_tilde[m, idx, idx] = np.abs(diag_map[m]) ** 2

    # received amplitude of beam m at user k: sum_n conj(gamma_kn) h_n w_m,strip(n) q_n
    rho = gam.conj()[:, None, :] * diag_map[None, :, :]  # (K, M, N)
    c_tilde = rho.conj()
    big_c_tilde = c_tilde[..., :, None] * c_tilde.conj()[..., None, :]
    return WeightSdpData(b_tilde=b_tilde, c_tilde=c_tilde, big_c_tilde=big_c_tilde)


def dense_weight_reduction(state, precoder, channel=None):
    """Reference construction of the reduced forms via explicit Kronecker products.

    Builds the full L = N*N_r vectorized operators and deletes the
    structurally zero columns by the index map.  Cross-checks the fast path;
    returns the dense reduced aperture map (channel None) or the reduced
    received-amplitude row for the given channel.
    """
    geo = state.geometry
    h_full = np.diag(state.waveguide_diag)
    w = np.asarray(precoder, dtype=complex)
    nz = state.structural_nonzero_indices()
    if channel is None:
        op = np.kron(w[None, :], h_full)  # (N, L), x = op @ vec(Q)
        return op[:, nz]
    row = np.asarray(channel, dtype=complex).conj()[None, :] @ h_full
    op = np.kron(w[None, :], row)  # (1, L)
    return op[0, nz]


extract_weight_vector = extract_rank1
