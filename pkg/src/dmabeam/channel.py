"""Planar array geometry, element pattern, spherical-wave channel, user sampling.

The array lies in the xy-plane centered on the origin, elements indexed
row-major: element (i, l) of row i (microstrip i) and column l maps to flat
index (i-1)*N_c + (l-1).  All distances are meters, powers watts; dBm only at
I/O boundaries.
"""

from dataclasses import dataclass, field

import numpy as np

SPEED_OF_LIGHT = 299792458.0

ZONES = ("near", "far", "combined")


@dataclass(frozen=True)
class ArrayGeometry:
    """Uniform planar array: rows along y (one microstrip per row), columns along x."""

    n_rows: int
    n_cols: int
    d_x: float
    d_y: float
    aperture_side: float
    gain_exponent: float
    element_positions: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        if self.n_rows < 1 or self.n_cols < 1:
            raise ValueError("element counts must be positive")
        if self.d_x <= 0 or self.d_y <= 0:
            raise ValueError("element spacings must be positive")
        if self.element_positions is None:
            object.__setattr__(self, "element_positions", self._grid())
        pos = np.asarray(self.element_positions, dtype=float)
        if pos.shape != (self.n_rows * self.n_cols, 3):
            raise ValueError("element_positions must have shape (N, 3)")
        if np.any(pos[:, 2] != 0.0):
            raise ValueError("elements must lie in the xy-plane (z = 0)")
        object.__setattr__(self, "element_positions", pos)

    def _grid(self):
        rows = (np.arange(self.n_rows) - (self.n_rows - 1) / 2.0) * self.d_y
        cols = (np.arange(self.n_cols) - (self.n_cols - 1) / 2.0) * self.d_x
        yy, xx = np.meshgrid(rows, cols, indexing="ij")
        pos = np.zeros((self.n_rows * self.n_cols, 3))
        pos[:, 0] = xx.ravel()
        pos[:, 1] = yy.ravel()
        return pos

    @property
    def n_elements(self):
        return self.n_rows * self.n_cols

    @classmethod
    def from_aperture(
        cls,
        frequency_hz,
        aperture_m,
        d_x_over_lambda=0.5,
        d_y_over_lambda=0.5,
        gain_exponent=2.0,
    ):
        """Geometry from aperture side length and spacings in wavelengths.

        Row and column counts are floor(D / spacing); at the default half-wave
        row spacing this equals floor(2 D / lambda) rows.
        """
        if frequency_hz <= 0 or aperture_m <= 0:
            raise ValueError("frequency and aperture must be positive")
        lam = SPEED_OF_LIGHT / frequency_hz
        d_x = d_x_over_lambda * lam
        d_y = d_y_over_lambda * lam
        return cls(
            n_rows=int(np.floor(aperture_m / d_y)),
            n_cols=int(np.floor(aperture_m / d_x)),
            d_x=d_x,
            d_y=d_y,
            aperture_side=aperture_m,
            gain_exponent=gain_exponent,
        )


@dataclass(frozen=True)
class ChannelVector:
    """Per-element complex gains seen by one user, ordered like the geometry."""

    user_index: int
    entries: np.ndarray
    user_position: np.ndarray


def element_gain(psi, gain_exponent):
    """Element power pattern: 2(g+1) cos^g(psi) facing forward, zero behind."""
    psi_arr = np.asarray(psi, dtype=float)
    if np.any(psi_arr < 0.0) or np.any(psi_arr > np.pi):
        raise ValueError("psi must lie in [0, pi]")
    forward = psi_arr <= np.pi / 2
    out = np.where(
        forward,
        2.0 * (gain_exponent + 1.0) * np.cos(np.where(forward, psi_arr, 0.0)) ** gain_exponent,
        0.0,
    )
    if out.ndim == 0:
        return float(out)
    return out


def fraunhofer_distance(aperture_length, wavelength):
    """Near-field / far-field boundary 2 D^2 / lambda."""
    if aperture_length <= 0 or wavelength <= 0:
        raise ValueError("aperture and wavelength must be positive")
    return 2.0 * aperture_length**2 / wavelength


def channel_vector(geometry, user_position, wavelength, user_index=0):
    """Spherical-wave gains from every element to a user position.

    Entry magnitude is sqrt(G_e(psi)) * lambda / (4 pi d) with phase -beta0*d,
    where psi is the element-to-user angle off the +z boresight axis; elements
    looking backward (psi > pi/2) contribute exactly zero.
    """
    user = np.asarray(user_position, dtype=float)
    if user.shape != (3,):
        raise ValueError("user position must be a 3-vector")
    diff = user[None, :] - geometry.element_positions
    dist = np.linalg.norm(diff, axis=1)
    if np.any(dist == 0.0):
        raise ValueError("user position coincides with an array element")
    cos_psi = diff[:, 2] / dist
    g = geometry.gain_exponent
    gain = np.where(cos_psi >= 0.0, 2.0 * (g + 1.0) * np.clip(cos_psi, 0.0, None) ** g, 0.0)
    beta0 = 2.0 * np.pi / wavelength
    amps = np.sqrt(gain) * wavelength / (4.0 * np.pi * dist)
    entries = amps * np.exp(-1j * beta0 * dist)
    return ChannelVector(user_index=user_index, entries=entries, user_position=user)


@dataclass(frozen=True)
class UserSampler:
    """Draws user positions on half-circles in the xz-plane.

    Radial intervals per zone (as fractions of the Fraunhofer distance):
    near (0.1, 1), far (1, 5), combined (0.1, 5).  The lower bound is
    additionally clipped to ``min_radius`` so users never enter the reactive
    region right at the aperture.  Sampling is stateless: the same sampler
    yields the same points; use :meth:`split` for independent per-realization
    streams.
    """

    zone: str
    fraunhofer_distance: float
    rng_seed: object
    min_radius: float = 0.0

    def __post_init__(self):
        if self.zone not in ZONES:
            raise ValueError(f"zone must be one of {ZONES}")
        if self.fraunhofer_distance <= 0:
            raise ValueError("fraunhofer_distance must be positive")

    def radial_bounds(self):
        lo_f, hi_f = {"near": (0.1, 1.0), "far": (1.0, 5.0), "combined": (0.1, 5.0)}[
            self.zone
        ]
        lo = max(lo_f * self.fraunhofer_distance, self.min_radius)
        hi = hi_f * self.fraunhofer_distance
        if lo >= hi:
            raise ValueError("zone radial interval is empty after clipping")
        return lo, hi

    def split(self, stream_id):
        """Independent child sampler for one realization (counter-based streams)."""
        child = np.random.SeedSequence(_entropy_of(self.rng_seed), spawn_key=(stream_id,))
        return UserSampler(
            zone=self.zone,
            fraunhofer_distance=self.fraunhofer_distance,
            rng_seed=child,
            min_radius=self.min_radius,
        )

    def generator(self):
        seq = (
            self.rng_seed
            if isinstance(self.rng_seed, np.random.SeedSequence)
            else np.random.SeedSequence(self.rng_seed)
        )
        return np.random.Generator(np.random.Philox(seq))


def _entropy_of(seed):
    if isinstance(seed, np.random.SeedSequence):
        return seed.entropy
    return seed


def sampler_for_geometry(geometry, wavelength, zone, seed):
    """Sampler matched to a geometry: Fraunhofer bound from the aperture side,
    minimum radius 1.2x the aperture diagonal."""
    d_f = fraunhofer_distance(geometry.aperture_side, wavelength)
    diag = np.sqrt(2.0) * geometry.aperture_side
    return UserSampler(zone=zone, fraunhofer_distance=d_f, rng_seed=seed, min_radius=1.2 * diag)


def sample_users(sampler, k):
    """k positions with x = r sin(theta), z = r cos(theta), y = 0.

    theta is uniform on (-pi/2, pi/2) and r uniform on the zone's radial
    interval; deterministic for a given sampler seed.
    """
    if k < 1:
        raise ValueError("need at least one user")
    rng = sampler.generator()
    lo, hi = sampler.radial_bounds()
    r = rng.uniform(lo, hi, size=k)
    theta = rng.uniform(-np.pi / 2, np.pi / 2, size=k)
    pts = np.zeros((k, 3))
    pts[:, 0] = r * np.sin(theta)
    pts[:, 2] = r * np.cos(theta)
    return pts
