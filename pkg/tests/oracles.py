"""Independent oracles used by the test suite.

Everything here is deliberately written from scratch (scalar loops, grid
search, closed forms) and never calls into the optimization paths it checks.
"""

import numpy as np


def mrt_power(channel, target, noise_power):
    """Closed-form single-user minimum transmit power."""
    return float(target * noise_power / np.linalg.norm(channel) ** 2)


def sinr_by_hand(channels, beams, noise_powers):
    """SINR of each user under simultaneous beams, via explicit scalar sums."""
    sinrs = []
    for k in range(len(channels)):
        received = []
        for m in range(len(beams)):
            acc = 0.0 + 0.0j
            for n in range(len(channels[k])):
                acc += np.conj(channels[k][n]) * beams[m][n]
            received.append(acc)
        num = abs(received[k]) ** 2
        den = float(noise_powers[k])
        for m in range(len(beams)):
            if m != k:
                den += abs(received[m]) ** 2
        sinrs.append(num / den)
    return np.array(sinrs)


def _unit_beam(a, phi):
    return np.array([np.cos(a), np.sin(a) * np.exp(1j * phi)])


def _two_user_total_power(g11, g12, g21, g22, d1, d2, s1, s2):
    """Total power of the equality-allocation for fixed unit beams, else inf."""
    det = (g11 / d1) * (g22 / d2) - g12 * g21
    if det <= 0.0:
        return np.inf
    p1 = (s1 * (g22 / d2) + s2 * g12) / det
    p2 = (s2 * (g11 / d1) + s1 * g21) / det
    if p1 <= 0.0 or p2 <= 0.0:
        return np.inf
    return p1 + p2


def brute_force_min_power(channels, targets, noise_powers, grid=24, polish_rounds=4):
    """Grid + golden-section polish of the min-power beamforming problem.

    Supports one user (closed form) or two users with length-2 channels.  The
    search runs over unit-norm beam directions with powers from the equality
    allocation, which is globally optimal for fixed directions.
    """
    if len(channels) == 1:
        return mrt_power(channels[0], targets[0], noise_powers[0])
    if len(channels) != 2 or len(channels[0]) != 2:
        raise ValueError("brute force oracle covers K<=2 with dim-2 blocks only")
    g1, g2 = np.asarray(channels[0]), np.asarray(channels[1])
    d1, d2 = float(targets[0]), float(targets[1])
    s1, s2 = float(noise_powers[0]), float(noise_powers[1])

    a_grid = np.linspace(0.0, np.pi / 2, grid)
    phi_grid = np.linspace(0.0, 2 * np.pi, grid, endpoint=False)
    aa, pp = np.meshgrid(a_grid, phi_grid, indexing="ij")
    beams = np.stack([np.cos(aa), np.sin(aa) * np.exp(1j * pp)], axis=-1).reshape(-1, 2)

    # coupling gains of every direction into both users
    c1 = np.abs(beams @ g1.conj()) ** 2
    c2 = np.abs(beams @ g2.conj()) ** 2
    g11 = c1[:, None]
    g12 = c1[None, :]
    g21 = c2[:, None]
    g22 = c2[None, :]
    det = (g11 / d1) * (g22 / d2) - g12 * g21
    with np.errstate(divide="ignore", invalid="ignore"):
        p1 = (s1 * (g22 / d2) + s2 * g12) / det
        p2 = (s2 * (g11 / d1) + s1 * g21) / det
        total = np.where((det > 0) & (p1 > 0) & (p2 > 0), p1 + p2, np.inf)
    best_flat = int(np.argmin(total))
    i, j = np.unravel_index(best_flat, total.shape)
    x = [aa.ravel()[i], pp.ravel()[i], aa.ravel()[j], pp.ravel()[j]]

    def objective(v):
        u1 = _unit_beam(v[0], v[1])
        u2 = _unit_beam(v[2], v[3])
        return _two_user_total_power(
            abs(np.vdot(g1, u1)) ** 2,
            abs(np.vdot(g1, u2)) ** 2,
            abs(np.vdot(g2, u1)) ** 2,
            abs(np.vdot(g2, u2)) ** 2,
            d1,
            d2,
            s1,
            s2,
        )

    span = [np.pi / grid, 2 * np.pi / grid] * 2
    for _ in range(polish_rounds):
        for c in range(4):
            x[c] = _golden(lambda t, c=c: objective(x[:c] + [t] + x[c + 1 :]),
                           x[c] - span[c], x[c] + span[c])
        span = [s * 0.25 for s in span]
    return float(objective(x))


def _golden(f, lo, hi, iters=60):
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


def ks_statistic(samples, cdf):
    """Kolmogorov-Smirnov statistic of samples against a target CDF."""
    x = np.sort(np.asarray(samples))
    n = x.size
    target = cdf(x)
    upper = np.arange(1, n + 1) / n - target
    lower = target - np.arange(0, n) / n
    return float(max(upper.max(), lower.max()))
