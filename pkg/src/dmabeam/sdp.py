"""Interior-point solver for trace-objective, trace-inequality semidefinite programs.

Problem family::

    minimize    sum_m Tr(C_m X_m)
    subject to  sum_m Tr(F_km X_m) >= b_k   (k = 1..K)
                X_m >= 0 (Hermitian PSD)

Solved as a primal-dual interior-point method (Nesterov-Todd scaling,
Mehrotra predictor-corrector) on the homogeneous self-dual embedding.  Each
Hermitian block is handled through its 2n x 2n real-symmetric embedding, and
the inequality constraints carry nonnegative slack scalars.  Infeasibility is
declared through the embedding's ray test (tau/kappa ratio) and reported with
a Farkas-type dual improving ray.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _core
from .numerics import as_complex_matrix, embed_hermitian, hermitian_eig

_EPS = np.finfo(float).eps


class RandomizationFailed(RuntimeError):
    """Raised when no randomized trial produces a feasible beam set."""


@dataclass
class TraceConstraint:
    """One inequality sum_m Tr(F_km X_m) >= rhs; terms are (block, matrix)."""

    terms: list
    rhs: float


@dataclass
class SdpProblem:
    block_dims: list
    objective: list
    constraints: list

    def __post_init__(self):
        if len(self.objective) != len(self.block_dims):
            raise ValueError("one objective matrix per block required")
        self.objective = [
            _check_hermitian(c, d, f"objective[{m}]")
            for m, (c, d) in enumerate(zip(self.objective, self.block_dims))
        ]
        for k, con in enumerate(self.constraints):
            seen = {}
            for m, f in con.terms:
                if not 0 <= m < len(self.block_dims):
                    raise ValueError(f"constraint {k} references unknown block {m}")
                f = _check_hermitian(f, self.block_dims[m], f"constraint[{k}] term")
                seen[m] = seen.get(m, 0) + f
            con.terms = sorted(seen.items())
            con.rhs = float(con.rhs)


@dataclass
class SdpSolution:
    blocks: list
    objective_value: float
    status: str  # "optimal" | "infeasible" | "max_iter"
    duality_gap: float
    constraint_residuals: np.ndarray
    dual_variables: np.ndarray
    iterations: int
    certificate: dict = field(default_factory=dict)


def _check_hermitian(m, dim, name):
    a = as_complex_matrix(m, name)
    if a.shape != (dim, dim):
        raise ValueError(f"{name} has shape {a.shape}, expected {(dim, dim)}")
    scale = max(1.0, np.abs(a).max())
    if np.abs(a - a.conj().T).max() > 1e-12 * scale:
        raise ValueError(f"{name} is not Hermitian within tolerance")
    return 0.5 * (a + a.conj().T)


def _sym(m):
    return 0.5 * (m + m.T)


def _nt_scaling(x, s):
    """NT scaling of a PD pair: (R, Rinv, lam) with R^-1 X R^-T = R^T S R = diag(lam)."""
    try:
        f = np.linalg.cholesky(x)
    except np.linalg.LinAlgError:
        w, v = _core.symmetric_eig(_sym(x))
        f = v * np.sqrt(np.clip(w, _EPS * max(1.0, w.max()), None))
    b = _sym(f.T @ s @ f)
    db, u = _core.symmetric_eig(b)
    db = np.clip(db, _EPS * max(1.0, db.max()), None)
    lam = np.sqrt(db)
    fu = f @ u
    r = fu * db**-0.25
    rinv = (db**-0.75)[:, None] * (fu.T @ s)
    return r, rinv, lam


def _min_eig(m):
    w, _ = _core.symmetric_eig(_sym(m), vectors=False)
    return float(w[0])


def _max_step(lam, dxt, dst, lam_nn, dxt_nn, dst_nn, tau, dtau, kappa, dkappa):
    """Largest step keeping all cone variables in the interior."""
    worst = min(dtau / tau, dkappa / kappa)
    for l, dx, ds in zip(lam, dxt, dst):
        scale = 1.0 / np.sqrt(l)
        worst = min(worst, _min_eig(scale[:, None] * dx * scale[None, :]))
        worst = min(worst, _min_eig(scale[:, None] * ds * scale[None, :]))
    if lam_nn.size:
        worst = min(worst, float(np.min(dxt_nn / lam_nn)), float(np.min(dst_nn / lam_nn)))
    if worst >= 0.0:
        return np.inf
    return 1.0 / (-worst)


class _EmbeddedProblem:
    """Real-symmetric embedded, equilibrated problem data."""

    def __init__(self, problem: SdpProblem):
        self.n_blocks = len(problem.block_dims)
        self.K = len(problem.constraints)
        self.cdims = list(problem.block_dims)
        self.dims = [2 * d for d in problem.block_dims]

        raw_f = [np.zeros((self.K, d, d), dtype=complex) for d in self.cdims]
        raw_b = np.zeros(self.K)
        for k, con in enumerate(problem.constraints):
            for m, f in con.terms:
                raw_f[m][k] = f
            raw_b[k] = con.rhs
        self.row_scale = np.array(
            [
                max(
                    max((np.linalg.norm(raw_f[m][k]) for m in range(self.n_blocks)), default=0.0),
                    1e-300,
                )
                for k in range(self.K)
            ]
        )
        self.obj_scale = max(
            max((np.linalg.norm(c) for c in problem.objective), default=0.0), 1e-300
        )
        b_rowed = 2.0 * raw_b / self.row_scale
        pos = np.abs(b_rowed[b_rowed != 0.0])
        self.var_scale = float(np.exp(np.mean(np.log(pos)))) if pos.size else 1.0
        self.b = b_rowed / self.var_scale
        self.G = [embed_hermitian(c) / self.obj_scale for c in problem.objective]
        self.A = [
            np.stack([embed_hermitian(raw_f[m][k]) / self.row_scale[k] for k in range(self.K)])
            if self.K
            else np.zeros((0, 2 * self.cdims[m], 2 * self.cdims[m]))
            for m in range(self.n_blocks)
        ]
        self.norm_b = np.linalg.norm(self.b)
        self.norm_g = np.sqrt(sum(np.sum(g * g) for g in self.G))

    def apply_a(self, x_mats, x_nn):
        out = np.empty(self.K)
        for k in range(self.K):
            out[k] = sum(np.sum(self.A[m][k] * x_mats[m]) for m in range(self.n_blocks))
        return out - x_nn

    def unscale_blocks(self, x_mats, tau):
        """Map embedded solver blocks back to complex Hermitian matrices."""
        out = []
        for m, y in enumerate(x_mats):
            d = self.cdims[m]
            y = y * (self.var_scale / tau)
            a = 0.5 * (y[:d, :d] + y[d:, d:])
            bb = 0.5 * (y[d:, :d] - y[:d, d:])
            x = a + 1j * 0.5 * (bb - bb.T)
            out.append(0.5 * (x + x.conj().T))
        return out


class _State:
    def __init__(self, prob):
        self.X = [np.eye(d) for d in prob.dims]
        self.S = [np.eye(d) for d in prob.dims]
        self.x_nn = np.ones(prob.K)
        self.s_nn = np.ones(prob.K)
        self.y = np.zeros(prob.K)
        self.tau = 1.0
        self.kappa = 1.0
        self.nu = sum(prob.dims) + prob.K + 1

    def residuals(self, prob):
        self.rp = prob.apply_a(self.X, self.x_nn) - self.tau * prob.b
        self.rd = [
            -np.einsum("k,kij->ij", self.y, prob.A[m]) - self.S[m] + self.tau * prob.G[m]
            for m in range(prob.n_blocks)
        ]
        self.rd_nn = self.y - self.s_nn
        self.cx = float(sum(np.sum(g * x) for g, x in zip(prob.G, self.X)))
        self.by = float(prob.b @ self.y)
        self.rg = self.by - self.cx - self.kappa

    def mu(self):
        dot = sum(np.sum(x * s) for x, s in zip(self.X, self.S))
        dot += float(self.x_nn @ self.s_nn) + self.tau * self.kappa
        return dot / self.nu

    def step(self, direction, alpha):
        for m in range(len(self.X)):
            self.X[m] = _sym(self.X[m] + alpha * direction["dX"][m])
            self.S[m] = _sym(self.S[m] + alpha * direction["dS"][m])
        self.x_nn = self.x_nn + alpha * direction["dx_nn"]
        self.s_nn = self.s_nn + alpha * direction["ds_nn"]
        self.y = self.y + alpha * direction["dy"]
        self.tau += alpha * direction["dtau"]
        self.kappa += alpha * direction["dkappa"]


class _Newton:
    """Per-iteration scaling data shared by the predictor and corrector solves."""

    def __init__(self, prob, state):
        self.prob = prob
        self.st = state
        self.scal = [_nt_scaling(x, s) for x, s in zip(state.X, state.S)]
        self.w_nn = np.sqrt(state.x_nn / state.s_nn)
        self.lam_nn = np.sqrt(state.x_nn * state.s_nn)
        self.TA = []
        self.TG = []
        self.TD = []
        for m, (r, _, _) in enumerate(self.scal):
            self.TA.append(np.einsum("ji,kjl,lo->kio", r, prob.A[m], r, optimize=True))
            self.TG.append(r.T @ prob.G[m] @ r)
            self.TD.append(r.T @ state.rd[m] @ r)
        k = prob.K
        schur = np.zeros((k, k))
        self.v_c = np.zeros(k)
        self.phi_cc = 0.0
        for ta, tg in zip(self.TA, self.TG):
            flat = ta.reshape(k, -1)
            schur += flat @ flat.T
            self.v_c += flat @ tg.ravel()
            self.phi_cc += float(np.sum(tg * tg))
        schur += np.diag(self.w_nn**2)
        rho = self.phi_cc + state.kappa / state.tau
        top = np.concatenate([schur, -(self.v_c + prob.b)[:, None]], axis=1)
        bot = np.concatenate([prob.b - self.v_c, [rho]])
        self.kkt = np.vstack([top, bot[None, :]])

    def solve(self, eta, d_mats, d_nn, d_tk):
        prob, st = self.prob, self.st
        k = prob.K
        e_mats = []
        g_d = np.zeros(k)
        v_d = np.zeros(k)
        cxd = 0.0
        phi_cd = 0.0
        for m, (_, _, lam) in enumerate(self.scal):
            denom = 0.5 * (lam[:, None] + lam[None, :])
            e = d_mats[m] / denom
            e_mats.append(e)
            flat = self.TA[m].reshape(k, -1)
            g_d += flat @ e.ravel()
            v_d += flat @ self.TD[m].ravel()
            cxd += float(np.sum(self.TG[m] * e))
            phi_cd += float(np.sum(self.TG[m] * self.TD[m]))
        e_nn = d_nn / self.lam_nn
        g_d -= self.w_nn * e_nn
        v_d -= self.w_nn**2 * st.rd_nn

        rhs = np.concatenate(
            [
                -eta * st.rp - g_d + eta * v_d,
                [-eta * st.rg + cxd - eta * phi_cd + d_tk / st.tau],
            ]
        )
        try:
            sol = np.linalg.solve(self.kkt, rhs)
        except np.linalg.LinAlgError:
            sol = np.linalg.lstsq(self.kkt, rhs, rcond=None)[0]
        dy, dtau = sol[:k], float(sol[k])

        d_s, d_st, d_x, d_xt = [], [], [], []
        for m, (r, _, _) in enumerate(self.scal):
            ds = (
                -np.einsum("k,kij->ij", dy, prob.A[m])
                + dtau * prob.G[m]
                + eta * st.rd[m]
            )
            dst = r.T @ ds @ r
            dxt = e_mats[m] - dst
            d_s.append(ds)
            d_st.append(dst)
            d_xt.append(dxt)
            d_x.append(_sym(r @ dxt @ r.T))
        ds_nn = dy + eta * st.rd_nn
        dst_nn = self.w_nn * ds_nn
        dxt_nn = e_nn - dst_nn
        dx_nn = self.w_nn * dxt_nn
        dkappa = (d_tk - st.kappa * dtau) / st.tau
        return {
            "dX": d_x,
            "dS": d_s,
            "dXt": d_xt,
            "dSt": d_st,
            "dx_nn": dx_nn,
            "ds_nn": ds_nn,
            "dxt_nn": dxt_nn,
            "dst_nn": dst_nn,
            "dy": dy,
            "dtau": dtau,
            "dkappa": dkappa,
        }


def solve(problem: SdpProblem, tol=1e-8, max_iter=100, gap_tol=1e-6) -> SdpSolution:
    """Solve the trace-inequality SDP with certified optimality.

    ``tol`` bounds the scaled primal/dual residuals and ``gap_tol`` the
    relative duality gap.  The solver keeps iterating toward strictly tighter
    targets while it makes progress, so reported solutions usually sit well
    inside the tolerances.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    prob = _EmbeddedProblem(problem)
    st = _State(prob)

    best = None
    iters_used = max_iter
    tiny_steps = 0
    for it in range(max_iter):
        st.residuals(prob)
        mu = st.mu()

        pres = np.linalg.norm(st.rp / st.tau) / (1.0 + prob.norm_b)
        dres = (
            np.sqrt(sum(np.sum(r * r) for r in st.rd) + float(st.rd_nn @ st.rd_nn))
            / st.tau
            / (1.0 + prob.norm_g)
        )
        cx, by = st.cx / st.tau, st.by / st.tau
        relgap = abs(cx - by) / (1.0 + abs(cx) + abs(by))
        if pres <= tol and dres <= tol and relgap <= gap_tol:
            best = _snapshot(st, it)
            if pres <= 0.01 * tol and dres <= 0.01 * tol and relgap <= 0.01 * gap_tol:
                iters_used = it
                break
        if st.tau <= 1e-8 * st.kappa:
            if best is not None:
                iters_used = it
                break
            return _infeasible_solution(problem, prob, st, it)

        try:
            newton = _Newton(prob, st)
            lam = [sc[2] for sc in newton.scal]
            aff = newton.solve(
                1.0,
                [np.diag(-l * l) for l in lam],
                -newton.lam_nn**2,
                -st.tau * st.kappa,
            )
            a_aff = min(
                1.0,
                _max_step(
                    lam,
                    aff["dXt"],
                    aff["dSt"],
                    newton.lam_nn,
                    aff["dxt_nn"],
                    aff["dst_nn"],
                    st.tau,
                    aff["dtau"],
                    st.kappa,
                    aff["dkappa"],
                ),
            )
            sigma = min(max((_mu_after(st, aff, a_aff) / mu) ** 3, 0.0), 0.99)

            d_comb = [
                np.diag(sigma * mu - l * l) - _sym(dxt @ dst)
                for l, dxt, dst in zip(lam, aff["dXt"], aff["dSt"])
            ]
            d_nn = sigma * mu - newton.lam_nn**2 - aff["dxt_nn"] * aff["dst_nn"]
            d_tk = sigma * mu - st.tau * st.kappa - aff["dtau"] * aff["dkappa"]
            comb = newton.solve(1.0 - sigma, d_comb, d_nn, d_tk)
            alpha = min(
                1.0,
                0.99
                * _max_step(
                    lam,
                    comb["dXt"],
                    comb["dSt"],
                    newton.lam_nn,
                    comb["dxt_nn"],
                    comb["dst_nn"],
                    st.tau,
                    comb["dtau"],
                    st.kappa,
                    comb["dkappa"],
                ),
            )
        except (np.linalg.LinAlgError, FloatingPointError, ArithmeticError):
            break
        if not np.isfinite(alpha) or alpha <= 1e-8:
            tiny_steps += 1
            if tiny_steps >= 3:
                break
            continue
        tiny_steps = 0
        st.step(comb, alpha)

    if best is None:
        st.residuals(prob)
        if st.tau <= 1e-8 * st.kappa:
            return _infeasible_solution(problem, prob, st, iters_used)
        return _finish(problem, prob, _snapshot(st, iters_used), "max_iter")
    return _finish(problem, prob, best, "optimal")


def _snapshot(st, it):
    return {
        "X": [x.copy() for x in st.X],
        "y": st.y.copy(),
        "tau": st.tau,
        "cx": st.cx,
        "by": st.by,
        "iterations": it,
    }


def _mu_after(st, d, alpha):
    dot = 0.0
    for x, s, dx, ds in zip(st.X, st.S, d["dX"], d["dS"]):
        dot += np.sum((x + alpha * dx) * (s + alpha * ds))
    dot += float((st.x_nn + alpha * d["dx_nn"]) @ (st.s_nn + alpha * d["ds_nn"]))
    dot += (st.tau + alpha * d["dtau"]) * (st.kappa + alpha * d["dkappa"])
    return dot / st.nu


def _finish(problem, prob, snap, status):
    blocks = prob.unscale_blocks(snap["X"], snap["tau"])
    objective = float(
        sum(np.real(np.sum(c.conj() * x)) for c, x in zip(problem.objective, blocks))
    )
    residuals = constraint_residuals(problem, blocks)
    cx = snap["cx"] / snap["tau"]
    by = snap["by"] / snap["tau"]
    relgap = abs(cx - by) / (1.0 + abs(cx) + abs(by))
    duals = snap["y"] * prob.obj_scale / prob.row_scale / snap["tau"]
    return SdpSolution(
        blocks=blocks,
        objective_value=objective,
        status=status,
        duality_gap=relgap,
        constraint_residuals=residuals,
        dual_variables=duals,
        iterations=snap["iterations"],
    )


def _infeasible_solution(problem, prob, st, it):
    by = st.by
    ray = st.y / max(by, _EPS)
    support = np.sqrt(
        sum(np.sum(r * r) for r in st.rd) + float(st.rd_nn @ st.rd_nn)
    ) / max(by, _EPS)
    return SdpSolution(
        blocks=[np.zeros((d, d), dtype=complex) for d in problem.block_dims],
        objective_value=np.inf,
        status="infeasible",
        duality_gap=np.inf,
        constraint_residuals=np.full(len(problem.constraints), -np.inf),
        dual_variables=st.y.copy(),
        iterations=it,
        certificate={
            "ray": ray / prob.row_scale,
            "improving_objective": by,
            "support_residual_norm": float(support),
        },
    )


def constraint_residuals(problem, blocks):
    """sum_m Tr(F_km X_m) - b_k for each constraint, in problem units."""
    out = np.empty(len(problem.constraints))
    for k, con in enumerate(problem.constraints):
        val = sum(np.real(np.sum(f.conj() * blocks[m])) for m, f in con.terms)
        out[k] = val - con.rhs
    return out


def extract_rank1(block):
    """Principal-eigenpair vector of a PSD block and its rank-1 quality.

    Returns (sqrt(lambda_1) v_1, lambda_2 / lambda_1); the zero matrix yields
    a zero vector with ratio 0.
    """
    block = np.asarray(block, dtype=complex)
    eig = hermitian_eig(block)
    w = eig.eigenvalues
    if w.size == 0 or w[0] <= 0.0:
        return np.zeros(block.shape[0], dtype=complex), 0.0
    vec = np.sqrt(w[0]) * eig.eigenvectors[:, 0]
    ratio = float(max(w[1], 0.0) / w[0]) if w.size > 1 else 0.0
    return vec, ratio


def power_allocation(gains, targets, noise_powers):
    """Minimum per-beam power scalings meeting the SINR targets with equality.

    ``gains[k, m]`` is the power coupling of beam m into user k.  Returns the
    scaling vector, or None when the targets are unattainable for these beams.
    """
    gains = np.asarray(gains, dtype=float)
    k = gains.shape[0]
    mat = -gains.copy()
    mat[np.diag_indices(k)] = np.diag(gains) / np.asarray(targets, dtype=float)
    try:
        p = np.linalg.solve(mat, np.asarray(noise_powers, dtype=float))
    except np.linalg.LinAlgError:
        return None
    if not np.all(np.isfinite(p)) or np.any(p <= 0.0):
        return None
    return p


def randomize_and_rescale(
    blocks, channels, targets, noise_powers, trials=64, seed=0, cost_matrix=None
):
    """Recover feasible beam vectors from solved PSD blocks.

    Draws Gaussian samples shaped by each block (the principal eigenvectors
    are always trial zero), then rescales per-beam powers through the minimal
    equality power allocation so every SINR target is met.  Returns the best
    trial; raises :class:`RandomizationFailed` when every trial fails.
    """
    m_beams = len(blocks)
    channels = [np.asarray(c) for c in channels]
    targets = np.asarray(targets, dtype=float)
    noise_powers = np.asarray(noise_powers, dtype=float)
    factors = []
    candidates0 = []
    for x in blocks:
        eig = hermitian_eig(x)
        w = np.clip(eig.eigenvalues, 0.0, None)
        factors.append(eig.eigenvectors * np.sqrt(w))
        candidates0.append(
            eig.eigenvectors[:, 0] * np.sqrt(w[0]) if w.size else np.zeros(0, dtype=complex)
        )

    rng = np.random.default_rng(seed)
    best = None
    n_feasible = 0
    for trial in range(trials + 1):
        if trial == 0:
            cand = candidates0
        else:
            cand = []
            for f in factors:
                g = rng.standard_normal(f.shape[1]) + 1j * rng.standard_normal(f.shape[1])
                cand.append(f @ (g / np.sqrt(2.0)))
        gains = np.empty((len(channels), m_beams))
        for k, ch in enumerate(channels):
            for m in range(m_beams):
                gains[k, m] = abs(np.vdot(ch, cand[m])) ** 2
        p = power_allocation(gains, targets, noise_powers)
        if p is None:
            continue
        if cost_matrix is None:
            costs = np.array([np.real(np.vdot(c, c)) for c in cand])
        else:
            costs = np.array([np.real(np.vdot(c, cost_matrix @ c)) for c in cand])
        total = float(p @ costs)
        n_feasible += 1
        # earlier trials win ties so an exactly rank-1 block keeps its
        # eigenvector solution (trial zero) unchanged
        if best is None or total < best[0] * (1.0 - 1e-9):
            best = (total, [np.sqrt(p[m]) * cand[m] for m in range(m_beams)], p, trial)
    if best is None:
        raise RandomizationFailed(
            f"all {trials + 1} randomization trials violated the SINR targets"
        )
    return {
        "vectors": best[1],
        "power": best[0],
        "scalings": best[2],
        "trial": best[3],
        "n_feasible": n_feasible,
    }


def dump_problem(problem, stream):
    """Write a problem in the plain-text block format (for external checks).

    Format: header ``SDPDUMP 1``; ``blocks M``; ``dims d1 ... dM``; one
    ``objective m`` section per block; ``constraints K``; per constraint a
    ``constraint k rhs <b>`` line followed by ``term m`` matrix sections.
    Matrices are row-major, one row per line, entries as ``re im`` pairs.
    """
    own = isinstance(stream, str)
    fh = open(stream, "w") if own else stream
    try:
        fh.write("SDPDUMP 1\n")
        fh.write(f"blocks {len(problem.block_dims)}\n")
        fh.write("dims " + " ".join(str(d) for d in problem.block_dims) + "\n")
        for m, c in enumerate(problem.objective):
            fh.write(f"objective {m}\n")
            _write_matrix(fh, c)
        fh.write(f"constraints {len(problem.constraints)}\n")
        for k, con in enumerate(problem.constraints):
            fh.write(f"constraint {k} rhs {con.rhs!r}\n")
            for m, f in con.terms:
                fh.write(f"term {m}\n")
                _write_matrix(fh, f)
        fh.write("end\n")
    finally:
        if own:
            fh.close()


def load_problem(stream):
    """Read back a problem written by :func:`dump_problem`."""
    own = isinstance(stream, str)
    fh = open(stream) if own else stream
    try:
        lines = [ln.strip() for ln in fh if ln.strip()]
    finally:
        if own:
            fh.close()
    it = iter(lines)
    if next(it) != "SDPDUMP 1":
        raise ValueError("not an SDPDUMP stream")
    n_blocks = int(next(it).split()[1])
    dims = [int(t) for t in next(it).split()[1:]]
    if len(dims) != n_blocks:
        raise ValueError("dims line does not match block count")
    objective = []
    for m in range(n_blocks):
        header = next(it).split()
        if header[:2] != ["objective", str(m)]:
            raise ValueError("malformed objective section")
        objective.append(_read_matrix(it, dims[m]))
    n_con = int(next(it).split()[1])
    constraints = []
    line = next(it)
    for _ in range(n_con):
        parts = line.split()
        rhs = float(parts[3])
        terms = []
        line = next(it)
        while line.startswith("term"):
            m = int(line.split()[1])
            terms.append((m, _read_matrix(it, dims[m])))
            line = next(it)
        constraints.append(TraceConstraint(terms=terms, rhs=rhs))
    return SdpProblem(block_dims=dims, objective=objective, constraints=constraints)


def _write_matrix(fh, m):
    for row in np.asarray(m, dtype=complex):
        fh.write(" ".join(f"{float(v.real)!r} {float(v.imag)!r}" for v in row) + "\n")


def _read_matrix(it, dim):
    rows = []
    for _ in range(dim):
        vals = [float(t) for t in next(it).split()]
        rows.append([complex(vals[2 * j], vals[2 * j + 1]) for j in range(dim)])
    return np.array(rows, dtype=complex)
