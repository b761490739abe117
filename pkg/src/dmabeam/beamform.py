"""The three transmit-power minimizers and solution evaluation.

Modes:

- ``FD``   fully digital: one lifted SDP over per-beam covariance blocks,
  rank-one extraction, randomized recovery when extraction is loose.
- ``DMA``  alternating optimization of digital precoders and Lorentzian
  weights: precoder step and weight step are both lifted SDPs, the weight
  proposal is scale-fitted and projected onto the Lorentzian circle, and the
  best feasible iterate is kept (the kept-power trace is non-increasing by
  construction).
- ``UW``   same alternation with unrestricted weights (no projection).  The
  run also tracks the projected trajectory as additional candidates, so an
  unrestricted-weight result never loses to the projected one on the same
  instance and seed.

All compared powers are recovered-feasible-point powers, never relaxation
bounds.
"""

from dataclasses import dataclass, field

import numpy as np

from . import dma as dma_mod
from . import sdp
from .sdp import RandomizationFailed, SdpProblem, TraceConstraint

MODES = ("FD", "DMA", "UW")

OBJECTIVE_REG = 1e-12  # trace-scaled ridge keeping the precoder SDP bounded


def sinr_target_from_rate(rate_bits):
    """Minimum-rate requirement (bits/s/Hz) to linear SINR threshold."""
    return 2.0 ** np.asarray(rate_bits, dtype=float) - 1.0


@dataclass(frozen=True)
class ScenarioInstance:
    """One solvable draw: channels, SINR targets, noise, optional array state."""

    channels: list
    targets: np.ndarray
    noise_powers: np.ndarray
    mode: str = "FD"
    dma: object = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        k = len(self.channels)
        if k < 1:
            raise ValueError("need at least one user")
        targets = np.asarray(self.targets, dtype=float)
        noise = np.asarray(self.noise_powers, dtype=float)
        if targets.shape != (k,) or noise.shape != (k,):
            raise ValueError("targets and noise_powers must have one entry per user")
        if np.any(targets <= 0) or np.any(noise <= 0):
            raise ValueError("targets and noise powers must be positive")
        object.__setattr__(self, "targets", targets)
        object.__setattr__(self, "noise_powers", noise)
        entries = [np.asarray(_entries(c), dtype=complex) for c in self.channels]
        n = entries[0].shape[0]
        if any(e.shape != (n,) for e in entries):
            raise ValueError("all channels must have equal length")
        object.__setattr__(self, "channels", entries)
        if self.mode in ("DMA", "UW"):
            if self.dma is None:
                raise ValueError(f"mode {self.mode} requires a DMA state")
            if n != self.dma.geometry.n_elements:
                raise ValueError("channel length must match the array size")
            if k > self.dma.geometry.n_rows:
                raise ValueError(
                    "more users than RF chains: beams are one per user "
                    f"(K={k} > N_r={self.dma.geometry.n_rows})"
                )
        elif k > n:
            raise ValueError(f"more users than antennas (K={k} > N={n})")

    @property
    def n_users(self):
        return len(self.channels)


def _entries(c):
    return c.entries if hasattr(c, "entries") else c


@dataclass
class BeamformingResult:
    precoders: list
    weights: object
    tx_power_watts: float
    achieved_sinrs: np.ndarray
    iterations: int
    power_trace_watts: list
    status: str  # "converged" | "infeasible" | "max_iter"
    rank_ratios: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)


def evaluate(instance, precoders, weights=None):
    """Transmit power and per-user SINRs of a candidate solution (exact, pure)."""
    if instance.mode == "FD":
        beams = [np.asarray(w, dtype=complex) for w in precoders]
    else:
        state = instance.dma if weights is None else instance.dma.with_weights(weights)
        beams = [dma_mod.transmit_vector(state, w) for w in precoders]
    k = instance.n_users
    if len(beams) != k:
        raise ValueError("expected one beam per user")
    received = np.array([[np.vdot(g, x) for x in beams] for g in instance.channels])
    power = float(sum(np.real(np.vdot(x, x)) for x in beams))
    sig = np.abs(np.diag(received)) ** 2
    interf = np.sum(np.abs(received) ** 2, axis=1) - sig
    sinrs = sig / (interf + instance.noise_powers)
    return power, sinrs


def dof_count(mode, n_rows, n_cols, m_beams):
    """Free optimization variables: N_r*N_c*M digitally, N_r*(M+N_c) for DMA/UW."""
    if n_rows < 1 or n_cols < 1 or m_beams < 1:
        raise ValueError("counts must be positive")
    if mode in ("FD", "OP1"):
        return n_rows * n_cols * m_beams
    if mode in ("DMA", "UW"):
        return n_rows * (m_beams + n_cols)
    raise ValueError(f"unknown mode {mode}")


def _sinr_constraints(effective, targets, noise_powers):
    outer = [np.outer(e, e.conj()) for e in effective]
    cons = []
    for k in range(len(effective)):
        terms = [(k, outer[k])]
        for m in range(len(effective)):
            if m != k:
                terms.append((m, -targets[k] * outer[k]))
        cons.append(TraceConstraint(terms=terms, rhs=targets[k] * noise_powers[k]))
    return cons


def _recovery_fallback(blocks, effective, targets, noise_powers):
    """Principal eigenvectors plus a uniform up-scaling meeting all targets."""
    beams = [sdp.extract_rank1(b)[0] for b in blocks]
    received = np.array([[np.vdot(g, x) for x in beams] for g in effective])
    sig = np.abs(np.diag(received)) ** 2
    interf = np.sum(np.abs(received) ** 2, axis=1) - sig
    # sinr_k(t) = t sig_k / (t interf_k + noise_k) increases in t
    margins = sig - targets * interf
    if np.any(margins <= 0):
        return None
    t = float(np.max(targets * noise_powers / margins))
    return [np.sqrt(max(t, 1.0)) * x for x in beams]


def solve_fd(instance, tol=1e-8, max_iter=100, recovery_trials=64, seed=0):
    """Fully digital minimum-power beamforming (one SDP solve plus recovery).

    With all blocks rank-one the recovered point attains the relaxation bound,
    hence the global optimum.  Channels are used exactly as built; spacing is
    chosen by whoever constructed the geometry (the benchmark harness builds
    half-wave and matched-spacing variants).
    """
    if instance.mode != "FD":
        raise ValueError("solve_fd expects an FD-mode instance")
    channels = instance.channels
    prob = SdpProblem(
        block_dims=[len(channels[0])] * instance.n_users,
        objective=[np.eye(len(channels[0]))] * instance.n_users,
        constraints=_sinr_constraints(channels, instance.targets, instance.noise_powers),
    )
    sol = sdp.solve(prob, tol=tol, max_iter=max_iter)
    if sol.status != "optimal":
        return BeamformingResult(
            precoders=[],
            weights=None,
            tx_power_watts=float("nan"),
            achieved_sinrs=None,
            iterations=sol.iterations,
            power_trace_watts=[],
            status="infeasible" if sol.status == "infeasible" else "max_iter",
            diagnostics={"sdp_status": sol.status, "certificate": sol.certificate},
        )
    ratios = [sdp.extract_rank1(b)[1] for b in sol.blocks]
    beams, diag = _recover_beams(
        sol.blocks,
        channels,
        instance.targets,
        instance.noise_powers,
        recovery_trials,
        seed,
    )
    if beams is None:
        return BeamformingResult(
            precoders=[],
            weights=None,
            tx_power_watts=float("nan"),
            achieved_sinrs=None,
            iterations=sol.iterations,
            power_trace_watts=[],
            status="max_iter",
            rank_ratios={"precoders": ratios},
            diagnostics={"sdp_status": "optimal", "recovery": "failed"},
        )
    power, sinrs = evaluate(instance, beams)
    return BeamformingResult(
        precoders=beams,
        weights=None,
        tx_power_watts=power,
        achieved_sinrs=sinrs,
        iterations=sol.iterations,
        power_trace_watts=[power],
        status="converged",
        rank_ratios={"precoders": ratios},
        diagnostics={
            "sdp_objective": sol.objective_value,
            "duality_gap": sol.duality_gap,
            **diag,
        },
    )


def _recover_beams(blocks, effective, targets, noise_powers, trials, seed, cost_matrix=None):
    try:
        rec = sdp.randomize_and_rescale(
            blocks,
            effective,
            targets,
            noise_powers,
            trials=trials,
            seed=seed,
            cost_matrix=cost_matrix,
        )
        return rec["vectors"], {"recovery_trial": rec["trial"]}
    except RandomizationFailed:
        beams = _recovery_fallback(blocks, effective, targets, noise_powers)
        if beams is None:
            return None, {"recovery": "failed"}
        return beams, {"recovery": "uniform-upscale"}


class _PrecoderStep:
    """Digital-precoder SDP for a fixed weight state (plus feasible recovery)."""

    def __init__(self, instance, tol, max_iter, recovery_trials):
        self.instance = instance
        self.tol = tol
        self.max_iter = max_iter
        self.trials = recovery_trials
        geo = instance.dma.geometry
        self.n_rows = geo.n_rows
        self.n_cols = geo.n_cols

    def solve(self, state, seed):
        inst = self.instance
        hq = state.waveguide_diag * state.weights
        # per-strip effective channel: received_km = vdot(eff_k, w_m)
        eff = [
            np.conj((g.conj() * hq).reshape(self.n_rows, self.n_cols).sum(axis=1))
            for g in inst.channels
        ]
        z = np.diag((np.abs(hq) ** 2).reshape(self.n_rows, self.n_cols).sum(axis=1))
        z_reg = z + OBJECTIVE_REG * (np.trace(z).real / self.n_rows) * np.eye(self.n_rows)
        prob = SdpProblem(
            block_dims=[self.n_rows] * inst.n_users,
            objective=[z_reg] * inst.n_users,
            constraints=_sinr_constraints(eff, inst.targets, inst.noise_powers),
        )
        sol = sdp.solve(prob, tol=self.tol, max_iter=self.max_iter)
        if sol.status != "optimal":
            return None
        ratios = [sdp.extract_rank1(b)[1] for b in sol.blocks]
        beams, _ = _recover_beams(
            sol.blocks, eff, inst.targets, inst.noise_powers, self.trials, seed, cost_matrix=z
        )
        if beams is None:
            return None
        power, sinrs = evaluate(inst, beams, weights=state.weights)
        if np.any(sinrs < inst.targets * (1.0 - 1e-6)):
            return None
        return {
            "precoders": beams,
            "power": power,
            "sinrs": sinrs,
            "rank_ratios": ratios,
            "sdp_objective": sol.objective_value,
        }


class _WeightStep:
    """Weight-update SDP for fixed precoders; returns the raw proposal vector."""

    def __init__(self, instance, tol, max_iter):
        self.instance = instance
        self.tol = tol
        self.max_iter = max_iter

    def solve(self, state, precoders):
        inst = self.instance
        data = dma_mod.build_weight_sdp(state, precoders, inst.channels)
        n = state.geometry.n_elements
        objective = data.b_tilde.sum(axis=0)
        objective += OBJECTIVE_REG * (np.trace(objective).real / n) * np.eye(n)
        cons = []
        for k in range(inst.n_users):
            coeff = data.big_c_tilde[k, k].copy()
            for m in range(len(precoders)):
                if m != k:
                    coeff -= inst.targets[k] * data.big_c_tilde[k, m]
            cons.append(
                TraceConstraint(terms=[(0, coeff)], rhs=inst.targets[k] * inst.noise_powers[k])
            )
        prob = SdpProblem(block_dims=[n], objective=[objective], constraints=cons)
        sol = sdp.solve(prob, tol=self.tol, max_iter=self.max_iter)
        if sol.status != "optimal":
            return None
        proposal, ratio = sdp.extract_rank1(sol.blocks[0])
        return {"proposal": proposal, "rank_ratio": ratio}


class _AlternatingRun:
    """One free-running alternation trajectory (projected or unrestricted).

    The working iterates advance every step regardless of acceptance; the
    caller tracks kept-best candidates.  Identical seeds give identical
    trajectories, so an unrestricted run can replay the projected run
    exactly as a shadow candidate stream.
    """

    def __init__(self, instance, mapped, seed, tol, max_iter, recovery_trials, init_retries=5):
        self.instance = instance
        self.mapped = mapped
        self.precoder_step = _PrecoderStep(instance, tol, max_iter, recovery_trials)
        self.weight_step = _WeightStep(instance, tol, max_iter)
        self.seed = int(seed)
        self.n = instance.dma.geometry.n_elements
        self.stopped = False
        self.stall = 0
        self.t = 0
        self.state = None
        self.working = None
        self.best_power = np.inf
        self.init_retries = init_retries

    def initialize(self):
        """Draw random circle-phase weights; retry on an infeasible first step."""
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence((self.seed, 1))))
        for _ in range(self.init_retries + 1):
            q0 = dma_mod.random_lorentzian_weights(self.n, rng)
            state = self.instance.dma.with_weights(q0, lorentzian=True)
            cand = self.precoder_step.solve(state, seed=self._seed(0))
            if cand is not None:
                self.state = state
                self.working = cand
                self.best_power = cand["power"]
                return {**cand, "weights": q0, "weight_rank_ratio": 0.0}
        self.stopped = True
        return None

    def _seed(self, t):
        # deterministic per (seed, step), independent of the projection flag
        return int(np.random.SeedSequence((self.seed, 2, t)).generate_state(1)[0])

    def step(self):
        """Advance one outer iteration; returns the new candidate or None."""
        if self.stopped or self.working is None:
            return None
        self.t += 1
        update = self.weight_step.solve(self.state, self.working["precoders"])
        if update is not None:
            proposal = update["proposal"]
            if self.mapped:
                q_new = dma_mod.map_to_lorentzian(proposal)
            else:
                q_new = proposal
            self.state = self.instance.dma.with_weights(q_new, lorentzian=self.mapped)
        cand = self.precoder_step.solve(self.state, seed=self._seed(self.t))
        if cand is None:
            return None  # keep previous working precoders, try again next step
        self.working = cand
        if cand["power"] <= self.best_power:
            improvement = (self.best_power - cand["power"]) / max(self.best_power, 1e-300)
            self.best_power = cand["power"]
            if improvement < 1e-4:
                self.stall += 1
            else:
                self.stall = 0
            if self.stall >= 3:
                self.stopped = True
        return {
            **cand,
            "weights": self.state.weights,
            "weight_rank_ratio": update["rank_ratio"] if update else np.nan,
        }


def _run_alternation(instance, runs, max_outer):
    """Drive one or more trajectories, keeping the best candidate overall."""
    best = None
    trace = []
    for run in runs:
        cand = run.initialize()
        if cand is not None and (best is None or cand["power"] < best["power"]):
            best = cand
    if best is None:
        return None, [], 0
    trace.append(best["power"])
    outer = 0
    for t in range(1, max_outer + 1):
        if all(r.stopped for r in runs):
            break
        outer = t
        for run in runs:
            cand = run.step()
            if cand is not None and cand["power"] < best["power"]:
                best = cand
        trace.append(best["power"])
    return best, trace, outer


def _alternating_result(instance, best, trace, outer):
    if best is None:
        return BeamformingResult(
            precoders=[],
            weights=None,
            tx_power_watts=float("nan"),
            achieved_sinrs=None,
            iterations=0,
            power_trace_watts=[],
            status="infeasible",
            diagnostics={"reason": "no feasible initialization"},
        )
    return BeamformingResult(
        precoders=best["precoders"],
        weights=best["weights"],
        tx_power_watts=best["power"],
        achieved_sinrs=best["sinrs"],
        iterations=outer,
        power_trace_watts=trace,
        status="converged",
        rank_ratios={
            "precoders": best["rank_ratios"],
            "weights": best["weight_rank_ratio"],
        },
        diagnostics={"sdp_objective": best["sdp_objective"]},
    )


def solve_dma(instance, max_outer=20, q_init_seed=0, tol=1e-8, max_iter=100, recovery_trials=64):
    """Alternating precoder / Lorentzian-weight optimization.

    Initializes circle weights from the seed, then alternates the two lifted
    SDP steps, projecting every weight proposal onto the Lorentzian circle.
    Keeps the best feasible iterate; the kept trace is non-increasing.  An
    infeasible first precoder step retries fresh initializations before
    giving up; an infeasible weight step keeps the previous weights.
    """
    if instance.mode != "DMA":
        raise ValueError("solve_dma expects a DMA-mode instance")
    run = _AlternatingRun(instance, True, q_init_seed, tol, max_iter, recovery_trials)
    best, trace, outer = _run_alternation(instance, [run], max_outer)
    return _alternating_result(instance, best, trace, outer)


def solve_uw(instance, max_outer=20, q_init_seed=0, tol=1e-8, max_iter=100, recovery_trials=64):
    """Unrestricted-weight alternation (projection step skipped).

    The projected trajectory is replayed alongside as a shadow candidate
    stream: every Lorentzian iterate is also a valid unrestricted candidate,
    which pins the unrestricted result at or below the projected result on
    matched instances and seeds.
    """
    if instance.mode != "UW":
        raise ValueError("solve_uw expects a UW-mode instance")
    free = _AlternatingRun(instance, False, q_init_seed, tol, max_iter, recovery_trials)
    shadow = _AlternatingRun(instance, True, q_init_seed, tol, max_iter, recovery_trials)
    best, trace, outer = _run_alternation(instance, [free, shadow], max_outer)
    return _alternating_result(instance, best, trace, outer)
