"""Monte-Carlo experiment runner: paired-draw mode comparisons, stats, export.

Each realization draws user positions once and evaluates every requested mode
on that same draw.  Realizations are independent work items with their own
counter-based RNG streams derived from (seed, realization id), so results do
not depend on how many workers execute them.  Worker count comes from the
``DMABEAM_WORKERS`` environment variable (default 1).
"""

import hashlib
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from . import beamform, channel
from .numerics import dbm_to_watts, watts_to_dbm

RUN_MODES = ("FD", "DMA", "UW", "OP1")

CSV_HEADER = (
    "realization,mode,K,R_min,d_x_over_lambda,status,"
    "tx_power_dbm,min_sinr_margin,iterations,wall_ms"
)


@dataclass(frozen=True)
class ScenarioConfig:
    frequency_hz: float = 28e9
    aperture_m: float = 0.025
    d_x_over_lambda: float = 0.5
    d_y_over_lambda: float = 0.5
    gain_exponent: float = 2.0
    modes: tuple = ("FD", "DMA")
    k: int = 2
    r_min: float = 4.0
    noise_dbm: float = -114.0
    zone: str = "combined"
    realizations: int = 50
    seed: int = 0
    tol: float = 1e-8
    max_iter: int = 100
    max_outer: int = 20
    recovery_trials: int = 64
    aggregate: str = "watts"
    record_timing: bool = True

    def __post_init__(self):
        if self.realizations < 1 or self.k < 1:
            raise ValueError("realizations and k must be >= 1")
        if self.frequency_hz <= 0 or self.aperture_m <= 0:
            raise ValueError("frequency and aperture must be positive")
        if self.d_x_over_lambda <= 0 or self.d_y_over_lambda <= 0:
            raise ValueError("spacings must be positive")
        if np.any(np.asarray(self.r_min) < 0):
            raise ValueError("r_min must be nonnegative")
        if self.zone not in channel.ZONES:
            raise ValueError(f"zone must be one of {channel.ZONES}")
        if self.aggregate not in ("watts", "db"):
            raise ValueError("aggregate must be 'watts' or 'db'")
        object.__setattr__(self, "modes", tuple(self.modes))
        for m in self.modes:
            if m not in RUN_MODES:
                raise ValueError(f"unknown mode {m}; choose from {RUN_MODES}")

    @property
    def wavelength(self):
        return channel.SPEED_OF_LIGHT / self.frequency_hz

    def rates(self):
        r = np.asarray(self.r_min, dtype=float)
        return np.full(self.k, float(r)) if r.ndim == 0 else r

    def geometry_for(self, mode):
        """Half-wave columns for the digital benchmark; configured spacing otherwise."""
        dx = 0.5 if mode == "FD" else self.d_x_over_lambda
        return channel.ArrayGeometry.from_aperture(
            self.frequency_hz,
            self.aperture_m,
            d_x_over_lambda=dx,
            d_y_over_lambda=self.d_y_over_lambda,
            gain_exponent=self.gain_exponent,
        )


@dataclass
class RunRecord:
    realization: int
    mode: str
    k: int
    r_min: float
    d_x_over_lambda: float
    status: str
    tx_power_watts: float
    achieved_sinrs: list
    min_sinr_margin: float
    iterations: int
    wall_ms: float
    user_positions: list = field(default_factory=list)

    @property
    def tx_power_dbm(self):
        if self.status != "converged":
            return None
        return watts_to_dbm(self.tx_power_watts)


def _solve_mode(config, mode, positions, realization):
    geo = config.geometry_for(mode)
    lam = config.wavelength
    chans = [channel.channel_vector(geo, p, lam, user_index=i) for i, p in enumerate(positions)]
    targets = beamform.sinr_target_from_rate(config.rates())
    noise = np.full(config.k, dbm_to_watts(config.noise_dbm))
    seed = int(np.random.SeedSequence((config.seed, realization, 17)).generate_state(1)[0])

    if mode in ("FD", "OP1"):
        inst = beamform.ScenarioInstance(
            channels=chans, targets=targets, noise_powers=noise, mode="FD"
        )
        return geo, beamform.solve_fd(
            inst,
            tol=config.tol,
            max_iter=config.max_iter,
            recovery_trials=config.recovery_trials,
            seed=seed,
        )
    from .dma import DmaState

    state = DmaState(geometry=geo, weights=np.ones(geo.n_elements, dtype=complex))
    inst = beamform.ScenarioInstance(
        channels=chans, targets=targets, noise_powers=noise, mode=mode, dma=state
    )
    solver = beamform.solve_dma if mode == "DMA" else beamform.solve_uw
    return geo, solver(
        inst,
        max_outer=config.max_outer,
        q_init_seed=seed,
        tol=config.tol,
        max_iter=config.max_iter,
        recovery_trials=config.recovery_trials,
    )


def run_realization(config, realization):
    """All requested modes on one shared user draw; returns a list of records."""
    lam = config.wavelength
    sampler = channel.sampler_for_geometry(
        config.geometry_for("FD"), lam, config.zone, config.seed
    ).split(realization)
    positions = channel.sample_users(sampler, config.k)
    rates = config.rates()
    records = []
    for mode in config.modes:
        t0 = time.perf_counter()
        geo, result = _solve_mode(config, mode, positions, realization)
        wall = (time.perf_counter() - t0) * 1e3 if config.record_timing else 0.0
        converged = result.status == "converged"
        margin = float("nan")
        if converged:
            targets = beamform.sinr_target_from_rate(rates)
            margin = float(np.min(result.achieved_sinrs / targets) - 1.0)
        records.append(
            RunRecord(
                realization=realization,
                mode=mode,
                k=config.k,
                r_min=float(np.max(rates)),
                d_x_over_lambda=0.5 if mode == "FD" else config.d_x_over_lambda,
                status=result.status,
                tx_power_watts=result.tx_power_watts if converged else float("nan"),
                achieved_sinrs=(
                    [float(s) for s in result.achieved_sinrs] if converged else []
                ),
                min_sinr_margin=margin,
                iterations=result.iterations,
                wall_ms=wall,
                user_positions=[[float(v) for v in p] for p in positions],
            )
        )
    return records


def _worker(args):
    config_dict, realization = args
    return run_realization(ScenarioConfig(**config_dict), realization)


def worker_count():
    raw = os.environ.get("DMABEAM_WORKERS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def run_experiment(config):
    """Run every realization and aggregate; deterministic for a fixed seed."""
    n_workers = worker_count()
    ids = list(range(config.realizations))
    if n_workers == 1:
        batches = [run_realization(config, i) for i in ids]
    else:
        cfg = asdict(config)
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            batches = list(pool.map(_worker, [(cfg, i) for i in ids]))
    records = [rec for batch in batches for rec in batch]
    return records, summarize(records, config)


def summarize(records, config):
    """Per-mode means over converged runs plus pairwise mean gaps in dB.

    The mean is taken over watts then converted to dBm (aggregate="watts"),
    or as the arithmetic mean of per-run dBm values (aggregate="db").  Gaps
    only use realizations where both compared modes converged.
    """
    modes = list(dict.fromkeys(r.mode for r in records)) or list(config.modes)
    per_mode = {}
    for mode in modes:
        recs = [r for r in records if r.mode == mode]
        conv = [r for r in recs if r.status == "converged"]
        entry = {
            "n_runs": len(recs),
            "n_converged": len(conv),
            "n_infeasible": sum(1 for r in recs if r.status == "infeasible"),
            "n_failed": sum(1 for r in recs if r.status == "max_iter"),
            "mean_tx_power_dbm": None,
        }
        if conv:
            watts = np.array([r.tx_power_watts for r in conv])
            if config.aggregate == "watts":
                entry["mean_tx_power_dbm"] = float(watts_to_dbm(float(np.mean(watts))))
            else:
                entry["mean_tx_power_dbm"] = float(np.mean(watts_to_dbm(watts)))
        per_mode[mode] = entry

    gaps = {}
    for i, a in enumerate(modes):
        for b in modes[i + 1 :]:
            pa = {r.realization: r.tx_power_watts for r in records if r.mode == a and r.status == "converged"}
            pb = {r.realization: r.tx_power_watts for r in records if r.mode == b and r.status == "converged"}
            shared = sorted(set(pa) & set(pb))
            if not shared:
                continue
            wa = np.array([pa[i_] for i_ in shared])
            wb = np.array([pb[i_] for i_ in shared])
            if config.aggregate == "watts":
                gap = watts_to_dbm(float(np.mean(wa))) - watts_to_dbm(float(np.mean(wb)))
            else:
                gap = float(np.mean(watts_to_dbm(wa) - watts_to_dbm(wb)))
            gaps[f"{a}-{b}"] = {"mean_gap_db": float(gap), "n_paired": len(shared)}
    return {"per_mode": per_mode, "pairwise_gaps_db": gaps}


def sweep(config, axis, values):
    """One-axis grid (r_min | k | d_x); one summary row per point per mode."""
    if axis not in ("r_min", "k", "d_x"):
        raise ValueError("axis must be one of r_min, k, d_x")
    rows = []
    all_records = []
    for value in values:
        if axis == "r_min":
            cfg = _replace(config, r_min=float(value))
        elif axis == "k":
            cfg = _replace(config, k=int(value))
        else:
            cfg = _replace(config, d_x_over_lambda=float(value))
        records, summary = run_experiment(cfg)
        all_records.extend(records)
        for mode in cfg.modes:
            geo = cfg.geometry_for(mode)
            m_beams = min(cfg.k, geo.n_rows) if mode in ("DMA", "UW") else cfg.k
            entry = summary["per_mode"][mode]
            rows.append(
                {
                    "axis": axis,
                    "value": float(value),
                    "mode": mode,
                    "mean_tx_power_dbm": entry["mean_tx_power_dbm"],
                    "n_converged": entry["n_converged"],
                    "n_infeasible": entry["n_infeasible"],
                    "n_elements": geo.n_elements,
                    "dof": beamform.dof_count(mode, geo.n_rows, geo.n_cols, m_beams),
                }
            )
    return rows, all_records


def _replace(config, **kw):
    d = asdict(config)
    d.update(kw)
    return ScenarioConfig(**d)


def config_hash(config):
    """Content hash of the configuration, for provenance in exports."""
    blob = json.dumps(asdict(config), sort_keys=True, default=list)
    return hashlib.sha256(blob.encode()).hexdigest()


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, float):
        if np.isnan(value):
            return ""
        return repr(value)
    return str(value)


def export_csv(records, path):
    """Record table under the documented header; floats use repr round-trip."""
    lines = [CSV_HEADER]
    for r in records:
        lines.append(
            ",".join(
                [
                    str(r.realization),
                    r.mode,
                    str(r.k),
                    _fmt(r.r_min),
                    _fmt(r.d_x_over_lambda),
                    r.status,
                    _fmt(r.tx_power_dbm),
                    _fmt(r.min_sinr_margin),
                    str(r.iterations),
                    _fmt(r.wall_ms),
                ]
            )
        )
    try:
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc}") from exc


def export_json(records, summary, config, path):
    payload = {
        "config": asdict(config),
        "config_hash": config_hash(config),
        "records": [asdict(r) for r in records],
        "summary": summary,
    }
    try:
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=1, default=list)
            fh.write("\n")
    except OSError as exc:
        raise OSError(f"cannot write JSON to {path}: {exc}") from exc


def export(records, summary, config, path, fmt):
    """Write records (+ summary/config echo for JSON) to path in csv or json."""
    if fmt == "csv":
        export_csv(records, path)
    elif fmt == "json":
        export_json(records, summary, config, path)
    else:
        raise ValueError("format must be 'csv' or 'json'")


def load_json_records(path):
    """Re-import an exported JSON file as (records, config, summary)."""
    with open(path) as fh:
        payload = json.load(fh)
    cfg_dict = dict(payload["config"])
    cfg_dict["modes"] = tuple(cfg_dict["modes"])
    config = ScenarioConfig(**cfg_dict)
    records = [RunRecord(**{**r, "tx_power_watts": _nan(r["tx_power_watts"])}) for r in payload["records"]]
    return records, config, payload["summary"]


def _nan(v):
    return float("nan") if v is None else float(v)


def parse_config_file(path):
    """Flat key-value config file: ``key = value`` lines, ``#`` comments."""
    values = {}
    valid = {f.name for f in fields(ScenarioConfig)}
    with open(path) as fh:
        for ln, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            for sep in ("=", ":"):
                if sep in line:
                    key, _, val = line.partition(sep)
                    break
            else:
                raise ValueError(f"{path}:{ln}: expected 'key = value'")
            key = key.strip().replace("-", "_")
            if key not in valid:
                raise ValueError(f"{path}:{ln}: unknown key {key!r}")
            values[key] = _convert_key(key, val.strip())
    return values


def _convert_key(key, val):
    if key == "modes":
        return tuple(tok.strip() for tok in val.split(",") if tok.strip())
    if key in ("k", "realizations", "seed", "max_iter", "max_outer", "recovery_trials"):
        return int(val)
    if key in ("zone", "aggregate"):
        return val
    if key == "record_timing":
        return val.lower() in ("1", "true", "yes")
    return float(val)
