"""Command-line front end: run / sweep / oracle.

Exit codes: 0 success, 2 solver failure in any record, 3 configuration error.
Flags mirror the flat config-file keys; flag values override file values.
Worker count comes from the DMABEAM_WORKERS environment variable.
"""

import argparse
import sys
from dataclasses import fields

import numpy as np

from . import beamform, channel, harness
from .numerics import dbm_to_watts

CONFIG_KEYS = [f.name for f in fields(harness.ScenarioConfig)]


def _add_config_flags(parser):
    parser.add_argument("--config", help="flat key = value config file")
    parser.add_argument("--frequency-hz", type=float)
    parser.add_argument("--aperture-m", type=float)
    parser.add_argument("--d-x-over-lambda", type=float)
    parser.add_argument("--d-y-over-lambda", type=float)
    parser.add_argument("--gain-exponent", type=float)
    parser.add_argument("--modes", help="comma list from FD,DMA,UW,OP1")
    parser.add_argument("--k", type=int)
    parser.add_argument("--r-min", type=float)
    parser.add_argument("--noise-dbm", type=float)
    parser.add_argument("--zone", choices=channel.ZONES)
    parser.add_argument("--realizations", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--tol", type=float)
    parser.add_argument("--max-iter", type=int)
    parser.add_argument("--max-outer", type=int)
    parser.add_argument("--recovery-trials", type=int)
    parser.add_argument("--aggregate", choices=("watts", "db"))
    parser.add_argument(
        "--no-timing",
        action="store_true",
        help="record wall_ms as 0 so exports are byte-reproducible",
    )


def _build_config(args):
    values = {}
    if args.config:
        values.update(harness.parse_config_file(args.config))
    for key in CONFIG_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    if getattr(args, "modes", None):
        values["modes"] = tuple(t.strip() for t in args.modes.split(",") if t.strip())
    if getattr(args, "no_timing", False):
        values["record_timing"] = False
    return harness.ScenarioConfig(**values)


def _write_outputs(records, summary, config, out_base):
    harness.export(records, summary, config, out_base + ".csv", "csv")
    harness.export(records, summary, config, out_base + ".json", "json")


def _print_summary(summary):
    for mode, entry in summary["per_mode"].items():
        mean = entry["mean_tx_power_dbm"]
        mean_s = f"{mean:.4f} dBm" if mean is not None else "n/a (no converged runs)"
        print(
            f"{mode:>4}: mean {mean_s}  converged {entry['n_converged']}/{entry['n_runs']}"
            f"  infeasible {entry['n_infeasible']}  failed {entry['n_failed']}"
        )
    for pair, gap in summary["pairwise_gaps_db"].items():
        print(f"{pair}: {gap['mean_gap_db']:+.4f} dB over {gap['n_paired']} paired runs")


def _solver_failures(records):
    return sum(1 for r in records if r.status == "max_iter")


def cmd_run(args):
    config = _build_config(args)
    records, summary = harness.run_experiment(config)
    _print_summary(summary)
    if args.out:
        _write_outputs(records, summary, config, args.out)
    return 2 if _solver_failures(records) else 0


def cmd_sweep(args):
    config = _build_config(args)
    values = [float(v) for v in args.values.split(",")]
    rows, records = harness.sweep(config, args.axis, values)
    print("axis,value,mode,mean_tx_power_dbm,n_converged,n_infeasible,n_elements,dof")
    for row in rows:
        mean = row["mean_tx_power_dbm"]
        print(
            f"{row['axis']},{row['value']},{row['mode']},"
            f"{'' if mean is None else format(mean, '.6f')},"
            f"{row['n_converged']},{row['n_infeasible']},{row['n_elements']},{row['dof']}"
        )
    if args.out:
        _write_outputs(records, {"sweep": rows}, config, args.out)
    return 2 if _solver_failures(records) else 0


def cmd_oracle(args):
    """Closed-form single-user comparisons: solver power vs delta*sigma^2/||gamma||^2."""
    config = _build_config(args)
    if config.k != 1:
        config = harness._replace(config, k=1)
    lam = config.wavelength
    geo = config.geometry_for("FD")
    noise = dbm_to_watts(config.noise_dbm)
    target = float(beamform.sinr_target_from_rate(config.rates())[0])
    worst = 0.0
    failures = 0
    print("realization,solver_watts,closed_form_watts,rel_err")
    for i in range(args.draws):
        sampler = channel.sampler_for_geometry(geo, lam, config.zone, config.seed).split(i)
        pos = channel.sample_users(sampler, 1)
        chan = channel.channel_vector(geo, pos[0], lam)
        inst = beamform.ScenarioInstance(
            channels=[chan], targets=[target], noise_powers=[noise], mode="FD"
        )
        res = beamform.solve_fd(inst, tol=config.tol, max_iter=config.max_iter)
        expect = float(target * noise / np.linalg.norm(chan.entries) ** 2)
        if res.status != "converged":
            failures += 1
            print(f"{i},{res.status},{expect!r},")
            continue
        rel = abs(res.tx_power_watts - expect) / expect
        worst = max(worst, rel)
        print(f"{i},{res.tx_power_watts!r},{expect!r},{rel:.3e}")
    print(f"worst relative error: {worst:.3e} over {args.draws} draws")
    return 2 if failures else 0


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="dmabeam",
        description="Transmit-power-minimizing beamforming experiments for "
        "metasurface, digital, and unrestricted-weight architectures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one Monte-Carlo configuration")
    _add_config_flags(p_run)
    p_run.add_argument("--out", help="output base path (writes .csv and .json)")
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="sweep one axis of the configuration")
    _add_config_flags(p_sweep)
    p_sweep.add_argument("--axis", required=True, choices=("r_min", "k", "d_x"))
    p_sweep.add_argument("--values", required=True, help="comma list of grid values")
    p_sweep.add_argument("--out", help="output base path (writes .csv and .json)")
    p_sweep.set_defaults(func=cmd_sweep)

    p_oracle = sub.add_parser(
        "oracle", help="single-user closed-form validation of the digital solver"
    )
    _add_config_flags(p_oracle)
    p_oracle.add_argument("--draws", type=int, default=50)
    p_oracle.set_defaults(func=cmd_oracle)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
