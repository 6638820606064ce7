"""Command-line front end.

Subcommands map one-to-one onto the protocol runners plus an eigensystem
report and a parameter sweep:

    nvdfs prepare --out results/
    nvdfs logic-flip --set protocol.params.direction=one_to_zero
    nvdfs eig-report --set protocol.params.bx="100 G"
    nvdfs sweep --config sweep.json --workers 4

Flags: ``--config <path>`` (JSON, strict schema), ``--out <dir>``,
``--set key=value`` (dotted-path override, repeatable), ``--workers N``
(sweep only), ``--format csv|json|both``.  The default output directory
may also come from the ``NVDFS_OUT`` environment variable.

Exit status: 0 success, 2 config error, 3 numerical failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import protocols
from .config import ConfigError, RunConfig, parse_config, serialize_config
from .eigensystem import ms0_eigensystem, numerical_eig, label_states
from .hamiltonians import h_ms0, single_carbon_config
from .master_equation import NumericalError
from .output import (
    format_float,
    result_summary,
    write_plot_data,
    write_summary,
    write_trajectory_csv,
)

__all__ = ["main", "dispatch"]

_PROTOCOLS = (
    "dfs-compare",
    "prepare",
    "logic-flip",
    "stirap-discriminate",
    "single-c13",
    "intuitive",
    "eig-report",
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4


def _apply_override(raw: dict, assignment: str) -> None:
    if "=" not in assignment:
        raise ConfigError(f"--set {assignment!r}: expected key=value")
    key, _, value = assignment.partition("=")
    try:
        parsed = json.loads(value)
    except json.JSONDecodeError:
        parsed = value
    node = raw
    parts = key.split(".")
    for part in parts[:-1]:
        node = node.setdefault(part, {})
        if not isinstance(node, dict):
            raise ConfigError(f"--set {key}: {part} is not an object")
    node[parts[-1]] = parsed


def _load_config(args, protocol: str | None) -> RunConfig:
    raw: dict = {}
    if args.config:
        raw = json.loads(Path(args.config).read_text(encoding="utf-8"))
        if not isinstance(raw, dict):
            raise ConfigError("config root must be a JSON object")
    for assignment in args.set or []:
        _apply_override(raw, assignment)
    if args.format:
        raw.setdefault("output", {})["formats"] = args.format
    out = args.out or os.environ.get("NVDFS_OUT")
    if out:
        raw.setdefault("output", {})["directory"] = out
    return parse_config(raw, protocol=protocol)


def _run_protocol(cfg: RunConfig):
    """Execute the configured protocol; returns (results dict, summary dict)."""
    reg = cfg.register_config()
    spec = cfg.dissipator_spec(reg)
    intg = cfg.integrator()
    p = dict(cfg.params)
    name = cfg.protocol

    if name == "dfs-compare":
        results = protocols.run_dfs_comparison(
            reg,
            bx=p["bx"],
            bz=p["bz"],
            duration=p["duration"],
            initial_bloch=p["initial_bloch"],
            t2n_common=cfg.internal["dissipation"]["t2n_common"],
            integrator=intg,
        )
        return results, {
            "protocol": name,
            "final_bloch_lengths": {k: v.final_fidelity for k, v in results.items()},
        }
    if name == "prepare":
        res = protocols.run_preparation(
            reg,
            bx_start=p["bx_start"],
            bz_start=p["bz_start"],
            bx_end=p["bx_end"],
            bz_end=p["bz_end"],
            ramp_rate_bx=p["ramp_rate_bx"],
            ramp_rate_bz=p["ramp_rate_bz"],
            sigma=p["sigma"],
            omega0=p["omega0"],
            t_delay=p["t_delay"],
            pulse_window=p["pulse_window"],
            dissipation=spec,
            ms1_mode=p["ms1_mode"],
            coupling_mode=p["coupling_mode"],
            integrator=intg,
        )
        return {"run": res}, None
    if name == "logic-flip":
        res = protocols.run_logic_flip(
            reg,
            direction=p["direction"],
            bx=p["bx"],
            bz_start=p["bz_start"],
            bz_pulse=p["bz_pulse"],
            ramp_rate_bz=p["ramp_rate_bz"],
            sigma=p["sigma"],
            omega0=p["omega0"],
            t_delay=p["t_delay"],
            pulse_window=p["pulse_window"],
            dissipation=spec,
            ms1_mode=p["ms1_mode"],
            coupling_mode=p["coupling_mode"],
            integrator=intg,
            include_ramp=p["include_ramp"],
        )
        return {"run": res}, None
    if name == "stirap-discriminate":
        kwargs = dict(
            bx=p["bx"],
            bz_start=p["bz_start"],
            bz_pulse=p["bz_pulse"],
            ramp_rate_bz=p["ramp_rate_bz"],
            sigma=p["sigma"],
            omega0=p["omega0"],
            t_delay=p["t_delay"],
            pulse_window=p["pulse_window"],
            dissipation=spec,
            ms1_mode=p["ms1_mode"],
            coupling_mode=p["coupling_mode"],
            integrator=intg,
            include_ramp=p["include_ramp"],
        )
        dark, bright = protocols.run_stirap_vs_bstirap(reg, **kwargs)
        return {"dark": dark, "reversed": bright}, {
            "protocol": name,
            "dark_peak_ms1": dark.extras["peak_ms1_population"],
            "reversed_peak_ms1": bright.extras["peak_ms1_population"],
        }
    if name == "single-c13":
        reg1 = single_carbon_config(
            a_zz=p["a_zz"],
            t2n_star=p["t2n_star"],
            t2e_star=reg.t2e_star,
            constants=reg.constants,
        )
        spec1 = cfg.dissipator_spec(reg1)
        res = protocols.run_single_c13(
            reg1,
            bx=p["bx"],
            bz=p["bz"],
            sigma=p["sigma"],
            omega0=p["omega0"],
            t_delay=p["t_delay"],
            pulse_window=p["pulse_window"],
            dissipation=spec1,
            coupling_mode=p["coupling_mode"],
            integrator=intg,
        )
        return {"run": res}, None
    if name == "intuitive":
        res = protocols.run_intuitive_baseline(
            reg,
            bx=p["bx"],
            bz=p["bz"],
            sigma_p=p["sigma_p"],
            sigma_s=p["sigma_s"],
            omega0=p["omega0"],
            t_delay=p["t_delay"],
            pulse_window=p["pulse_window"],
            dissipation=spec,
            ms1_mode=p["ms1_mode"],
            coupling_mode=p["coupling_mode"],
            integrator=intg,
        )
        return {"run": res}, None
    raise ConfigError(f"unknown protocol {name!r}")


def _eig_report(cfg: RunConfig, outdir: Path) -> dict:
    reg = cfg.register_config()
    bx, bz = cfg.params["bx"], cfg.params["bz"]
    eig = ms0_eigensystem((bx, bz), reg.d12, reg.constants.gamma_c)
    w, v = numerical_eig(h_ms0((bx, bz), reg))
    labels = label_states(v, eig.states)
    report = {
        "bx_G": bx,
        "bz_G": bz,
        "energies_rad_per_us": eig.energies.tolist(),
        "numerical_energies_rad_per_us": w[labels.permutation].tolist(),
        "states_pair_basis_dd_du_ud_uu": np.real(eig.states).T.tolist(),
        "coefficients": {
            "labels": [1, 3, 4],
            "alpha": eig.alpha.tolist(),
            "beta": eig.beta.tolist(),
            "xi": eig.xi.tolist(),
        },
        "cubic": {"q": eig.q, "r": eig.r, "theta": eig.theta_cubic},
        "labeling_overlaps": labels.overlaps.tolist(),
    }
    lines = [f"# m_s=0 eigensystem at Bx={bx} G, Bz={bz} G", ""]
    lines.append(f"{'state':>6} {'E (rad/us)':>24} {'dd':>12} {'du':>12} {'ud':>12} {'uu':>12}")
    for i in range(4):
        comps = " ".join(f"{np.real(eig.states[j, i]):12.6f}" for j in range(4))
        lines.append(f"{i + 1:>6} {format_float(eig.energies[i]):>24} {comps}")
    (outdir / "eig_report.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    write_summary(outdir / "eig_report.json", report)
    return report


def _collect_columns(results: dict) -> tuple[np.ndarray, dict[str, np.ndarray]]:
    """Merge result trajectories onto one time grid with prefixed columns."""
    if len(results) == 1:
        traj = next(iter(results.values())).trajectory
        return traj.times, dict(traj.observables)
    first = next(iter(results.values())).trajectory
    columns: dict[str, np.ndarray] = {}
    for key, res in results.items():
        for name, series in res.trajectory.observables.items():
            columns[f"{name}_{key}"] = series
    return first.times, columns


def dispatch(protocol: str, args) -> int:
    """Run one subcommand; returns the process exit status."""
    try:
        cfg = _load_config(args, protocol if protocol != "sweep" else None)
    except (ConfigError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO

    try:
        outdir = Path(cfg.output["directory"])
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "effective_config.json").write_text(
            serialize_config(cfg), encoding="utf-8"
        )

        if protocol == "sweep":
            return _run_sweep(cfg, outdir, args.workers)
        if protocol == "eig-report":
            report = _eig_report(cfg, outdir)
            print(f"eig-report written to {outdir} (run {cfg.run_id})")
            print(
                "energies (rad/us):",
                " ".join(format_float(e) for e in report["energies_rad_per_us"]),
            )
            return EXIT_OK

        results, extra_summary = _run_protocol(cfg)
        formats = cfg.output["formats"]
        times, columns = _collect_columns(results)
        if formats in ("csv", "both"):
            write_trajectory_csv(outdir / "trajectory.csv", times, columns)
            write_plot_data(outdir, times, columns)
        if formats in ("json", "both"):
            if len(results) == 1:
                payload = result_summary(
                    next(iter(results.values())), cfg.run_id, cfg.effective
                )
            else:
                payload = {
                    key: result_summary(res, cfg.run_id, cfg.effective)
                    for key, res in results.items()
                }
                if extra_summary:
                    payload["summary"] = extra_summary
            write_summary(outdir / "summary.json", payload)
        for key, res in results.items():
            tag = f"[{key}] " if len(results) > 1 else ""
            print(
                f"{tag}{res.name}: final_fidelity={res.final_fidelity:.6f} "
                f"peak_intermediate={res.peak_intermediate_population:.6f} "
                f"total_time={res.timing['total_time']:.3f} us"
            )
            for flag in res.flags:
                print(f"{tag}warning: {flag}")
        print(f"artifacts written to {outdir} (run {cfg.run_id})")
        return EXIT_OK
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


def _sweep_job(payload: tuple[dict, str]) -> dict:
    effective, protocol = payload
    cfg = parse_config(effective, protocol=protocol)
    results, _ = _run_protocol(cfg)
    first = next(iter(results.values()))
    return {
        "final_fidelity": first.final_fidelity,
        "peak_intermediate_population": first.peak_intermediate_population,
        "total_time_us": first.timing["total_time"],
    }


def _run_sweep(cfg: RunConfig, outdir: Path, workers: int) -> int:
    axes = cfg.sweep_axes
    if not axes:
        print("config error: sweep.axes is empty", file=sys.stderr)
        return EXIT_CONFIG
    grids = [axis["values"] for axis in axes]
    paths = [axis["path"] for axis in axes]
    jobs = []
    for combo in itertools.product(*grids):
        doc = json.loads(json.dumps(cfg.effective))
        doc.pop("sweep", None)
        for path, value in zip(paths, combo):
            _apply_override(doc, f"{path}={json.dumps(value)}")
        jobs.append((doc, cfg.protocol))
    try:
        parse_jobs = [parse_config(doc, protocol=proto) for doc, proto in jobs]
    except ConfigError as exc:
        print(f"config error in sweep point: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_job, jobs))
    else:
        rows = [_sweep_job(job) for job in jobs]

    header = [p for p in paths] + [
        "final_fidelity",
        "peak_intermediate_population",
        "total_time_us",
    ]
    lines = [",".join(header)]
    for combo, row in zip(itertools.product(*grids), rows):
        vals = [json.dumps(v) for v in combo] + [
            format_float(row["final_fidelity"]),
            format_float(row["peak_intermediate_population"]),
            format_float(row["total_time_us"]),
        ]
        lines.append(",".join(vals))
    (outdir / "sweep_results.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    write_summary(
        outdir / "sweep_summary.json",
        {"axes": paths, "points": [list(c) for c in itertools.product(*grids)], "rows": rows,
         "run_ids": [c.run_id for c in parse_jobs]},
    )
    for combo, row in zip(itertools.product(*grids), rows):
        print(f"{combo}: final_fidelity={row['final_fidelity']:.6f}")
    print(f"sweep artifacts written to {outdir}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="nvdfs",
        description="Protocols of a decoherence-protected two-carbon register around an NV center.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _PROTOCOLS + ("sweep",):
        p = sub.add_parser(name, help=f"run the {name} protocol")
        p.add_argument("--config", help="JSON config file (strict schema)")
        p.add_argument("--out", help="output directory (default: $NVDFS_OUT or ./out)")
        p.add_argument(
            "--set",
            action="append",
            metavar="KEY=VALUE",
            help="dotted-path config override, e.g. protocol.params.sigma='5 us'",
        )
        p.add_argument("--format", choices=["csv", "json", "both"], help="artifact formats")
        p.add_argument("--workers", type=int, default=1, help="sweep worker processes")
    args = parser.parse_args(argv)
    return dispatch(args.command, args)


if __name__ == "__main__":
    sys.exit(main())
