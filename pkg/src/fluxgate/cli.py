"""Unified command-line interface.

Subcommands: ``spectrum``, ``crossings``, ``trajectory``, ``metrics``,
``sweep``, ``simulate``, ``rank-check``, ``reproduce``.  Every command
writes its data files (fixed-format CSV/JSON) into the output directory
and, unless ``--no-plots`` is given, a rendered PNG alongside.  Exit codes:
0 success, 1 domain/physics error, 2 usage error.

The device defaults to the built-in parameter set; ``--device PATH`` or
the ``FLUXGATE_DEVICE`` environment variable select a JSON parameter file.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np
from scipy.integrate import simpson

from . import __version__
from . import device as dev
from . import evolution as evo
from . import metrics as met
from . import plots
from . import spectrum as spc
from . import sweep as swp
from . import trajectories as trj
from .errors import DomainError, FluxgateError
from .output import write_csv, write_json, json_dumps, complex_matrix_payload

REPRODUCE_IDS = ("fig2", "fig3", "fig4", "fig5", "sec5-matrices")


def main(argv=None):
    sys.exit(dispatch(sys.argv[1:] if argv is None else argv))


def dispatch(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        args.handler(args)
        return 0
    except FluxgateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fluxgate",
        description="Flux-trajectory design and simulation for the adiabatic CZ gate",
    )
    parser.add_argument("--version", action="version", version=f"fluxgate {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--device", default=None, help="device JSON file (default: built-in)")
        p.add_argument("-o", "--output-dir", default=".", help="output directory")
        p.add_argument("--no-plots", action="store_true", help="skip PNG rendering")

    p = sub.add_parser("spectrum", help="tracked eigenvalue curves over flux")
    common(p)
    p.add_argument("--phi-max", type=float, default=spc.DEFAULT_PHI_MAX)
    p.add_argument("--steps", type=int, default=1201)
    p.set_defaults(handler=cmd_spectrum)

    p = sub.add_parser("crossings", help="locate the five avoided crossings")
    common(p)
    p.set_defaults(handler=cmd_crossings)

    p = sub.add_parser("trajectory", help="sample and calibrate one flux trajectory")
    common(p)
    _trajectory_flags(p)
    p.set_defaults(handler=cmd_trajectory)

    p = sub.add_parser("metrics", help="diabaticity norm and stationarity residual")
    common(p)
    _trajectory_flags(p)
    p.add_argument("--upsilon", type=float, default=1.0)
    p.add_argument("--kappa", type=float, default=1.0)
    p.add_argument("--lam", type=float, default=1.0)
    p.add_argument("--residual-csv", action="store_true", help="dump the residual curve t,D")
    p.set_defaults(handler=cmd_metrics)

    p = sub.add_parser("sweep", help="norm over a (sigma, mu) parameter grid")
    common(p)
    p.add_argument("--family", required=True, choices=trj.FAMILIES)
    p.add_argument("--sigma", required=True, metavar="LO:HI:N", help="sigma grid")
    p.add_argument("--mu", default=None, metavar="LO:HI:N", help="mu grid (2-parameter families)")
    p.add_argument("--tau", type=float, required=True)
    p.add_argument("--mode", choices=swp.SWEEP_MODES, default="peak_normalized")
    p.add_argument("--refine", action="store_true", help="golden-section refine the argmin")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--k", type=int, default=0, help="phase branch for pi calibration")
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("simulate", help="propagate the 9-level system and score the gate")
    common(p)
    _trajectory_flags(p)
    p.add_argument("--dt", type=float, default=evo.DEFAULT_DT)
    p.add_argument("--fidelity-mode", choices=evo.FIDELITY_MODES, default="z_corrected")
    p.add_argument("--fidelity-subspace", choices=evo.FIDELITY_SUBSPACES, default="qubit4")
    p.add_argument("--populations", action="store_true", help="dump per-step populations from |1,1>")
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("rank-check", help="norm versus gate-distance concordance table")
    common(p)
    p.add_argument("--samples-file", required=True, help="JSON list of trajectory parameters")
    p.add_argument("--amplitude-mode", choices=("pi", "peak"), default="peak")
    p.add_argument("--dt", type=float, default=evo.DEFAULT_DT)
    p.add_argument("--fid-mode", choices=evo.FIDELITY_MODES, default="z_corrected")
    p.add_argument("--fid-subspace", choices=evo.FIDELITY_SUBSPACES, default="qubit4")
    p.add_argument("--k", type=int, default=0)
    p.set_defaults(handler=cmd_rank_check)

    p = sub.add_parser("reproduce", help="canned reference pipelines")
    common(p)
    p.add_argument("id", nargs="?", default=None, help="one of " + ", ".join(REPRODUCE_IDS))
    p.add_argument("--figure", default=None, help="alias for the positional id")
    p.set_defaults(handler=cmd_reproduce)

    return parser


def _trajectory_flags(p):
    p.add_argument("--family", required=True, choices=trj.FAMILIES)
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--mu", type=float, default=None)
    p.add_argument("--tau", type=float, required=True)
    p.add_argument("--k", type=int, default=0, help="phase branch: target pi + 2*pi*k")
    p.add_argument(
        "--amplitude-mode",
        choices=("pi", "peak"),
        default="pi",
        help="pi: calibrate the conditional phase; peak: scale to the crossing",
    )
    p.add_argument("--samples", type=int, default=trj.DEFAULT_SAMPLES)


def _load_device(args) -> dev.DeviceParams:
    path = args.device or os.environ.get("FLUXGATE_DEVICE")
    if path:
        return dev.load_device(path)
    return dev.default_device()


def _outdir(args) -> Path:
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _parse_grid(text, flag):
    parts = text.split(":")
    if len(parts) != 3:
        raise DomainError(f"{flag} expects LO:HI:N, got {text!r}")
    return (float(parts[0]), float(parts[1]), int(parts[2]))


def _label_str(label) -> str:
    return f"{label[0]}{label[1]}"


def _device_payload(params: dev.DeviceParams) -> dict:
    return {
        "omega1_ghz": params.omega1 / dev.TWO_PI,
        "omega2_ghz": params.omega2 / dev.TWO_PI,
        "alpha1_mhz": 1000.0 * params.alpha1 / dev.TWO_PI,
        "alpha2_mhz": 1000.0 * params.alpha2 / dev.TWO_PI,
        "g_mhz": 1000.0 * params.g / dev.TWO_PI,
    }


def _prepare_trajectory(args, spectrum):
    tp = trj.TrajectoryParams(
        family=args.family,
        sigma=args.sigma,
        tau=args.tau,
        mu=args.mu,
        n_samples=args.samples,
    )
    if args.amplitude_mode == "pi":
        return trj.calibrate_amplitude(tp, spectrum, k=args.k)
    return trj.peak_trajectory(tp, spectrum)


def _emit(path: Path):
    print(path)


# ---------------------------------------------------------------------------
# command handlers
# ---------------------------------------------------------------------------


def cmd_spectrum(args):
    params = _load_device(args)
    out = _outdir(args)
    spectrum = spc.track_spectrum(params, phi_max=args.phi_max, steps=args.steps)
    rows = []
    for label in spectrum.labels:
        idx = spectrum._index(label)
        for phi, omega in zip(spectrum.phi_grid, spectrum.energies[idx]):
            rows.append((phi, _label_str(label), omega))
    _emit(write_csv(out / "spectrum.csv", ["phi", "label", "omega_rad_per_ns"], rows))
    if not args.no_plots:
        _emit(plots.plot_spectrum(spectrum, spectrum.crossings, out / "spectrum.png"))


def cmd_crossings(args):
    params = _load_device(args)
    out = _outdir(args)
    crossings = spc.find_crossings(params)
    payload = {
        name: {"phi": crossings.locations[name], "gap": crossings.gaps[name]}
        for name in crossings.locations
    }
    path = write_json(out / "crossings.json", payload)
    sys.stdout.write(json_dumps(payload))
    _emit(path)


def cmd_trajectory(args):
    params = _load_device(args)
    out = _outdir(args)
    spectrum = spc.track_spectrum(params)
    traj = _prepare_trajectory(args, spectrum)
    _emit(write_csv(out / "trajectory.csv", ["t", "phi"], zip(traj.t_grid, traj.phi_samples)))
    sidecar = {
        "family": traj.params.family,
        "sigma": traj.params.sigma,
        "mu": traj.params.mu,
        "tau": traj.params.tau,
        "epsilon": traj.params.epsilon,
        "amplitude": traj.amplitude,
        "amplitude_mode": args.amplitude_mode,
        "branch": traj.branch,
        "constraint_residual": traj.calibration_residual,
        "constraint_value": float(simpson(spectrum.zeta(traj.phi_samples), x=traj.t_grid)),
        "clipped": traj.clipped,
    }
    _emit(write_json(out / "trajectory.json", sidecar))
    if not args.no_plots:
        _emit(plots.plot_trajectories([(traj.params.family, traj)], out / "trajectory.png"))


def cmd_metrics(args):
    params = _load_device(args)
    out = _outdir(args)
    spectrum = spc.track_spectrum(params)
    config = met.MetricConfig(upsilon=args.upsilon, kappa=args.kappa, lam=args.lam)
    traj = _prepare_trajectory(args, spectrum)
    report = met.assemble_metric_report(traj, spectrum, config)
    payload = {
        "n_norm": report.n_norm,
        "constraint_value": report.constraint_value,
        "residual_l2": report.residual.l2,
        "residual_masked_samples": report.residual.n_masked,
        "leakage_estimate": report.leakage_estimate,
        "weights": {"upsilon": args.upsilon, "kappa": args.kappa, "lam": args.lam},
        "trajectory": {
            "family": traj.params.family,
            "sigma": traj.params.sigma,
            "mu": traj.params.mu,
            "tau": traj.params.tau,
            "amplitude": traj.amplitude,
        },
    }
    _emit(write_json(out / "metrics.json", payload))
    if args.residual_csv:
        _emit(
            write_csv(
                out / "residual.csv", ["t", "D"], zip(report.residual.t_grid, report.residual.values)
            )
        )
    if not args.no_plots:
        _emit(
            plots.plot_residual(
                report.residual, out / "residual.png",
                title=f"{traj.params.family}, sigma = {traj.params.sigma} ns",
            )
        )


_SWEEP_CSV_HEADER = ["sigma", "mu", "n_norm", "constraint_value", "amplitude", "feasible"]


def _sweep_rows(result):
    return [
        (r["sigma"], r["mu"], r["n_norm"], r["constraint_value"], r["amplitude"], r["feasible"])
        for r in result.rows
    ]


def cmd_sweep(args):
    params = _load_device(args)
    out = _outdir(args)
    spectrum = spc.track_spectrum(params)
    spec = swp.SweepSpec(
        family=args.family,
        sigma_range=_parse_grid(args.sigma, "--sigma"),
        mu_range=_parse_grid(args.mu, "--mu") if args.mu else None,
        tau=args.tau,
        mode=args.mode,
        refine=args.refine,
        k=args.k,
    )
    result = swp.run_sweep(spec, spectrum, workers=args.workers)
    _emit(write_csv(out / "sweep.csv", _SWEEP_CSV_HEADER, _sweep_rows(result)))
    payload = {"argmin": result.argmin, "refined": result.refined, "mode": spec.mode}
    _emit(write_json(out / "optimum.json", payload))
    if not args.no_plots:
        _emit(plots.plot_sweep(result, out / "sweep.png"))


def _gate_payload(report: evo.GateReport, traj, dt: float) -> dict:
    return {
        "basis": [_label_str(lab) for lab in report.basis],
        "m": complex_matrix_payload(report.m),
        "m_qubit": complex_matrix_payload(report.m_qubit),
        "theta_adiabatic": {_label_str(k): v for k, v in report.theta_adiabatic.items()},
        "theta_simulated": {_label_str(k): v for k, v in report.theta_simulated.items()},
        "f_raw": report.f_raw,
        "f_z_corrected": report.f_z_corrected,
        "f_phase_optimized": report.f_phase_optimized,
        "fidelity": report.fidelity,
        "leakage_20": report.leakage_20,
        "unitarity_defect": report.unitarity_defect,
        "column_norm_max": report.column_norm_max,
        "trajectory": {
            "family": traj.params.family,
            "sigma": traj.params.sigma,
            "mu": traj.params.mu,
            "tau": traj.params.tau,
            "amplitude": traj.amplitude,
            "dt": dt,
        },
    }


def cmd_simulate(args):
    params = _load_device(args)
    out = _outdir(args)
    spectrum = spc.track_spectrum(params)
    traj = _prepare_trajectory(args, spectrum)
    record = (1, 1) if args.populations else None
    prop = evo.propagate(traj, params, dt=args.dt, record_state=record)
    report = evo.reconstruct_gate(prop, spectrum)
    payload = _gate_payload(report, traj, prop.dt)
    payload["fidelity_selected"] = {
        "mode": args.fidelity_mode,
        "subspace": args.fidelity_subspace,
        "value": report.fidelity[args.fidelity_subspace][args.fidelity_mode],
    }
    _emit(write_json(out / "gate_report.json", payload))
    if args.populations:
        header = ["t"] + [f"p{_label_str(lab)}" for lab in dev.BASIS_LABELS]
        rows = np.column_stack([prop.t_record, prop.populations])
        _emit(write_csv(out / "populations.csv", header, rows))
        if not args.no_plots:
            _emit(
                plots.plot_populations(
                    prop.t_record, prop.populations, dev.BASIS_LABELS, out / "populations.png"
                )
            )
    if not args.no_plots:
        _emit(plots.plot_gate_matrices([(traj.params.family, report)], out / "gate.png"))


def _load_samples(path) -> list[trj.TrajectoryParams]:
    import json as _json

    try:
        entries = _json.loads(Path(path).read_text())
    except (OSError, ValueError) as exc:
        raise DomainError(f"cannot read samples file {path}: {exc}") from exc
    if not isinstance(entries, list):
        raise DomainError("samples file must hold a JSON list")
    samples = []
    for entry in entries:
        samples.append(
            trj.TrajectoryParams(
                family=entry["family"],
                sigma=float(entry["sigma"]),
                tau=float(entry["tau"]),
                mu=float(entry["mu"]) if entry.get("mu") is not None else None,
                epsilon=float(entry.get("epsilon", trj.DEFAULT_EPSILON)),
                n_samples=int(entry.get("n_samples", trj.DEFAULT_SAMPLES)),
            )
        )
    return samples


_RANK_CSV_HEADER = [
    "family", "sigma", "mu", "tau", "amplitude", "n_norm", "fidelity_distance", "leakage_20",
]


def _rank_rows(report):
    return [
        (
            r["family"],
            r["sigma"],
            float("nan") if r["mu"] is None else r["mu"],
            r["tau"],
            r["amplitude"],
            r["n_norm"],
            r["fidelity_distance"],
            r["leakage_20"],
        )
        for r in report.rows
    ]


def cmd_rank_check(args):
    params = _load_device(args)
    out = _outdir(args)
    spectrum = spc.track_spectrum(params)
    samples = _load_samples(args.samples_file)
    report = evo.rank_check(
        samples,
        spectrum,
        amplitude_mode=args.amplitude_mode,
        dt=args.dt,
        fid_mode=args.fid_mode,
        fid_subspace=args.fid_subspace,
        k=args.k,
    )
    _emit(write_csv(out / "rank_table.csv", _RANK_CSV_HEADER, _rank_rows(report)))
    summary = {
        "kendall_tau": report.kendall_tau,
        "n_pairs": report.n_pairs,
        "n_concordant": report.n_concordant,
        "n_discordant": report.n_discordant,
        "n_ties": report.n_ties,
        "n_samples": len(report.rows),
        "n_excluded": len(report.excluded),
        "excluded": [
            {"family": e["params"].family, "sigma": e["params"].sigma, "reason": e["reason"]}
            for e in report.excluded
        ],
        "fid_mode": report.fid_mode,
        "fid_subspace": report.fid_subspace,
        "amplitude_mode": args.amplitude_mode,
    }
    _emit(write_json(out / "rank_summary.json", summary))
    if not args.no_plots:
        _emit(plots.plot_rank(report, out / "rank.png"))


# ---------------------------------------------------------------------------
# reproduce pipelines
# ---------------------------------------------------------------------------


def cmd_reproduce(args):
    ident = args.figure if args.figure is not None else args.id
    if ident is None:
        raise DomainError(f"reproduce needs an id among {REPRODUCE_IDS}")
    ident = str(ident).lower()
    if ident in ("2", "3", "4", "5"):
        ident = "fig" + ident
    if ident in ("sec5", "sec5_matrices"):
        ident = "sec5-matrices"
    if ident not in REPRODUCE_IDS:
        raise DomainError(f"unknown reproduce id {ident!r}; expected one of {REPRODUCE_IDS}")
    params = _load_device(args)
    out = _outdir(args)
    handler = {
        "fig2": _reproduce_fig2,
        "fig3": _reproduce_fig3,
        "fig4": _reproduce_fig4,
        "fig5": _reproduce_fig5,
        "sec5-matrices": _reproduce_sec5,
    }[ident]
    outputs, parameters = handler(params, out, not args.no_plots)
    manifest = {
        "id": ident,
        "package_version": __version__,
        "device": _device_payload(params),
        "parameters": parameters,
        "outputs": sorted(p.name for p in outputs),
    }
    path = write_json(out / f"{ident}_MANIFEST.json", manifest)
    for p in outputs:
        _emit(p)
    _emit(path)


def _reproduce_fig2(params, out, render):
    steps = 1201
    spectrum = spc.track_spectrum(params, phi_max=spc.DEFAULT_PHI_MAX, steps=steps)
    crossings = spectrum.crossings
    outputs = []
    rows = []
    for label in spectrum.labels:
        idx = spectrum._index(label)
        for phi, omega in zip(spectrum.phi_grid, spectrum.energies[idx]):
            rows.append((phi, _label_str(label), omega))
    outputs.append(write_csv(out / "fig2_spectrum.csv", ["phi", "label", "omega_rad_per_ns"], rows))
    sum_rows = zip(
        spectrum.phi_grid,
        spectrum.energies[spectrum._index((0, 1))] + spectrum.energies[spectrum._index((1, 0))],
        spectrum.energies[spectrum._index((1, 1))],
    )
    outputs.append(
        write_csv(out / "fig2_sum_curve.csv", ["phi", "omega01_plus_omega10", "omega11"], sum_rows)
    )
    payload = {
        name: {"phi": crossings.locations[name], "gap": crossings.gaps[name]}
        for name in crossings.locations
    }
    outputs.append(write_json(out / "fig2_crossings.json", payload))
    if render:
        outputs.append(plots.plot_spectrum(spectrum, crossings, out / "fig2.png"))
    parameters = {"phi_max": spc.DEFAULT_PHI_MAX, "steps": steps}
    return outputs, parameters


#: Example parameters of the five demonstration trajectories.
_FIG3_SETS = [
    ("gaussian", 2.0, None),
    ("mollifier", 6.5, None),
    ("mollified_gaussian", 2.5, 4.0),
    ("prepulsed_gaussian", 1.3, 12.0),
    ("mollifier_prepulsed_gaussian", 2.0, 13.0),
]
_FIG3_TAU = 20.0


def _reproduce_fig3(params, out, render):
    spectrum = spc.track_spectrum(params)
    outputs, named = [], []
    for n, (family, sigma, mu) in enumerate(_FIG3_SETS, start=1):
        tp = trj.TrajectoryParams(family=family, sigma=sigma, tau=_FIG3_TAU, mu=mu)
        traj = trj.peak_trajectory(tp, spectrum)
        named.append((f"{n}: {family}", traj))
        outputs.append(
            write_csv(
                out / f"fig3_{n}_{family}.csv", ["t", "phi"], zip(traj.t_grid, traj.phi_samples)
            )
        )
    if render:
        outputs.append(plots.plot_trajectories(named, out / "fig3.png"))
    parameters = {
        "tau": _FIG3_TAU,
        "amplitude_mode": "peak_normalized (amplitude = crossing location A2)",
        "families": [
            {"family": f, "sigma": s, "mu": m} for f, s, m in _FIG3_SETS
        ],
    }
    return outputs, parameters


#: Width windows on which the norm decreases monotonically (the
#: derivative-dominated regime; at larger widths the deviation-area term
#: takes over and the norm turns back up).
_FIG4_GRIDS = {
    "gaussian": (0.4, 1.4, 11),
    "mollifier": (0.8, 2.9, 11),
}
_FIG4_TAU = 20.0


def _reproduce_fig4(params, out, render):
    spectrum = spc.track_spectrum(params)
    outputs, curves = [], {}
    for family, grid in _FIG4_GRIDS.items():
        spec = swp.SweepSpec(family=family, sigma_range=grid, tau=_FIG4_TAU)
        result = swp.run_sweep(spec, spectrum)
        outputs.append(
            write_csv(out / f"fig4_{family}.csv", _SWEEP_CSV_HEADER, _sweep_rows(result))
        )
        feasible = [r for r in result.rows if r["feasible"]]
        curves[family] = (
            [r["sigma"] for r in feasible],
            [r["n_norm"] for r in feasible],
        )
    if render:
        outputs.append(plots.plot_norm_vs_sigma(curves, out / "fig4.png"))
    parameters = {"tau": _FIG4_TAU, "mode": "peak_normalized", "sigma_grids": _FIG4_GRIDS}
    return outputs, parameters


_FIG5_RESIDUAL = ("gaussian", 3.75)
_FIG5_GRID = {"sigma_range": (1.0, 3.0, 9), "mu_range": (8.0, 16.0, 9)}
_FIG5_TAU = 20.0


def _reproduce_fig5(params, out, render):
    spectrum = spc.track_spectrum(params)
    outputs = []
    family, sigma = _FIG5_RESIDUAL
    tp = trj.TrajectoryParams(family=family, sigma=sigma, tau=_FIG5_TAU)
    traj = trj.peak_trajectory(tp, spectrum)
    residual = met.el_residual(traj, spectrum)
    outputs.append(
        write_csv(out / "fig5_residual.csv", ["t", "D"], zip(residual.t_grid, residual.values))
    )
    results = []
    for fam in trj.TWO_PARAMETER_FAMILIES:
        spec = swp.SweepSpec(family=fam, tau=_FIG5_TAU, **_FIG5_GRID)
        result = swp.run_sweep(spec, spectrum)
        results.append(result)
        outputs.append(
            write_csv(out / f"fig5_sweep_{fam}.csv", _SWEEP_CSV_HEADER, _sweep_rows(result))
        )
    if render:
        outputs.append(
            plots.plot_residual(
                residual, out / "fig5_residual.png", title=f"gaussian, sigma = {sigma} ns"
            )
        )
        outputs.append(plots.plot_sweep_panels(results, out / "fig5.png"))
    parameters = {
        "residual_trajectory": {"family": family, "sigma": sigma, "tau": _FIG5_TAU},
        "grid": _FIG5_GRID,
        "mode": "peak_normalized",
    }
    return outputs, parameters


_SEC5_SETS = [("gaussian", 3.75), ("mollifier", 4.15)]
_SEC5_TAU = 20.0
_SEC5_DT = 1e-3


def _reproduce_sec5(params, out, render):
    spectrum = spc.track_spectrum(params)
    outputs, named, summary = [], [], {}
    for family, sigma in _SEC5_SETS:
        tp = trj.TrajectoryParams(family=family, sigma=sigma, tau=_SEC5_TAU)
        traj = trj.peak_trajectory(tp, spectrum)
        prop = evo.propagate(traj, params, dt=_SEC5_DT)
        report = evo.reconstruct_gate(prop, spectrum)
        named.append((family, report))
        outputs.append(
            write_json(out / f"sec5_gate_{family}.json", _gate_payload(report, traj, prop.dt))
        )
        summary[family] = {
            "n_norm": met.n_norm(traj, spectrum),
            "leakage_20": report.leakage_20,
            "fidelity": report.fidelity,
        }
    gauss, moll = summary["gaussian"], summary["mollifier"]
    summary["orderings"] = {
        "n_norm_mollifier_below_gaussian": moll["n_norm"] < gauss["n_norm"],
        "leakage_mollifier_below_gaussian": moll["leakage_20"] < gauss["leakage_20"],
        "fidelity_mollifier_below_gaussian": {
            sub: {
                mode: moll["fidelity"][sub][mode] < gauss["fidelity"][sub][mode]
                for mode in evo.FIDELITY_MODES
            }
            for sub in evo.FIDELITY_SUBSPACES
        },
    }
    outputs.append(write_json(out / "sec5_comparison.json", summary))
    if render:
        outputs.append(plots.plot_gate_matrices(named, out / "sec5_matrices.png"))
    parameters = {
        "tau": _SEC5_TAU,
        "dt": _SEC5_DT,
        "amplitude_mode": "peak_normalized (amplitude = crossing location A2; "
        "the pi constraint is unreachable at this gate time)",
        "sets": [{"family": f, "sigma": s} for f, s in _SEC5_SETS],
    }
    return outputs, parameters


if __name__ == "__main__":
    main()
