"""Matplotlib renderings of the emitted data, written next to the CSV/JSON.

All functions save to a file and return its path; nothing is shown
interactively.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .device import TWO_PI

_LABEL_TEXT = {
    (i, j): f"$|{i},{j}\\rangle$" for i in range(3) for j in range(3)
}


def _ghz(omega):
    return np.asarray(omega) / TWO_PI


def plot_spectrum(spectrum, crossings, path) -> Path:
    """Three spectral windows: single, double and triple excitation bands."""
    fig, axes = plt.subplots(1, 3, figsize=(12, 3.6))
    panels = [
        ([(0, 1), (1, 0)], ["A1"], "single excitation"),
        ([(1, 2), (2, 1)], ["A5"], "triple excitation"),
        ([(0, 2), (1, 1), (2, 0)], ["A2", "A3", "A4"], "double excitation"),
    ]
    phi = spectrum.phi_grid
    for ax, (labels, marks, title) in zip(axes, panels):
        for lab in labels:
            ax.plot(phi, _ghz(spectrum.energies[spectrum._index(lab)]), label=_LABEL_TEXT[lab])
        if (1, 1) in labels:
            sum_curve = spectrum.energies[spectrum._index((0, 1))] + spectrum.energies[
                spectrum._index((1, 0))
            ]
            ax.plot(phi, _ghz(sum_curve), "k--", lw=1, label=r"$\omega_{01}+\omega_{10}$")
        for name in marks:
            if name in crossings.locations:
                ax.axvline(crossings.locations[name], color="gray", ls=":", lw=0.8)
                ax.text(
                    crossings.locations[name], ax.get_ylim()[0], name,
                    fontsize=8, ha="center", va="bottom", color="gray",
                )
        ax.set_xlabel(r"$\varphi$ (rad)")
        ax.set_ylabel(r"$\omega/2\pi$ (GHz)")
        ax.set_title(title, fontsize=10)
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return Path(path)


def plot_trajectories(named_trajectories, path) -> Path:
    """Overlay of flux curves phi(t); input is (label, Trajectory) pairs."""
    fig, ax = plt.subplots(figsize=(7, 4))
    for label, traj in named_trajectories:
        ax.plot(traj.t_grid, traj.phi_samples, label=label, lw=1.2)
    ax.set_xlabel("t (ns)")
    ax.set_ylabel(r"$\varphi$ (rad)")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return Path(path)


def plot_norm_vs_sigma(curves, path) -> Path:
    """Norm against width per family; ``curves`` maps name -> (sigma, norm)."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for name, (sigmas, norms) in curves.items():
        ax.plot(sigmas, norms, "o-", ms=3, lw=1.2, label=name)
    ax.set_xlabel(r"$\sigma$ (ns)")
    ax.set_ylabel("diabaticity norm")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return Path(path)


def plot_residual(report, path, title=None) -> Path:
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(report.t_grid, report.values, lw=1.0)
    ax.set_xlabel("t (ns)")
    ax.set_ylabel("stationarity residual")
    if title:
        ax.set_title(title, fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return Path(path)


def plot_sweep(result, path) -> Path:
    """Heatmap over (sigma, mu) for two-parameter sweeps, line otherwise."""
    spec = result.spec
    sigmas = spec.sigma_values()
    mus = spec.mu_values()
    fig, ax = plt.subplots(figsize=(6, 4.2))
    if len(mus) > 1 and not np.isnan(mus[0]):
        grid = np.full((len(mus), len(sigmas)), np.nan)
        for row in result.rows:
            i = int(np.argmin(np.abs(mus - row["mu"])))
            j = int(np.argmin(np.abs(sigmas - row["sigma"])))
            if row["feasible"]:
                grid[i, j] = row["n_norm"]
        im = ax.pcolormesh(sigmas, mus, grid, shading="nearest", cmap="viridis")
        fig.colorbar(im, ax=ax, label="diabaticity norm")
        ax.set_ylabel(r"$\mu$ (ns)")
        if result.argmin is not None:
            ax.plot(result.argmin["sigma"], result.argmin["mu"], "r*", ms=12)
    else:
        feasible = [r for r in result.rows if r["feasible"]]
        ax.plot([r["sigma"] for r in feasible], [r["n_norm"] for r in feasible], "o-", ms=3)
        ax.set_ylabel("diabaticity norm")
    ax.set_xlabel(r"$\sigma$ (ns)")
    ax.set_title(f"{spec.family}, tau = {spec.tau} ns, {spec.mode}", fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return Path(path)


def plot_sweep_panels(results, path) -> Path:
    """Side-by-side heatmaps for several sweep results."""
    fig, axes = plt.subplots(1, len(results), figsize=(4.2 * len(results), 3.8))
    if len(results) == 1:
        axes = [axes]
    for ax, result in zip(axes, results):
        spec = result.spec
        sigmas = spec.sigma_values()
        mus = spec.mu_values()
        grid = np.full((len(mus), len(sigmas)), np.nan)
        for row in result.rows:
            i = int(np.argmin(np.abs(mus - row["mu"])))
            j = int(np.argmin(np.abs(sigmas - row["sigma"])))
            if row["feasible"]:
                grid[i, j] = row["n_norm"]
        im = ax.pcolormesh(sigmas, mus, grid, shading="nearest", cmap="viridis")
        fig.colorbar(im, ax=ax)
        ax.set_xlabel(r"$\sigma$ (ns)")
        ax.set_ylabel(r"$\mu$ (ns)")
        ax.set_title(spec.family, fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return Path(path)


def plot_gate_matrices(named_reports, path) -> Path:
    """Entry magnitudes of the reconstructed gate matrices."""
    fig, axes = plt.subplots(1, len(named_reports), figsize=(4.6 * len(named_reports), 4))
    if len(named_reports) == 1:
        axes = [axes]
    for ax, (name, report) in zip(axes, named_reports):
        im = ax.imshow(np.abs(report.m), cmap="magma", vmin=0.0, vmax=1.0)
        ticks = [_LABEL_TEXT[lab] for lab in report.basis]
        ax.set_xticks(range(len(ticks)), ticks, fontsize=7, rotation=45)
        ax.set_yticks(range(len(ticks)), ticks, fontsize=7)
        ax.set_title(f"{name}: |M|", fontsize=10)
        fig.colorbar(im, ax=ax, shrink=0.8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return Path(path)


def plot_rank(report, path) -> Path:
    """Scatter of gate distance against diabaticity norm."""
    fig, ax = plt.subplots(figsize=(5.5, 4))
    families = sorted({r["family"] for r in report.rows})
    for fam in families:
        rows = [r for r in report.rows if r["family"] == fam]
        ax.scatter(
            [r["n_norm"] for r in rows],
            [r["fidelity_distance"] for r in rows],
            s=18, label=fam, alpha=0.8,
        )
    tau_text = "n/a" if report.kendall_tau is None else f"{report.kendall_tau:.3f}"
    ax.set_xlabel("diabaticity norm")
    ax.set_ylabel(f"gate distance ({report.fid_subspace}, {report.fid_mode})")
    ax.set_title(f"Kendall tau = {tau_text}", fontsize=10)
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return Path(path)


def plot_populations(t, populations, labels, path) -> Path:
    """Bare-state populations over time for one propagated initial state."""
    fig, ax = plt.subplots(figsize=(7, 4))
    for k, lab in enumerate(labels):
        if populations[:, k].max() > 1e-4:
            ax.plot(t, populations[:, k], lw=1.0, label=_LABEL_TEXT[lab])
    ax.set_xlabel("t (ns)")
    ax.set_ylabel("population")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return Path(path)
