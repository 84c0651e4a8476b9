"""Figures for the CLI (``--plot``); matplotlib is imported lazily with the Agg backend."""

from __future__ import annotations

import math

import numpy as np


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def plot_eigencurves(table, path):
    """Line plot of ``lambda_j(t)`` over the finite part of the grid."""
    plt = _pyplot()
    finite = np.isfinite(table.grid)
    fig, ax = plt.subplots(figsize=(6, 4))
    for j in range(table.n):
        ax.plot(table.grid[finite], table.lambdas[j, finite], label=f"$\\lambda_{{{j + 1}}}$")
    ax.set_xlabel("t")
    ax.set_ylabel("eigenvalue of $\\varphi^+(t)$")
    ax.set_ylim(-0.05, 1.05)
    if table.n <= 6:
        ax.legend(fontsize="small")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_samples(case, samples, path, max_entries=4):
    """Entries of sampled matrices: curves for one-axis cases, heatmaps otherwise.

    Only interior points are drawn; boundary values live in the data file.
    """
    plt = _pyplot()
    n = samples[0].n
    entries = [(j, j) for j in range(n)][:max_entries]
    one_axis = case in ("phi-plus", "b-1n")
    if one_axis:
        fig, ax = plt.subplots(figsize=(6, 4))
        if case == "phi-plus":
            keep = [s for s in samples if math.isfinite(s.point.t1)]
            x = [s.point.t1 for s in keep]
            ax.set_xlabel("t")
        else:
            keep = [s for s in samples if s.provenance == "quadrature"]
            x = [s.point.t2 for s in keep]
            ax.set_xscale("log")
            ax.set_xlabel("x2")
        for j, k in entries:
            ax.plot(x, [s.entries[j, k] for s in keep], label=f"({j + 1},{k + 1})")
        ax.legend(fontsize="small")
    else:
        inner = [s for s in samples if s.point.kind == "interior"]
        t1 = sorted({s.point.t1 for s in inner})
        t2 = sorted({s.point.t2 for s in inner})
        idx1 = {v: i for i, v in enumerate(t1)}
        idx2 = {v: i for i, v in enumerate(t2)}
        fig, axes = plt.subplots(1, len(entries), figsize=(4 * len(entries), 3.6), squeeze=False)
        for ax, (j, k) in zip(axes[0], entries):
            Z = np.full((len(t2), len(t1)), np.nan)
            for s in inner:
                Z[idx2[s.point.t2], idx1[s.point.t1]] = s.entries[j, k]
            mesh = ax.pcolormesh(t1, t2, Z, shading="nearest")
            ax.set_yscale("log")
            ax.set_title(f"entry ({j + 1},{k + 1})")
            ax.set_xlabel("t1" if case == "phi-a" else "x1")
            ax.set_ylabel("t2" if case == "phi-a" else "x2")
            fig.colorbar(mesh, ax=ax)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
