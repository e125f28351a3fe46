"""Matplotlib renderings of the CLI reports, written straight to image files."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .analysis import LimitingDistribution, ProbabilityCarpet  # noqa: E402

STYLE = {
    "font.size": 10,
    "axes.labelsize": 10,
    "legend.fontsize": 8,
    "xtick.direction": "in",
    "ytick.direction": "in",
    "savefig.dpi": 150,
}
TIME_LABEL = r"$t\ [\gamma^{-1}]$"


def _save(fig, path) -> Path:
    path = Path(path)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def render_series(times, curves: dict[str, np.ndarray], path, ylabel: str = "probability") -> Path:
    """Line plot of one or more probability series sharing a time axis."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(6, 4))
        for label, values in curves.items():
            ax.plot(times, values, lw=1, label=label)
        ax.set_xlabel(TIME_LABEL)
        ax.set_ylabel(ylabel)
        if len(curves) > 1:
            ax.legend()
        return _save(fig, path)


def render_carpet(carpet: ProbabilityCarpet, path, log: bool = False) -> Path:
    """Heat map with nodes across and time running down the vertical axis."""
    values = carpet.values
    if log:
        with np.errstate(divide="ignore"):
            values = np.clip(np.log10(values), -6.0, 0.0)
    nodes = np.arange(1, carpet.spec.n_nodes + 1)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5, 6))
        mesh = ax.pcolormesh(nodes, carpet.times.times, values, cmap="gray_r", shading="nearest")
        fig.colorbar(mesh, ax=ax, label=r"$\log_{10}$ probability" if log else "probability")
        ax.set_xlabel("node")
        ax.set_ylabel(TIME_LABEL)
        return _save(fig, path)


def render_limdist(dists: dict[str, LimitingDistribution], path) -> Path:
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(6, 4))
        for (label, dist), marker in zip(dists.items(), "o^sv"):
            ax.plot(np.arange(1, len(dist.values) + 1), dist.values, marker, label=label)
        ax.set_xlabel("node")
        ax.set_ylabel(r"$\chi$")
        ax.legend()
        return _save(fig, path)
