"""Flat-file outputs: CSV tables, plain PGM images and plot scripts.

Node labels in every file are 1-based. Numbers are written with 17
significant digits so a parse of the file reproduces the in-memory floats
exactly. All files are written to a temporary sibling and renamed into place.
"""

from __future__ import annotations

import os
import tempfile
from pathlib import Path

import numpy as np

from .analysis import LimitingDistribution, ProbabilityCarpet

PGM_MAXVAL = 255
PGM_LINE_WIDTH = 70
LOG_FLOOR = -6.0


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def atomic_write(path: str | os.PathLike, text: str) -> Path:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


# -- CSV ----------------------------------------------------------------------


def carpet_csv(carpet: ProbabilityCarpet) -> str:
    times = carpet.times.times
    lines = ["t,node,probability"]
    for t, row in zip(times, carpet.values):
        ts = fmt(t)
        lines.extend(f"{ts},{j + 1},{fmt(p)}" for j, p in enumerate(row))
    return "\n".join(lines) + "\n"


def series_csv(times, probabilities) -> str:
    lines = ["t,probability"]
    lines.extend(f"{fmt(t)},{fmt(p)}" for t, p in zip(times, probabilities))
    return "\n".join(lines) + "\n"


def limdist_csv(dist: LimitingDistribution) -> str:
    lines = ["node,probability"]
    lines.extend(f"{j + 1},{fmt(p)}" for j, p in enumerate(dist.values))
    return "\n".join(lines) + "\n"


def write_csv(data, path) -> Path:
    """Write a carpet, a limiting distribution or a (times, probabilities) series."""
    if isinstance(data, ProbabilityCarpet):
        text = carpet_csv(data)
    elif isinstance(data, LimitingDistribution):
        text = limdist_csv(data)
    else:
        times, probs = data
        if not (np.all(np.isfinite(times)) and np.all(np.isfinite(probs))):
            raise ValueError("series contains non-finite values")
        text = series_csv(times, probs)
    return atomic_write(path, text)


def read_csv(path) -> np.ndarray:
    """Parse an emitted CSV back into a float array (header dropped)."""
    return np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)


# -- PGM ----------------------------------------------------------------------


def carpet_pixels(carpet: ProbabilityCarpet, scale: str = "linear") -> np.ndarray:
    """Gray levels with high probability dark: one row per time sample, one column per node."""
    p = np.asarray(carpet.values, dtype=float)
    if scale == "linear":
        p_max = p.max()
        shade = p / p_max if p_max > 0 else np.zeros_like(p)
        pixels = np.rint(PGM_MAXVAL * (1.0 - shade))
    elif scale == "log":
        with np.errstate(divide="ignore"):
            logp = np.clip(np.log10(p), LOG_FLOOR, 0.0)
        pixels = np.rint(PGM_MAXVAL * logp / LOG_FLOOR)
    else:
        raise ValueError(f"unknown scale {scale!r}")
    return pixels.astype(int)


def pgm_text(pixels: np.ndarray) -> str:
    height, width = pixels.shape
    lines = ["P2", f"{width} {height}", str(PGM_MAXVAL)]
    for row in pixels:
        line = ""
        for value in map(str, row):
            if line and len(line) + 1 + len(value) > PGM_LINE_WIDTH:
                lines.append(line)
                line = value
            else:
                line = f"{line} {value}" if line else value
        lines.append(line)
    return "\n".join(lines) + "\n"


def write_pgm(carpet: ProbabilityCarpet, path, scale: str = "linear") -> Path:
    return atomic_write(path, pgm_text(carpet_pixels(carpet, scale)))


def read_pgm(path) -> np.ndarray:
    tokens = Path(path).read_text().split()
    if tokens[0] != "P2":
        raise ValueError("not a plain PGM file")
    width, height = int(tokens[1]), int(tokens[2])
    return np.array(tokens[4:], dtype=int).reshape(height, width)


# -- plot scripts -------------------------------------------------------------

_SCRIPT_HEAD = """\
# Renders {data} with matplotlib: python {script}
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

here = Path(__file__).resolve().parent
data = np.loadtxt(here / {data!r}, delimiter=",", skiprows=1, ndmin=2)
fig, ax = plt.subplots(figsize=(6, 4))
"""

_SCRIPT_BODY = {
    "series": """\
ax.plot(data[:, 0], data[:, 1], lw=1)
ax.set_xlabel(r"$t\\ [\\gamma^{{-1}}]$")
ax.set_ylabel({ylabel!r})
""",
    "carpet": """\
times = np.unique(data[:, 0])
nodes = np.unique(data[:, 1]).astype(int)
grid = data[:, 2].reshape(len(times), len(nodes))
mesh = ax.pcolormesh(nodes, times, grid, cmap="gray_r", shading="nearest")
fig.colorbar(mesh, ax=ax, label="probability")
ax.set_xlabel("node")
ax.set_ylabel(r"$t\\ [\\gamma^{{-1}}]$")
""",
    "limdist": """\
ax.plot(data[:, 0], data[:, 1], "o")
ax.set_xlabel("node")
ax.set_ylabel(r"$\\chi$")
""",
}

_SCRIPT_TAIL = """\
fig.tight_layout()
fig.savefig(here / {image!r}, dpi=150)
"""


def plot_script(kind: str, data_name: str, image_name: str, ylabel: str = "probability") -> str:
    if kind not in _SCRIPT_BODY:
        raise ValueError(f"unknown plot kind {kind!r}")
    script = Path(data_name).with_suffix(".plot.py").name
    return (
        _SCRIPT_HEAD.format(data=data_name, script=script)
        + _SCRIPT_BODY[kind].format(ylabel=ylabel)
        + _SCRIPT_TAIL.format(image=image_name)
    )


def emit_plot_script(kind: str, data_path, path=None, ylabel: str = "probability") -> Path:
    """Write a matplotlib script next to `data_path` that plots it by relative path."""
    data_path = Path(data_path)
    path = Path(path) if path is not None else data_path.with_suffix(".plot.py")
    rel = os.path.relpath(data_path, path.parent)
    image = Path(rel).with_suffix(".png").as_posix()
    return atomic_write(path, plot_script(kind, Path(rel).as_posix(), image, ylabel))
