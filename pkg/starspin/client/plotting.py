"""
Static SVG renderings of result tables.

Plots only draw what is in the table. SVG output is reproducible: the hash
salt is fixed and no creation date is embedded.
"""

import logging
from pathlib import Path
from typing import Optional, Union

import numpy as np

from ..utils.errors import ColumnMismatch
from .runner import ExperimentResult

log = logging.getLogger("starspin")

PLOT_KINDS = ("line", "heatmap", "sticks")

_HEATMAP_COLUMNS = ("theta", "phi", "mean_entropy")
_STICK_COLUMNS = ("frequency_hz", "amplitude")
_CHANNEL_LABELS = {0: "central", 1: "ancilla"}


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    matplotlib.rcParams.update({
        "svg.hashsalt": "starspin",
        "svg.fonttype": "none",
        "font.family": "DejaVu Sans",
        "axes.unicode_minus": False,
    })
    import matplotlib.pyplot as plt

    return plt


def _require(result: ExperimentResult, kind: str, names) -> None:
    missing = [name for name in names if name not in result.columns]
    if missing:
        raise ColumnMismatch(
            f"'{kind}' plot needs columns {', '.join(names)}; result is missing {', '.join(missing)}"
        )


def _line(ax, result: ExperimentResult) -> None:
    if len(result.columns) < 2:
        raise ColumnMismatch("'line' plot needs an x column and at least one series")
    x = result.column(result.columns[0])
    for name in result.columns[1:]:
        ax.plot(x, result.column(name), marker="o", markersize=3, label=name)
    ax.set_xlabel(result.columns[0])
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best", fontsize=8)


def _heatmap(fig, ax, result: ExperimentResult) -> None:
    _require(result, "heatmap", _HEATMAP_COLUMNS)
    theta, phi, value = (result.column(name) for name in _HEATMAP_COLUMNS)
    if "k" in result.columns:
        # one map per k; the first k is drawn
        k = result.column("k")
        keep = k == k[0]
        theta, phi, value = theta[keep], phi[keep], value[keep]
        ax.set_title(f"k = {k[0]:g}")
    thetas, phis = np.unique(theta), np.unique(phi)
    grid = np.full((thetas.size, phis.size), np.nan)
    grid[np.searchsorted(thetas, theta), np.searchsorted(phis, phi)] = value
    mesh = ax.pcolormesh(phis, thetas, grid, vmin=0.0, vmax=1.0, cmap="viridis", shading="nearest")
    fig.colorbar(mesh, ax=ax, label="central entropy (bits)")
    ax.set_xlabel("phi")
    ax.set_ylabel("theta")


def _sticks(ax, result: ExperimentResult) -> None:
    _require(result, "sticks", _STICK_COLUMNS)
    frequency, amplitude = (result.column(name) for name in _STICK_COLUMNS)
    channels = result.column("channel") if "channel" in result.columns else np.zeros(frequency.size)
    for code in np.unique(channels):
        keep = channels == code
        label = _CHANNEL_LABELS.get(int(code), f"channel {int(code)}")
        ax.vlines(frequency[keep], 0.0, amplitude[keep], linewidth=1.5, label=label)
    ax.axhline(0.0, color="black", linewidth=0.5)
    ax.set_xlabel("offset from Larmor frequency (Hz)")
    ax.set_ylabel("relative amplitude")
    ax.legend(loc="best", fontsize=8)


def emit_plot(result: ExperimentResult, kind: str, path: Union[str, Path], title: Optional[str] = None) -> Path:
    """Render ``result`` as a ``kind`` plot into the SVG file ``path``.

    Raises:
        ColumnMismatch: If the result is empty or lacks the columns ``kind`` needs
    """
    if kind not in PLOT_KINDS:
        raise ColumnMismatch(f"unknown plot kind '{kind}'; choose one of {', '.join(PLOT_KINDS)}")
    if not result.rows:
        raise ColumnMismatch("result has no rows to plot")
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.4, 4.8), constrained_layout=True)
    try:
        if kind == "line":
            _line(ax, result)
        elif kind == "heatmap":
            _heatmap(fig, ax, result)
        else:
            _sticks(ax, result)
        if title:
            ax.set_title(title)
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(path, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)
    log.info(f"wrote {kind} plot to {path}")
    return path
