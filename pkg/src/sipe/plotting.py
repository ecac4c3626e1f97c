"""Figures written next to the CSV reports."""

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

GOLDEN = (math.sqrt(5) - 1) / 2
STYLE = {
    "font.size": 10,
    "axes.labelsize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "svg.hashsalt": "sipe",
}


def figure(width=6.0, height=None, **kwargs):
    height = height or width * GOLDEN
    with plt.rc_context(STYLE):
        return plt.subplots(figsize=(width, height), **kwargs)


def savefig(fig, path, dpi=150):
    with plt.rc_context(STYLE):
        fig.savefig(path, dpi=dpi, bbox_inches="tight", metadata={"Software": None})
    plt.close(fig)


def plot_power_spectra(rows, path, log_scale=True):
    """One curve per dimension from :func:`analysis.power_spectra` rows."""
    fig, ax = figure()
    curves = {}
    for r in rows:
        curves.setdefault(r["dimension"], []).append((r["frequency"], r["power"]))
    for name, pts in curves.items():
        x, y = zip(*pts)
        ax.plot(x, y, lw=0.8, label=name if len(curves) <= 10 else None)
    ax.set_xlabel("frequency (cycles per unit time)")
    ax.set_ylabel("smoothed power")
    ax.set_xlim(0, 0.5)
    if log_scale:
        ax.set_yscale("log")
    if len(curves) <= 10:
        ax.legend(frameon=False, ncol=2)
    savefig(fig, path)


def plot_matrix(matrix, names, path, title=None, vmax=None):
    """Heat map of a ``p x p`` summary such as a band partial coherence."""
    matrix = np.array(matrix, dtype=float)
    p = matrix.shape[0]
    shown = matrix.copy()
    np.fill_diagonal(shown, np.nan)
    fig, ax = figure(width=5.0, height=4.2)
    im = ax.imshow(shown, cmap="viridis", vmin=0, vmax=vmax or np.nanmax(shown) or 1)
    fig.colorbar(im, ax=ax, shrink=0.8)
    if p <= 20:
        ax.set_xticks(range(p), names, rotation=90)
        ax.set_yticks(range(p), names)
    if title:
        ax.set_title(title)
    savefig(fig, path)


def plot_benchmark(rows, path):
    """Bar chart of mean MISE (x1e3) per estimator with one-sd error bars."""
    fig, ax = figure()
    labels = [r["estimator"] for r in rows]
    means = [r["mise_mean"] for r in rows]
    sds = [0.0 if r["mise_sd"] is None or math.isnan(r["mise_sd"]) else r["mise_sd"] for r in rows]
    x = np.arange(len(rows))
    heights = [0.0 if m is None or math.isnan(m) else m for m in means]
    ax.bar(x, heights, yerr=sds, color="0.6", capsize=3)
    for xi, m in zip(x, means):
        if m is None or math.isnan(m):
            ax.text(xi, 0, "-", ha="center", va="bottom")
    ax.set_xticks(x, labels)
    ax.set_ylabel(r"MISE $\times 10^3$")
    if all(h > 0 for h in heights):
        ax.set_yscale("log")
    r0 = rows[0]
    ax.set_title(f"{r0['scenario']}  p={r0['p']}  n={r0['n']}")
    savefig(fig, path)
