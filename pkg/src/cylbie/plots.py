"""Reconstruction overlay figures (SVG), matching the usual convention:
initial guess green, exact boundary dashed red, reconstruction blue,
arrows for the incident directions."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "cylbie"  # deterministic element ids

import matplotlib.pyplot as plt
import numpy as np


def _closed_xy(radial, n=512):
    t = np.linspace(0.0, 2.0 * np.pi, n + 1)
    r = np.asarray(radial(t), dtype=float)
    return r * np.cos(t), r * np.sin(t)


def save_overlay(path, final_radial, initial_radial=None, truth_radial=None, illum_angles=(), title=None):
    fig, ax = plt.subplots(figsize=(5.0, 5.0))
    reach = 0.0
    if initial_radial is not None:
        x, y = _closed_xy(initial_radial)
        ax.plot(x, y, color="green", lw=1.2, label="initial guess")
        reach = max(reach, np.max(np.hypot(x, y)))
    if truth_radial is not None:
        x, y = _closed_xy(truth_radial)
        ax.plot(x, y, color="red", ls="--", lw=1.4, label="exact")
        reach = max(reach, np.max(np.hypot(x, y)))
    x, y = _closed_xy(final_radial)
    ax.plot(x, y, color="blue", lw=1.6, label="reconstruction")
    reach = max(reach, np.max(np.hypot(x, y)))

    arrow_base = 1.55 * reach
    arrow_len = 0.35 * reach
    for phi in illum_angles:
        d = np.array([np.cos(phi), np.sin(phi)])
        tail = -arrow_base * d
        ax.annotate(
            "",
            xy=tail + arrow_len * d,
            xytext=tail,
            arrowprops=dict(arrowstyle="-|>", color="black", lw=1.2),
        )
    ax.set_aspect("equal")
    lim = 1.75 * reach
    ax.set_xlim(-lim, lim)
    ax.set_ylim(-lim, lim)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    if title:
        ax.set_title(title)
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, metadata={"Date": None})
    plt.close(fig)
