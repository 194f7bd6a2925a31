"""Figure rendering for analyze runs.

Figures are written next to the CSV/JSON outputs.  Rendering is
deterministic: fixed size and dpi, no timestamps in the PNG metadata, so
reruns produce identical bytes.
"""

from __future__ import annotations

import math
from typing import Dict, Optional

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .analysis import CompressionProfile, ExponentFit  # noqa: E402

__all__ = ["save_profile_figure", "save_exponent_figure"]

_SAVE_OPTS = dict(dpi=150, metadata={"Date": None}, bbox_inches="tight")


def _label(eps_value: Optional[float]) -> str:
    return "unweighted" if eps_value is None else f"eps={eps_value:g}"


def save_profile_figure(profiles: Dict[Optional[float], CompressionProfile],
                        fits: Dict[Optional[float], Optional[ExponentFit]],
                        path: str) -> None:
    """Log-log plot of every profile, slopes in the legend, plus a
    square-root guide line."""
    fig, ax = plt.subplots(figsize=(7.0, 5.0))
    max_r = 1
    for eps_value in sorted(profiles, key=lambda e: -1.0 if e is None else e):
        prof = profiles[eps_value]
        fit = fits.get(eps_value)
        rs = [r for r, rho in zip(prof.radii, prof.rho) if rho > 0]
        ys = [rho for rho in prof.rho if rho > 0]
        if not rs:
            continue
        max_r = max(max_r, max(rs))
        name = _label(eps_value)
        if fit is not None:
            name += f" (slope {fit.slope:.3f})"
        ax.plot(rs, ys, marker="o", markersize=3, linewidth=1.2, label=name)
    guide_r = [1, max_r]
    ax.plot(guide_r, [math.sqrt(r) for r in guide_r], linestyle="--",
            color="gray", linewidth=1.0, label="sqrt(r)")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("radius r")
    ax.set_ylabel("rho(r)")
    ax.set_title("Compression profiles")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.savefig(path, **_SAVE_OPTS)
    plt.close(fig)


def save_exponent_figure(fits: Dict[Optional[float], Optional[ExponentFit]],
                         path: str) -> None:
    """Fitted slope against eps, with the 1/2 + eps reference line."""
    xs = []
    ys = []
    for eps_value, fit in sorted(
            ((e, f) for e, f in fits.items() if e is not None and f is not None),
            key=lambda item: item[0]):
        xs.append(eps_value)
        ys.append(fit.slope)
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    if xs:
        ax.plot(xs, ys, marker="s", linewidth=1.2, label="fitted slope")
        ref = [0.5 + x for x in xs]
        ax.plot(xs, ref, linestyle="--", color="gray", linewidth=1.0,
                label="1/2 + eps")
    unweighted = fits.get(None)
    if unweighted is not None:
        ax.axhline(unweighted.slope, linestyle=":", color="black",
                   linewidth=1.0, label="unweighted slope")
    ax.set_xlabel("eps")
    ax.set_ylabel("compression exponent")
    ax.set_title("Fitted compression exponents")
    ax.grid(True, alpha=0.3)
    if ax.get_legend_handles_labels()[0]:
        ax.legend(fontsize=8)
    fig.savefig(path, **_SAVE_OPTS)
    plt.close(fig)
