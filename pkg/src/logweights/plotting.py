"""Figure rendering for witness series (headless matplotlib backend)."""

from __future__ import annotations

import math
from typing import Any, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def render_series(path: str, title: str, series: Sequence[Sequence[Any]],
                  verdict: str) -> None:
    """Plot a (prefix, value) witness series to a PNG file."""
    xs, ys = [], []
    for p, v in series:
        fp, fv = _num(p), _num(v)
        if math.isfinite(fp) and math.isfinite(fv):
            xs.append(fp)
            ys.append(fv)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    if xs:
        ax.plot(xs, ys, marker="o", lw=1.5, color="tab:blue")
        if min(xs) > 0 and max(xs) / min(xs) >= 8:
            ax.set_xscale("log", base=2)
    ax.set_xlabel("prefix")
    ax.set_ylabel("witness value (log scale constants)")
    ax.set_title(f"{title}\n[{verdict}]", fontsize=9)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _num(v: Any) -> float:
    if isinstance(v, str):
        return math.inf if v == "inf" else (-math.inf if v == "-inf" else math.nan)
    return float(v)
