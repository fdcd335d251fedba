"""Figures for the ``report`` command (matplotlib, file output only)."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .phi import EpStream  # noqa: E402
from .report import LawReport  # noqa: E402


def plot_laws(reports: Sequence[LawReport], path: Path) -> Path:
    """Horizontal bars: instances checked per axiom, failures in red."""
    fig, ax = plt.subplots(figsize=(7, 0.5 * len(reports) + 1.2))
    names = [r.axiom for r in reports]
    ok = [r.instances - r.failed for r in reports]
    bad = [r.failed for r in reports]
    ax.barh(names, ok, color="tab:green", label="passed")
    ax.barh(names, bad, left=ok, color="tab:red", label="failed")
    ax.set_xscale("symlog")
    ax.set_xlim(0, 3 * max([r.instances for r in reports] + [1]))
    ax.set_xlabel("instances")
    ax.invert_yaxis()
    ax.legend(loc="lower right")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_running_means(streams: dict[str, EpStream], path: Path, length: int = 200) -> Path:
    """Running averages of each stream; all converge to the period mean."""
    fig, ax = plt.subplots(figsize=(7, 4))
    for label, s in streams.items():
        total, avgs = 0, []
        for i, k in enumerate(s.take(length), start=1):
            total += k
            avgs.append(total / i)
        line, = ax.plot(range(1, length + 1), avgs, label=f"{label}  mean {s.mean}")
        ax.axhline(float(s.mean), color=line.get_color(), ls=":", lw=1)
    ax.set_xlabel("prefix length")
    ax.set_ylabel("running average")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
