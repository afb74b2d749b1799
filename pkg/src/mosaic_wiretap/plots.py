"""Figure rendering for CLI reports (opt-in via --plot).

Figures are rendered headlessly to files next to the delimited output;
nothing here is needed by the numerical paths.  Like the text reports,
figures are written via a temp file and atomic rename.
"""

from __future__ import annotations

import math
import os
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

_DPI = 150


def _atomic_save(fig, path) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + f".tmp.{os.getpid()}.png")
    try:
        fig.savefig(tmp, dpi=_DPI, format="png")
        os.replace(tmp, path)
    finally:
        plt.close(fig)
        if tmp.exists():
            tmp.unlink()


def save_leakage_figure(path, per_seed_chi, bound: float) -> None:
    """Per-seed Holevo leakage with the design bound as a reference line."""
    fig, ax = plt.subplots(figsize=(7, 3.5))
    xs = range(len(per_seed_chi))
    ax.bar(xs, per_seed_chi, color="#4878cf", label="per-seed leakage")
    level = math.log2(bound) if bound > 0 else 0.0
    ax.axhline(level, color="#d65f5f", ls="--",
               label=f"log2(bound) = {level:.4g}")
    ax.set_xlabel("seed index")
    ax.set_ylabel("Holevo information [bits]")
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    _atomic_save(fig, path)


def save_error_figure(path, seed_labels, avg_errors, max_errors) -> None:
    """Per-seed decoding errors of the modular codes."""
    fig, ax = plt.subplots(figsize=(7, 3.5))
    xs = range(len(seed_labels))
    ax.plot(xs, avg_errors, "o-", color="#4878cf", label="average error")
    ax.plot(xs, max_errors, "s--", color="#d65f5f", label="maximal error")
    ax.set_xlabel("seed index")
    ax.set_ylabel("decoding error")
    ax.set_ylim(bottom=0)
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    _atomic_save(fig, path)


def save_margin_figure(path, margins) -> None:
    """Histogram of bound-minus-leakage margins from a sweep."""
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.hist(margins, bins=30, color="#6acc65", edgecolor="black", lw=0.4)
    ax.axvline(0.0, color="#d65f5f", ls="--", label="violation threshold")
    ax.set_xlabel("bound margin")
    ax.set_ylabel("count")
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    _atomic_save(fig, path)
