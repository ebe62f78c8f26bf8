"""Figure rendering for the report path.

Each saver takes the already-computed report data and writes one PNG
next to the delimited output.  Rendering is headless (Agg) and never
touches the CSV/JSON contents.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def _finish(fig, path) -> None:
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_range_plot(counts, kind: str, path) -> None:
    """Counts against the n/8 reference line."""
    ns = np.arange(len(counts))
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(ns, counts, lw=0.6, label=f"{kind}(A, n)")
    ax.plot(ns, ns / 8.0, "k--", lw=1.0, label="n/8")
    ax.set_xlabel("n")
    ax.set_ylabel("count")
    ax.legend(loc="upper left")
    ax.grid(alpha=0.3)
    _finish(fig, path)


def save_density_plot(reports, path) -> None:
    """Good-n fraction per dyadic window, one line per (theta, C)."""
    fig, ax = plt.subplots(figsize=(7, 4))
    for rep in reports:
        windows = [w for w in rep.windows if w.fraction is not None]
        his = [w.hi for w in windows]
        fracs = [w.fraction for w in windows]
        ax.plot(his, fracs, marker="o", ms=3,
                label=f"theta={rep.theta:g}, C={rep.C:g}")
    ax.set_xscale("log", base=2)
    ax.set_ylim(-0.02, 1.02)
    ax.set_xlabel("window upper bound")
    ax.set_ylabel("fraction of good n")
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    _finish(fig, path)


def save_per_f_plot(reports, path) -> None:
    """Worst scaled deviation by marked-block count."""
    fig, ax = plt.subplots(figsize=(7, 4))
    for rep in reports:
        fs = [d.f for d in rep.per_f_max_deviation]
        devs = [d.max_deviation for d in rep.per_f_max_deviation]
        ax.semilogy(fs, devs, marker="s", ms=4,
                    label=f"theta={rep.theta:g}, C={rep.C:g}")
    ax.set_xlabel("marked-block count of n")
    ax.set_ylabel("max |R - n/8| / n^(1-theta)")
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3, which="both")
    _finish(fig, path)


def save_scan_plot(records, path) -> None:
    """Window extremes of R/n with the 1/8 reference."""
    fig, ax = plt.subplots(figsize=(7, 4))
    for kind, marker, color in (("min", "v", "tab:blue"), ("max", "^", "tab:red")):
        sel = [r for r in records if r.kind == kind]
        ax.plot([r.n for r in sel], [r.ratio for r in sel],
                marker, color=color, ms=4, ls="-", lw=0.5, label=kind)
    ax.axhline(0.125, color="k", ls="--", lw=1.0, label="1/8")
    ax.set_xlabel("n")
    ax.set_ylabel("R(A, n) / n")
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    _finish(fig, path)


def save_tclasses_plot(rows, path) -> None:
    """Parity-class sizes of the toggleable pairs per n."""
    arr = np.asarray(rows, dtype=np.int64)
    fig, ax = plt.subplots(figsize=(7, 4))
    for col, label in ((1, "AA"), (2, "BB"), (3, "AB"), (4, "BA")):
        ax.plot(arr[:, 0], arr[:, col], lw=0.7, label=label)
    ax.set_xlabel("n")
    ax.set_ylabel("class size")
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    _finish(fig, path)


def save_sdecomp_plot(rows, path) -> None:
    """Sieve census per n: total, missed, failed, kept."""
    arr = np.asarray(rows, dtype=np.int64)
    fig, ax = plt.subplots(figsize=(7, 4))
    for col, label in ((2, "total"), (3, "missed"), (4, "failed"), (5, "kept")):
        ax.plot(arr[:, 0], arr[:, col], lw=0.7, label=label)
    ax.set_xlabel("n")
    ax.set_ylabel("pairs")
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    _finish(fig, path)
