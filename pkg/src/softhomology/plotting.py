"""SVG line charts for sweep and hole-scaling rows. Best effort; the CSV is the contract."""

from __future__ import annotations

from collections import defaultdict
from pathlib import Path as FsPath

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

plt.rcParams["svg.hashsalt"] = "softhomology"

COLORS = {"hstar": "tab:green", "rhstar": "tab:purple", "prhstar": "tab:pink", "blk": "tab:orange"}
LABELS = {"hstar": "H*", "rhstar": "RH*", "prhstar": "PRH*", "blk": "BLK"}


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def plot_sweep(rows, out_dir) -> list[FsPath]:
    """Length, projection difference and visited nodes against alpha."""
    out_dir = FsPath(out_dir)
    by_alg = defaultdict(list)
    for r in rows:
        by_alg[r.algorithm].append(r)
    panels = [
        ("path_length", "path length", "sweep_length.svg", False),
        ("proj_diff", "projection difference", "sweep_proj_diff.svg", False),
        ("nodes_visited", "nodes visited", "sweep_visits.svg", True),
    ]
    written = []
    for attr, ylabel, fname, logy in panels:
        fig, ax = plt.subplots(figsize=(5, 3.5))
        for alg, rs in by_alg.items():
            rs = sorted(rs, key=lambda r: r.alpha)
            xs = [r.alpha for r in rs]
            ys = [getattr(r, attr) for r in rs]
            style = "--" if alg == "blk" else "-"
            ax.plot(xs, ys, style, color=COLORS.get(alg), label=LABELS.get(alg, alg), marker="." if alg != "blk" else None)
        ax.set_xlabel("alpha")
        ax.set_ylabel(ylabel)
        if logy:
            ax.set_yscale("log")
        ax.legend()
        _save(fig, out_dir / fname)
        written.append(out_dir / fname)
    return written


def plot_holes(rows, out_dir) -> list[FsPath]:
    """Length and visited nodes against the number of holes."""
    out_dir = FsPath(out_dir)
    order = list(dict.fromkeys(r.experiment_id for r in rows))
    by_alg = defaultdict(dict)
    for r in rows:
        by_alg[r.algorithm][order.index(r.experiment_id) + 1] = r
    written = []
    for attr, ylabel, fname, logy in [
        ("path_length", "path length", "holes_length.svg", False),
        ("nodes_visited", "nodes visited", "holes_visits.svg", True),
    ]:
        fig, ax = plt.subplots(figsize=(5, 3.5))
        for alg, pts in by_alg.items():
            xs = sorted(pts)
            ax.plot(xs, [getattr(pts[x], attr) for x in xs], marker="o", color=COLORS.get(alg),
                    label=LABELS.get(alg, alg))
        ax.set_xlabel("number of holes")
        ax.set_ylabel(ylabel)
        if logy:
            ax.set_yscale("log")
        ax.legend()
        _save(fig, out_dir / fname)
        written.append(out_dir / fname)
    return written
