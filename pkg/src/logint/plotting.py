"""Figures written next to table and report files.

Figures are built with the object-oriented API on an Agg canvas, so nothing
touches pyplot's global state and no display is needed.
"""

from __future__ import annotations

import math
from collections import defaultdict
from pathlib import Path
from typing import Sequence

from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

GOLDEN = (math.sqrt(5) - 1) / 2
ERR_FLOOR = 1e-18


def figure_size(width: float = 7.0, rows: int = 1) -> tuple:
    return width, width * GOLDEN * rows * 0.75


def new_figure(nrows: int = 1, ncols: int = 1, width: float = 7.0):
    fig = Figure(figsize=figure_size(width, nrows), layout="constrained")
    FigureCanvasAgg(fig)
    axes = fig.subplots(nrows, ncols, squeeze=False)
    return fig, axes


def figure_path(out: str | Path, suffix: str) -> Path:
    """`report.json` -> `report.<suffix>.png` in the same directory."""
    out = Path(out)
    return out.with_name(f"{out.stem}.{suffix}.png")


def _clip(err: float) -> float:
    if err is None or not math.isfinite(err):
        return math.nan
    return max(err, ERR_FLOOR)


def plot_table(rows: Sequence, path: str | Path) -> Path:
    """Closed-form value against the parameter grid, and closed-form vs oracle error."""
    fig, axes = new_figure(2, 1)
    ax_v, ax_e = axes[0, 0], axes[1, 0]
    groups = defaultdict(list)
    for i, r in enumerate(rows):
        if r.a is not None:
            key = f"{r.family} m={r.m} k={r.k}"
            groups[key].append((r.a, r.value))
        else:
            key = f"{r.family}" + (f" r={r.r}" if r.r is not None else "")
            n = r.k if r.k is not None else r.m
            groups[key].append((n, r.value))
    for key, pts in groups.items():
        pts.sort()
        xs, ys = zip(*pts)
        ax_v.plot(xs, ys, marker="o", ms=3, lw=1, label=key)
    use_a = any(r.a is not None for r in rows)
    if use_a:
        ax_v.set_xscale("log")
    ax_v.set_xlabel("a" if use_a else "k (or m)")
    ax_v.set_ylabel("closed-form value")
    if len(groups) <= 12:
        ax_v.legend(fontsize=6, ncol=2)
    errs = [_clip(r.rel_err) for r in rows]
    ax_e.semilogy(range(len(rows)), errs, ".", color="C3")
    ax_e.set_xlabel("row")
    ax_e.set_ylabel("relative error vs oracle")
    path = Path(path)
    fig.savefig(path, dpi=120)
    return path


def plot_report(report, path: str | Path) -> Path:
    """Relative error of every case, grouped by identity, with the per-case tolerance."""
    fig, axes = new_figure(1, 1, width=9.0)
    ax = axes[0, 0]
    ids = []
    for c in report.cases:
        if c.identity_id not in ids:
            ids.append(c.identity_id)
    pos = {name: i for i, name in enumerate(ids)}
    colours = {"quadrature": "C0", "numerical": "C1", "structural": "C2"}
    for level, colour in colours.items():
        sel = [c for c in report.cases if c.equality_level == level and c.passed]
        if sel:
            ax.semilogy([pos[c.identity_id] for c in sel], [_clip(c.rel_err) for c in sel],
                        "o", ms=3, alpha=0.6, color=colour, label=level)
    failed = [c for c in report.cases if not c.passed]
    if failed:
        ys = [_clip(c.rel_err) if math.isfinite(c.rel_err) else 1.0 for c in failed]
        ax.semilogy([pos[c.identity_id] for c in failed], ys, "x", color="red", label="failed")
    tols = {}
    for c in report.cases:
        if c.tolerance > 0:
            tols[pos[c.identity_id]] = max(tols.get(pos[c.identity_id], 0), c.tolerance)
    if tols:
        xs = sorted(tols)
        ax.step(xs, [tols[x] for x in xs], where="mid", color="k", lw=0.8, label="tolerance")
    ax.set_xticks(range(len(ids)))
    ax.set_xticklabels(ids, rotation=90, fontsize=6)
    ax.set_ylabel("relative error (exact matches at floor)")
    ax.set_ylim(ERR_FLOOR / 10, 10)
    ax.legend(fontsize=7, loc="upper left")
    path = Path(path)
    fig.savefig(path, dpi=120)
    return path
