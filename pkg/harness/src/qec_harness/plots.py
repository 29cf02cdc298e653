"""Figure rendering for scheduler metrics CSVs and LER CSVs.

Two schemas are understood: the scheduler sweep's metrics table
(d,m,depth,volume,ancilla_volume,...) and this package's LER table. Both
render to PNG through the non-interactive backend.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .ler import read_csv as read_ler_csv

METRIC_NAMES = ("depth", "volume", "ancilla_volume")


def read_metrics_csv(path: str | Path) -> list[dict]:
    out = []
    with Path(path).open() as fh:
        for row in csv.DictReader(fh):
            out.append(
                {
                    "d": int(row["d"]),
                    "m": int(row["m"]),
                    **{k: int(row[k]) for k in METRIC_NAMES},
                }
            )
    return out


def split_regimes(rows: list[dict]) -> dict[tuple, list[dict]]:
    """Group LER rows by their (p_cnot, p_swap, p_idle) noise regime."""
    groups: dict[tuple, list[dict]] = {}
    for row in rows:
        key = (row.get("p_cnot"), row.get("p_swap"), row.get("p_idle"))
        groups.setdefault(key, []).append(row)
    return groups


def _regime_label(key: tuple) -> str:
    names = ("p_cnot", "p_swap", "p_idle")
    parts = [f"{n}={v:g}" for n, v in zip(names, key) if v]
    return ", ".join(parts) if parts else "noiseless"


def plot_metrics(rows: list[dict], out_path: str | Path) -> Path:
    """Depth, volume and ancilla volume against the ancilla count, one
    curve per distance."""
    if not rows:
        raise ValueError("metrics plot needs at least one row")
    fig, axes = plt.subplots(1, 3, figsize=(13, 4))
    distances = sorted({r["d"] for r in rows})
    for ax, name in zip(axes, METRIC_NAMES):
        for d in distances:
            series = sorted((r["m"], r[name]) for r in rows if r["d"] == d)
            ax.plot(*zip(*series), marker="o", label=f"d={d}")
        ax.set_xlabel("ancilla count m")
        ax.set_ylabel(name.replace("_", " "))
        ax.grid(True, alpha=0.3)
    axes[0].legend()
    fig.tight_layout()
    out = Path(out_path)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out


def plot_ler(rows: list[dict], out_path: str | Path, x: str = "m") -> Path:
    """LER with 2-sigma error bars on a log scale, one panel per noise
    regime. With x="m" each distance draws its own curve; with x="d" the
    rows form a single fixed-budget curve."""
    if not rows:
        raise ValueError("LER plot needs at least one row")
    if x not in ("m", "d"):
        raise ValueError(f"unsupported x axis {x!r}")
    regimes = split_regimes(rows)
    fig, axes = plt.subplots(
        len(regimes), 1, figsize=(6, 3.2 * len(regimes)), squeeze=False
    )
    for ax, (key, group) in zip(axes[:, 0], sorted(regimes.items(), key=str)):
        if x == "m":
            for d in sorted({r["d"] for r in group}):
                series = sorted(
                    (r for r in group if r["d"] == d), key=lambda r: r["m"]
                )
                ax.errorbar(
                    [r["m"] for r in series],
                    [r["rate"] for r in series],
                    yerr=[2 * r["stderr"] for r in series],
                    marker="o",
                    capsize=3,
                    label=f"d={d}",
                )
            ax.legend()
        else:
            series = sorted(rows, key=lambda r: r["d"])
            ax.errorbar(
                [r["d"] for r in series],
                [r["rate"] for r in series],
                yerr=[2 * r["stderr"] for r in series],
                marker="o",
                capsize=3,
            )
        ax.set_xlabel("ancilla count m" if x == "m" else "code distance d")
        ax.set_ylabel("logical error rate")
        ax.set_yscale("log")
        ax.grid(True, which="both", alpha=0.3)
        ax.set_title(_regime_label(key), fontsize=10)
    fig.tight_layout()
    out = Path(out_path)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out


def _sniff(path: str | Path) -> str:
    header = Path(path).open().readline().strip().split(",")
    if set(METRIC_NAMES) <= set(header):
        return "metrics"
    if {"rate", "stderr"} <= set(header):
        return "ler"
    raise ValueError(f"{path}: unrecognized CSV schema {header}")


def plot_sweep(csv_paths: list[str | Path], out_dir: str | Path, x: str = "auto") -> list[Path]:
    """Render every CSV to a PNG in out_dir, choosing the panel type from
    each file's header. With x="auto", LER tables holding one row per
    distance and regime are drawn against d (fixed-budget shape), anything
    else against m."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for path in csv_paths:
        kind = _sniff(path)
        stem = Path(path).stem
        if kind == "metrics":
            rows = read_metrics_csv(path)
            written.append(plot_metrics(rows, out_dir / f"{stem}_metrics.png"))
            continue
        rows = read_ler_csv(path)
        axis = x
        if axis == "auto":
            per_d = {}
            for row in rows:
                per_d.setdefault(row["d"], set()).add(
                    (row["m"], row.get("p_cnot"), row.get("p_swap"), row.get("p_idle"))
                )
            single_point = all(len(v) == 1 for v in per_d.values())
            axis = "d" if len(per_d) > 1 and single_point else "m"
        written.append(plot_ler(rows, out_dir / f"{stem}_ler.png", x=axis))
    return written
