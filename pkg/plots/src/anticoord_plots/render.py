"""Heatmaps and size-sweep curves from sweep CSV files.

The CSV schema is the contract with the simulation side: rows carry one
greedy run each, and all aggregation (means per grid cell, means with
standard errors per network size) happens here from the raw rows.
"""

from __future__ import annotations

import csv
import math
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


class SchemaError(ValueError):
    """The CSV does not match the sweep schema."""


def _read_rows(csv_path, required: tuple[str, ...]) -> list[dict]:
    with open(csv_path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for column in required:
            if column not in header:
                raise SchemaError(f"missing column {column!r} in {csv_path}")
        rows = list(reader)
    if not rows:
        raise SchemaError(f"no data rows in {csv_path}")
    return rows


def heatmap_means(csv_path, variant: str) -> dict[tuple[int, int], float]:
    """Mean effort per (m0, m1) cell for one variant, straight from the raw rows."""
    rows = _read_rows(csv_path, ("variant", "m0", "m1", "effort"))
    sums: dict[tuple[int, int], list] = defaultdict(lambda: [0.0, 0])
    for row in rows:
        if row["variant"] != variant:
            continue
        if not row["m0"] or not row["m1"]:
            raise SchemaError("heatmap rows need m0/m1 cell indices")
        cell = (int(row["m0"]), int(row["m1"]))
        acc = sums[cell]
        acc[0] += float(row["effort"])
        acc[1] += 1
    if not sums:
        raise SchemaError(f"no rows for variant {variant!r}")
    return {cell: total / count for cell, (total, count) in sums.items()}


def render_heatmap(csv_path, variant: str, out_dir) -> Path:
    """Write one heatmap image of mean control effort over the constant grid."""
    means = heatmap_means(csv_path, variant)
    m0_values = sorted({m0 for m0, _ in means})
    m1_values = sorted({m1 for _, m1 in means})
    grid = [
        [means.get((m0, m1), math.nan) for m0 in m0_values]
        for m1 in m1_values
    ]
    fig, ax = plt.subplots(figsize=(6, 5))
    image = ax.imshow(
        grid,
        origin="lower",
        vmin=0.0,
        vmax=max(max(filter(lambda v: v == v, row), default=0.0) for row in grid) or 1.0,
        cmap="viridis",
        aspect="auto",
    )
    ax.set_xticks(range(len(m0_values)), [str(m) for m in m0_values])
    ax.set_yticks(range(len(m1_values)), [str(m) for m in m1_values])
    ax.set_xlabel("m0 cell (type-0 constant)")
    ax.set_ylabel("m1 cell (type-1 constant)")
    ax.set_title(f"mean control effort, {variant}")
    fig.colorbar(image, ax=ax, label="mean |selected|/n")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    out_path = out_dir / f"heatmap_{variant}.png"
    fig.savefig(out_path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return out_path


def size_sweep_stats(csv_path) -> dict[str, list[tuple[int, float, float]]]:
    """Per variant: sorted (n, mean effort, standard error) triples."""
    rows = _read_rows(csv_path, ("variant", "n", "effort"))
    samples: dict[tuple[str, int], list[float]] = defaultdict(list)
    for row in rows:
        samples[(row["variant"], int(row["n"]))].append(float(row["effort"]))
    series: dict[str, list[tuple[int, float, float]]] = defaultdict(list)
    for (variant, n), values in samples.items():
        mean = sum(values) / len(values)
        if len(values) > 1:
            var = sum((v - mean) ** 2 for v in values) / (len(values) - 1)
            sem = math.sqrt(var / len(values))
        else:
            sem = 0.0
        series[variant].append((n, mean, sem))
    for triples in series.values():
        triples.sort()
    return dict(series)


def render_size_sweep(csv_path, out_dir) -> Path:
    """Write the effort-vs-size figure: one errorbar curve per variant."""
    series = size_sweep_stats(csv_path)
    fig, ax = plt.subplots(figsize=(7, 5))
    for variant in sorted(series):
        triples = series[variant]
        ax.errorbar(
            [n for n, _, _ in triples],
            [mean for _, mean, _ in triples],
            yerr=[sem for _, _, sem in triples],
            marker="o",
            capsize=3,
            label=variant,
        )
    ax.set_xlabel("players")
    ax.set_ylabel("mean control effort")
    ax.legend()
    ax.grid(True, alpha=0.3)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    out_path = out_dir / "size_sweep.png"
    fig.savefig(out_path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return out_path
