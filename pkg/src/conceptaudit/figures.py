"""Chart renderings of an audit report.

Each figure is the graphical twin of one numeric table in the report;
nothing is computed here beyond layout. Rendering uses the Agg backend
at a fixed size and dpi so the emitted PNG bytes are reproducible.
"""

from __future__ import annotations

import io
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)

from ._util import atomic_write_bytes, format_fraction  # noqa: E402
from .report import AuditReport, _safe_name  # noqa: E402

_POSITIVE = "#2d7dd2"
_BOUNDARY = "#d1495b"
_BAR = "#6a8eae"
_TIER_COLORS = {"high": "#c0392b", "moderate": "#e67e22", "low": "#7f8c8d"}
_DPI = 100


def _save(fig, path: Path) -> None:
    buffer = io.BytesIO()
    fig.savefig(buffer, format="png", dpi=_DPI)
    plt.close(fig)
    atomic_write_bytes(path, buffer.getvalue())


def _regions_figure(report: AuditReport, path: Path) -> None:
    labels = ["all"]
    positives = [len(report.regions.positive_ids)]
    boundaries = [len(report.regions.boundary_ids)]
    for split, summary in report.per_split.items():
        labels.append(split)
        pos = int(summary.gamma * summary.n_records)  # gamma is pos/n, exact
        positives.append(pos)
        boundaries.append(summary.n_records - pos)

    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    x = range(len(labels))
    ax.bar(x, positives, color=_POSITIVE, label="positive region")
    ax.bar(x, boundaries, bottom=positives, color=_BOUNDARY, label="boundary region")
    for i, (pos, bnd) in enumerate(zip(positives, boundaries)):
        ax.annotate(str(pos), (i, pos / 2), ha="center", va="center", color="white")
        if bnd:
            ax.annotate(str(bnd), (i, pos + bnd / 2), ha="center", va="center",
                        color="white")
    ax.set_xticks(list(x), labels)
    ax.set_ylabel("records")
    ax.set_title("Decision regions")
    ax.legend()
    fig.tight_layout()
    _save(fig, path)


def _histogram_figure(report: AuditReport, path: Path) -> None:
    dist = report.distribution
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    centers = [float((b.low + b.high) / 2) for b in dist.histogram]
    width = float(dist.histogram[0].high - dist.histogram[0].low)
    ax.bar(centers, [b.count for b in dist.histogram], width=width * 0.92,
           color=_BAR)
    ax.axvline(0.5, linestyle="--", color=_BOUNDARY,
               label="maximum conflict (0.5)")
    ax.set_xlim(0.0, 0.55)
    ax.set_xlabel("conflict ratio")
    ax.set_ylabel("conflicting profiles")
    title = "Conflict-ratio distribution"
    if dist.n_profiles and dist.mean is not None:
        title += f" (mean {dist.mean:.2f}, n={dist.n_profiles})"
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    _save(fig, path)


def _prevalence_figure(report: AuditReport, path: Path) -> None:
    entries = list(report.prevalence.entries)
    entries.reverse()  # highest rate at the top of the chart
    fig_height = max(3.0, 0.38 * len(entries) + 1.4)
    fig, ax = plt.subplots(figsize=(7.2, fig_height))
    for row, entry in enumerate(entries):
        rate = float(entry.rate)
        low_err = rate - entry.interval.low
        high_err = entry.interval.high - rate
        ax.errorbar(rate, row, xerr=[[low_err], [high_err]], fmt="o",
                    color=_TIER_COLORS[entry.tier], ecolor=_TIER_COLORS[entry.tier],
                    capsize=3)
    overall = float(report.prevalence.overall.rate)
    ax.axvline(overall, linestyle=":", color="black",
               label=f"all records ({format_fraction(report.prevalence.overall.rate, 2)})")
    ax.set_yticks(range(len(entries)),
                  [f"{e.attribute}: {e.value}" for e in entries])
    ax.set_xlabel("label-1 rate among carriers")
    pct = int(round(report.confidence * 100))
    ax.set_title(f"Prevalence by active concept value ({pct}% interval)")
    ax.set_xlim(0.0, 1.0)
    ax.legend(loc="lower right")
    fig.tight_layout()
    _save(fig, path)


def _joint_figures(report: AuditReport, out_dir: Path) -> list[Path]:
    paths = []
    for matrix in report.joints:
        n_rows = len(matrix.row_values)
        n_cols = len(matrix.col_values)
        fig, ax = plt.subplots(
            figsize=(1.7 * n_cols + 2.2, 1.1 * n_rows + 1.8))
        grid = [[float(c.rate) if c.rate is not None else float("nan")
                 for c in row] for row in matrix.cells]
        colormap = plt.get_cmap("viridis").copy()
        colormap.set_bad("#d9d9d9")
        shown = ax.imshow(grid, cmap=colormap, vmin=0.0, vmax=1.0)
        for ri, row in enumerate(matrix.cells):
            for ci, cell in enumerate(row):
                if cell.rate is None:
                    text = f"n={cell.n}"
                    color = "black"
                else:
                    text = f"{format_fraction(cell.rate, 2)}\nn={cell.n}"
                    color = "white" if float(cell.rate) < 0.6 else "black"
                ax.annotate(text, (ci, ri), ha="center", va="center",
                            color=color, fontsize=9)
        ax.set_xticks(range(n_cols), matrix.col_values, rotation=20,
                      ha="right")
        ax.set_yticks(range(n_rows), matrix.row_values)
        ax.set_xlabel(matrix.attribute_b)
        ax.set_ylabel(matrix.attribute_a)
        ax.set_title(f"Label-1 rate: {matrix.attribute_a} x {matrix.attribute_b}")
        fig.colorbar(shown, ax=ax, label="label-1 rate")
        fig.tight_layout()
        name = f"joint_{_safe_name(matrix.attribute_a)}__{_safe_name(matrix.attribute_b)}.png"
        path = out_dir / name
        _save(fig, path)
        paths.append(path)
    return paths


def render_figures(report: AuditReport, out_dir: str | Path) -> list[Path]:
    """Write every figure for `report` into `out_dir`; returns the paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for name, renderer in (("regions.png", _regions_figure),
                           ("conflict_histogram.png", _histogram_figure),
                           ("prevalence.png", _prevalence_figure)):
        path = out_dir / name
        renderer(report, path)
        written.append(path)
    written.extend(_joint_figures(report, out_dir))
    return written
