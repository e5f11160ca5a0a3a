"""Figure rendering for scan reports (headless backend)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def render_scan_figure(rows, path: str) -> None:
    """Plot witness value against the scan parameter, one curve per family
    label, plus the optimized violation when the scan recorded it.

    ``rows`` is a sequence of ScanRow-like objects with family, param,
    w_val and optional f_value attributes.  The figure is written to
    ``path``; the format follows the file extension (png, pdf, svg).
    """
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    grouped: dict[str, list] = {}
    for row in rows:
        grouped.setdefault(row.family, []).append(row)
    for family, group in grouped.items():
        xs = [r.param for r in group]
        ax.plot(xs, [r.w_val for r in group], label=f"{family}: w")
        if any(r.f_value is not None for r in group):
            ax.plot(
                xs,
                [r.f_value if r.f_value is not None else float("nan") for r in group],
                linestyle="--",
                label=f"{family}: F",
            )
    ax.axhline(0.0, color="black", linewidth=0.8)
    ax.set_xlabel("scan parameter")
    ax.set_ylabel("witness value w / violation F")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
