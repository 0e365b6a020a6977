"""Correlation heatmap: one row per feature, diverging colors centered at 0."""

from __future__ import annotations

import json

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np
from matplotlib import colormaps

from . import FigureInputError
from .tables import load_correlation

EXPECTED_ROWS = 17
CMAP = "RdBu_r"
DPI = 100


def render_heatmap(in_csv, out_png, dump_layout=None):
    rows = load_correlation(in_csv)
    if len(rows) != EXPECTED_ROWS:
        raise FigureInputError(
            f"{in_csv}: expected {EXPECTED_ROWS} feature rows, got {len(rows)}"
        )
    names = [name for name, _ in rows]
    values = np.array([[r] for _, r in rows])

    fig, ax = plt.subplots(figsize=(4.2, 7.2), dpi=DPI)
    image = ax.imshow(values, cmap=CMAP, vmin=-1.0, vmax=1.0, aspect="auto")
    ax.set_yticks(range(EXPECTED_ROWS), names, fontsize=8)
    ax.set_xticks([0], ["label"])
    ax.set_title("feature–label correlation")
    fig.colorbar(image, ax=ax, shrink=0.8)
    fig.tight_layout()
    fig.savefig(out_png, dpi=DPI, facecolor="white")

    entries = []
    if dump_layout:
        fig.canvas.draw()
        cmap = colormaps[CMAP]
        height_px = fig.get_size_inches()[1] * DPI
        for i, (name, r) in enumerate(rows):
            # center of the cell in image pixels (row index i, column 0)
            disp_x, disp_y = ax.transData.transform((0, i))
            entries.append(
                {
                    "feature": name,
                    "r": r,
                    "color": matplotlib.colors.to_hex(cmap((r + 1.0) / 2.0)),
                    "px": int(round(disp_x)),
                    "py": int(round(height_px - disp_y)),
                }
            )
        with open(dump_layout, "w", encoding="utf-8") as fh:
            json.dump(entries, fh, ensure_ascii=False, indent=1)
    plt.close(fig)
    return entries
