"""Word-cloud rendering from an n-gram frequency table.

Font size is an affine function of frequency, so more frequent n-grams are
never drawn smaller. Layout is deterministic row packing (largest first);
the seed only drives color assignment.
"""

from __future__ import annotations

import json
import random
from dataclasses import asdict, dataclass

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from . import FigureInputError
from .tables import load_ngrams, pick_community

WIDTH, HEIGHT = 1000, 620
MARGIN = 12
MIN_FONT, MAX_FONT = 16, 64  # pixel heights
MAX_WORDS = 70
# crude per-character width estimate for the default sans font
CHAR_WIDTH = 0.58


@dataclass
class PlacedWord:
    ngram: str
    count: int
    font_px: float
    x: float
    y: float
    color: str


def font_sizes(counts: list[int]) -> list[float]:
    cmin, cmax = min(counts), max(counts)
    if cmax == cmin:
        return [float(MAX_FONT)] * len(counts)
    span = MAX_FONT - MIN_FONT
    return [MIN_FONT + span * (c - cmin) / (cmax - cmin) for c in counts]


def layout(rows: list[tuple[str, int]], seed: int = 0) -> list[PlacedWord]:
    """Pack words into rows, biggest first, wrapping at the canvas edge."""
    rows = sorted(rows, key=lambda r: (-r[1], r[0]))[:MAX_WORDS]
    sizes = font_sizes([count for _, count in rows])
    rng = random.Random(seed)
    palette = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#17becf"]
    placed: list[PlacedWord] = []
    x, y = MARGIN, MARGIN
    row_height = 0.0
    for (ngram, count), size in zip(rows, sizes):
        est_width = CHAR_WIDTH * size * max(len(ngram), 1)
        if x + est_width > WIDTH - MARGIN and x > MARGIN:
            x = MARGIN
            y += row_height * 1.25
            row_height = 0.0
        if y + size > HEIGHT - MARGIN:
            break  # canvas full; remaining (smaller) words are dropped
        placed.append(
            PlacedWord(ngram, count, size, x, y + size / 2, rng.choice(palette))
        )
        x += est_width + size * 0.6
        row_height = max(row_height, size)
    return placed


def render_wordcloud(in_csv, community: int, out_png, dump_layout=None, seed: int = 0):
    table = load_ngrams(in_csv)
    rows = pick_community(table, community, in_csv)
    if not rows:
        raise FigureInputError(f"{in_csv}: community {community} has an empty n-gram table")
    placed = layout(rows, seed=seed)

    dpi = 100
    fig, ax = plt.subplots(figsize=(WIDTH / dpi, HEIGHT / dpi), dpi=dpi)
    ax.set_xlim(0, WIDTH)
    ax.set_ylim(0, HEIGHT)
    ax.invert_yaxis()
    ax.axis("off")
    for word in placed:
        ax.text(
            word.x,
            word.y,
            word.ngram,
            fontsize=word.font_px * 72 / dpi,  # px -> pt
            color=word.color,
            va="center",
            ha="left",
        )
    fig.savefig(out_png, dpi=dpi, facecolor="white")
    plt.close(fig)

    if dump_layout:
        with open(dump_layout, "w", encoding="utf-8") as fh:
            json.dump([asdict(w) for w in placed], fh, ensure_ascii=False, indent=1)
    return placed
