"""Choropleth rendering: region polygons shaded by log-scaled user counts.

The color scale is normalized within the selected community (0 .. max log
value), so per-community maps are individually readable; regions without
data stay light gray. The layout dump records, per shaded region, its
value, fill color and a representative pixel inside the polygon, which is
what the shade-rank checks sample.
"""

from __future__ import annotations

import json

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
from matplotlib import colormaps
from matplotlib.colors import Normalize
from matplotlib.cm import ScalarMappable
from matplotlib.patches import Polygon as MplPolygon

from . import FigureInputError
from .tables import load_geo, load_shapes, pick_community

NO_DATA = "0.92"
DPI = 100


def ring_centroid(ring):
    xs = [p[0] for p in ring[:-1]] or [p[0] for p in ring]
    ys = [p[1] for p in ring[:-1]] or [p[1] for p in ring]
    return sum(xs) / len(xs), sum(ys) / len(ys)


def render_choropleth(
    geo_csv, shapes_path, community: int, out_png, dump_layout=None, cmap_name: str = "Blues"
):
    table = load_geo(geo_csv)
    rows = pick_community(table, community, geo_csv)
    shapes = load_shapes(shapes_path)
    values = {}
    for region, count, log_value in rows:
        if region not in shapes:
            raise FigureInputError(
                f"region {region!r} from {geo_csv} has no matching shape feature"
            )
        values[region] = (count, log_value)

    cmap = colormaps[cmap_name]
    vmax = max((log for _, log in values.values()), default=1.0)
    norm = Normalize(vmin=0.0, vmax=vmax if vmax > 0 else 1.0)

    fig, ax = plt.subplots(figsize=(9, 7), dpi=DPI)
    fills = {}
    for region, rings in sorted(shapes.items()):
        if region in values:
            rgba = cmap(norm(values[region][1]))
        else:
            rgba = NO_DATA
        fills[region] = matplotlib.colors.to_hex(rgba, keep_alpha=False)
        for ring in rings:
            ax.add_patch(MplPolygon(ring, closed=True, facecolor=rgba, edgecolor="white"))
    ax.autoscale_view()
    ax.set_aspect("equal")
    ax.axis("off")
    ax.set_title(f"community {community}: users per region (log10 scale)")
    fig.colorbar(
        ScalarMappable(norm=norm, cmap=cmap), ax=ax, shrink=0.7, label="log10(1 + users)"
    )
    fig.savefig(out_png, dpi=DPI, facecolor="white")

    entries = []
    if dump_layout:
        fig.canvas.draw()
        height_px = fig.get_size_inches()[1] * DPI
        for region, rings in sorted(shapes.items()):
            cx, cy = ring_centroid(rings[0])
            disp_x, disp_y = ax.transData.transform((cx, cy))
            entries.append(
                {
                    "region": region,
                    "user_count": values.get(region, (0, None))[0],
                    "log_value": values.get(region, (None, None))[1],
                    "color": fills[region],
                    "px": int(round(disp_x)),
                    "py": int(round(height_px - disp_y)),  # image row (top-down)
                }
            )
        with open(dump_layout, "w", encoding="utf-8") as fh:
            json.dump(entries, fh, ensure_ascii=False, indent=1)
    plt.close(fig)
    return entries
