"""Readers for the pipeline's file interfaces.

These parse the documented CSV/GeoJSON schemas directly (leading '#'
comment lines are provenance headers and are skipped); the rendering
package never imports the pipeline itself.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

from . import FigureDataError, FigureInputError


def _rows(path, expected_header):
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(line for line in fh if not line.startswith("#"))
        header = next(reader, None)
        if header != expected_header:
            raise FigureInputError(
                f"{path}: expected columns {','.join(expected_header)}, got {header}"
            )
        return list(reader)


def load_ngrams(path) -> dict[int, list[tuple[str, int]]]:
    table: dict[int, list[tuple[str, int]]] = {}
    for community, ngram, count in _rows(path, ["community", "ngram", "count"]):
        table.setdefault(int(community), []).append((ngram, int(count)))
    return table


def load_geo(path) -> dict[int, list[tuple[str, int, float]]]:
    table: dict[int, list[tuple[str, int, float]]] = {}
    rows = _rows(path, ["community", "region", "user_count", "log_value"])
    for community, region, count, log_value in rows:
        table.setdefault(int(community), []).append((region, int(count), float(log_value)))
    return table


def load_correlation(path) -> list[tuple[str, float]]:
    rows = _rows(path, ["feature", "r"])
    out = []
    for feature, r_text in rows:
        r = float(r_text)
        if not -1.0 <= r <= 1.0:
            raise FigureDataError(f"{path}: correlation for {feature} outside [-1, 1]: {r}")
        out.append((feature, r))
    return out


def load_shapes(path) -> dict[str, list[list[tuple[float, float]]]]:
    """Region name -> list of outer rings (handles Polygon and MultiPolygon)."""
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("type") != "FeatureCollection":
        raise FigureInputError(f"{path}: not a GeoJSON FeatureCollection")
    shapes: dict[str, list[list[tuple[float, float]]]] = {}
    for feature in doc.get("features", []):
        name = feature.get("properties", {}).get("name")
        geometry = feature.get("geometry") or {}
        if not name:
            continue
        if geometry.get("type") == "Polygon":
            polys = [geometry["coordinates"]]
        elif geometry.get("type") == "MultiPolygon":
            polys = geometry["coordinates"]
        else:
            continue
        rings = [[(float(x), float(y)) for x, y in poly[0]] for poly in polys]
        shapes[name] = rings
    return shapes


def pick_community(table: dict[int, list], community: int, path) -> list:
    if community not in table:
        available = ", ".join(str(c) for c in sorted(table))
        raise FigureInputError(
            f"{path}: community {community} not present (available: {available or 'none'})"
        )
    return table[community]
