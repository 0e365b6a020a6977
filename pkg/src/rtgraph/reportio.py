"""Deterministic output emission.

Every emitted file carries a provenance header (tool version, seed, input
digests) and uses fixed number formatting and LF line endings, so a rerun
with identical inputs and seed produces byte-identical files.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from . import __version__


def sha256_file(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def provenance_lines(seed: int | None, inputs: Mapping[str, str]) -> list[str]:
    lines = [f"# rtgraph {__version__}"]
    if seed is not None:
        lines.append(f"# seed {seed}")
    for name in sorted(inputs):
        lines.append(f"# input {name} sha256={inputs[name]}")
    return lines


def write_csv(path, comments: Sequence[str], header: Sequence[str], rows: Iterable[Sequence]) -> None:
    buf = io.StringIO()
    for line in comments:
        buf.write(line + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([str(cell) for cell in row])
    Path(path).write_text(buf.getvalue(), encoding="utf-8")


def write_json(path, obj, generator: Mapping | None = None) -> None:
    if generator is not None:
        obj = {"generator": dict(generator), **obj}
    Path(path).write_text(
        json.dumps(obj, ensure_ascii=False, sort_keys=True, indent=1) + "\n",
        encoding="utf-8",
    )


def read_commented_csv(path) -> tuple[list[str], list[list[str]]]:
    """Read a CSV emitted by this tool: comment lines, then header, then rows."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(row for row in fh if not row.startswith("#"))
        header = next(reader, None)
        if header is None:
            raise ValueError(f"{path}: empty csv")
        return header, [row for row in reader]


def fmt3(x: float) -> str:
    return f"{x:.3f}"


def fmt6(x: float) -> str:
    return f"{x:.6f}"
