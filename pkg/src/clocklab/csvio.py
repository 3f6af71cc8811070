"""Deterministic CSV emission for scenario outputs.

Floats are written in scientific notation with 15 significant digits and a
'.' decimal separator; rows come out in the order given, so a fixed config
and seed always reproduce byte-identical files.
"""
from __future__ import annotations

import csv
from pathlib import Path
from typing import Sequence


def format_cell(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return f"{value:.14e}"
    return str(value)


def emit_csv(rows: Sequence[Sequence], header: Sequence[str], path: str | Path) -> int:
    width = len(header)
    for i, row in enumerate(rows):
        if len(row) != width:
            raise ValueError(f"row {i} has {len(row)} cells, header has {width}")
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_cell(cell) for cell in row])
    return len(rows)
