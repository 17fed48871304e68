"""Append-only CSV results tables for longitudinal regression checks."""

from __future__ import annotations

import csv
import os
from typing import Mapping

TABLE_VERSION = 1

RIESZ_COLUMNS = [
    "version", "n", "q", "a", "b", "epsilon",
    "norm_psi_1", "norm_psi_not_1", "inner_sd", "certificate", "exact_star",
]

GRAPH_COLUMNS = RIESZ_COLUMNS + ["graph_id", "class", "t", "measured", "bound", "ratio"]


def append_row(path: str, columns: list[str], row: Mapping) -> None:
    """Append one row, creating the file with a header when absent.

    Unknown keys are ignored; missing keys are left blank (the spec's
    over-budget convention).
    """
    exists = os.path.exists(path) and os.path.getsize(path) > 0
    with open(path, "a", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=columns, extrasaction="ignore")
        if not exists:
            writer.writeheader()
        payload = {"version": TABLE_VERSION}
        payload.update({k: row[k] for k in row if k in columns})
        writer.writerow(payload)
