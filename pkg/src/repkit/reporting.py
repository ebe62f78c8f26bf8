"""Machine-readable report serialization.

CSV output carries a header row and locale-independent decimal cells;
None fields serialize as empty cells (CSV) or are dropped (JSON), so a
degenerate statistic is absent rather than 0/0.  Identical report
objects always produce byte-identical output.
"""

from __future__ import annotations

import csv
import dataclasses
import json

import numpy as np

DENSITY_HEADER = ["window_lo", "window_hi", "total", "good", "fraction"]
SCAN_HEADER = ["window_lo", "window_hi", "n", "ratio", "kind", "counter_kind"]


def to_jsonable(obj):
    """Dataclasses to dicts (None fields dropped), numpy to builtins."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        out = {}
        for field in dataclasses.fields(obj):
            value = getattr(obj, field.name)
            if value is None:
                continue
            out[field.name] = to_jsonable(value)
        return out
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, dict):
        return {k: to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dump_json(obj, stream) -> None:
    json.dump(to_jsonable(obj), stream, indent=2)
    stream.write("\n")


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    return str(value)


def write_csv(stream, header, rows) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])


def density_rows(report):
    for w in report.windows:
        yield (w.lo, w.hi, w.total, w.good, w.fraction)


def scan_rows(records):
    for r in records:
        yield (r.window_lo, r.window_hi, r.n, r.ratio, r.kind, r.counter_kind)
