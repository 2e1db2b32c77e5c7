"""Deterministic JSON/CSV emission.

JSON: sorted keys, two-space indent, LF line endings, floats via the
shortest round-trip repr (Python's default).  CSV: fixed column order,
LF endings, repr floats.  No timestamps anywhere, so identical inputs
produce byte-identical files.
"""

from __future__ import annotations

import json
import math
from typing import IO, Iterable


def _sanitize(obj):
    if isinstance(obj, float):
        if math.isnan(obj):
            return "nan"
        if obj == math.inf:
            return "inf"
        if obj == -math.inf:
            return "-inf"
        return obj
    if isinstance(obj, dict):
        return {str(k): _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    if hasattr(obj, "to_dict"):
        return _sanitize(obj.to_dict())
    if hasattr(obj, "tolist"):
        return _sanitize(obj.tolist())
    if hasattr(obj, "item") and not isinstance(obj, (str, bytes)):
        return _sanitize(obj.item())
    return obj


def dump_json(obj, fp: IO[str]) -> None:
    json.dump(_sanitize(obj), fp, sort_keys=True, indent=2)
    fp.write("\n")


def json_text(obj) -> str:
    return json.dumps(_sanitize(obj), sort_keys=True, indent=2) + "\n"


CONTRADICTION_COLUMNS = (
    "j",
    "n_j",
    "lhs_partial",
    "rhs_partial",
    "rhs_tail_bound",
    "minmod_sup",
    "schwarz_rhs",
    "margin",
)


def _cell(v) -> str:
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        return repr(v)
    return str(v)


def write_csv(fp: IO[str], columns: Iterable[str], rows: Iterable) -> None:
    cols = list(columns)
    fp.write(",".join(cols) + "\n")
    for row in rows:
        if hasattr(row, "__dataclass_fields__"):
            vals = [getattr(row, c) for c in cols]
        elif isinstance(row, dict):
            vals = [row[c] for c in cols]
        else:
            vals = list(row)
        fp.write(",".join(_cell(v) for v in vals) + "\n")
