"""Deterministic file emission: fixed-format CSV and JSON.

Every float is rendered with 17 significant digits in scientific notation
so reruns produce byte-identical files and diffs of numeric output are
meaningful.  JSON objects are written with sorted keys and complex numbers
as two-element [re, im] arrays.
"""

from __future__ import annotations

import json
import numbers
from pathlib import Path

import numpy as np


def format_float(x: float) -> str:
    """17-significant-digit scientific form, enough for exact round-trip."""
    if np.isnan(x):
        return "nan"
    if np.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.16e}"


def _render(obj, indent: int) -> str:
    pad = "  " * indent
    pad_in = "  " * (indent + 1)
    if obj is None:
        return "null"
    if isinstance(obj, bool) or isinstance(obj, np.bool_):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return f"[{format_float(obj.real)}, {format_float(obj.imag)}]"
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if np.isnan(value) or np.isinf(value):
            return "null"
        return format_float(value)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        return _render(obj.tolist(), indent)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f'{pad_in}{json.dumps(str(k))}: {_render(v, indent + 1)}'
            for k, v in sorted(obj.items(), key=lambda kv: str(kv[0]))
        ]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        rendered = [_render(v, indent + 1) for v in obj]
        if all(len(r) <= 24 and "\n" not in r for r in rendered):
            return "[" + ", ".join(rendered) + "]"
        return "[\n" + ",\n".join(pad_in + r for r in rendered) + "\n" + pad + "]"
    if isinstance(obj, numbers.Number):
        return format_float(float(obj))
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def json_dumps(obj) -> str:
    return _render(obj, 0) + "\n"


def write_json(path, obj) -> Path:
    path = Path(path)
    path.write_text(json_dumps(obj))
    return path


def _format_cell(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, bool) or isinstance(value, np.bool_):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format_float(float(value))


def write_csv(path, header, rows) -> Path:
    """Comma-separated, LF line endings, header row first."""
    path = Path(path)
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_format_cell(v) for v in row))
    path.write_text("\n".join(lines) + "\n")
    return path


def complex_matrix_payload(m: np.ndarray) -> list:
    """Nested [re, im] pairs for JSON emission of a complex matrix."""
    return [[complex(v) for v in row] for row in np.asarray(m)]
