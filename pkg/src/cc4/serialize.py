"""JSON and CSV output with fixed 17-significant-digit numbers.

Every double survives a text round trip and identical inputs give
byte-identical documents.
"""
from __future__ import annotations

import csv
import io
import json
import math

import numpy as np


def format_float(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialise non-finite number {x!r}")
    text = format(x, ".17g")
    if not any(ch in text for ch in ".en"):
        text += ".0"
    return text


def _emit(obj, indent, level, out):
    pad = " " * (indent * (level + 1))
    end_pad = " " * (indent * level)
    if obj is None:
        out.append("null")
    elif isinstance(obj, (bool, np.bool_)):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(format_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for k, (key, val) in enumerate(obj.items()):
            out.append(pad + json.dumps(str(key), ensure_ascii=False) + ": ")
            _emit(val, indent, level + 1, out)
            out.append(",\n" if k < len(obj) - 1 else "\n")
        out.append(end_pad + "}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        items = list(obj)
        if not items:
            out.append("[]")
        elif all(not isinstance(i, (dict, list, tuple, np.ndarray)) for i in items):
            out.append("[")
            for k, val in enumerate(items):
                _emit(val, indent, level + 1, out)
                if k < len(items) - 1:
                    out.append(", ")
            out.append("]")
        else:
            out.append("[\n")
            for k, val in enumerate(items):
                out.append(pad)
                _emit(val, indent, level + 1, out)
                out.append(",\n" if k < len(items) - 1 else "\n")
            out.append(end_pad + "]")
    else:
        raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    out: list = []
    _emit(obj, indent, 0, out)
    return "".join(out) + "\n"


def loads(text: str):
    return json.loads(text)


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(
            [format_float(v) if isinstance(v, (float, np.floating)) else v for v in row]
        )
    return buf.getvalue()
