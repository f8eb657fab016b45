"""JSON and CSV emission with 17-significant-digit floats."""
from __future__ import annotations

import json
import math
from fractions import Fraction

SCHEMA_VERSION = 1


def fmt_float(value: float) -> str:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"cannot emit non-finite number {value}")
    text = format(value, ".17g")
    if "e" not in text and "." not in text:
        text += ".0"
    return text


def _emit(obj, indent: int, level: int) -> str:
    pad = "\n" + " " * (indent * (level + 1)) if indent else ""
    end = "\n" + " " * (indent * level) if indent else ""
    sep = "," + pad if indent else ", "
    if obj is None or isinstance(obj, bool) or isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, (float, Fraction)):
        return fmt_float(obj)
    if hasattr(obj, "item") and not isinstance(obj, (list, tuple, dict)):
        return _emit(obj.item(), indent, level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{json.dumps(str(k))}: {_emit(v, indent, level + 1)}" for k, v in obj.items()]
        return "{" + pad + sep.join(items) + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        return "[" + pad + sep.join(_emit(v, indent, level + 1) for v in obj) + end + "]"
    raise TypeError(f"cannot emit {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """Serialize ``obj``; floats and Fractions are written with ``%.17g``."""
    return _emit(obj, indent, 0) + "\n"


def csv_text(header, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(str(v) if isinstance(v, int) and not isinstance(v, bool) else fmt_float(v) for v in row))
    return "\n".join(lines) + "\n"
