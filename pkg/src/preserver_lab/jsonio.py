"""Byte-stable JSON emission and the scalar codecs shared by CLI and specs.

Reports must be byte-identical across runs with identical inputs, so
floats are always rendered with 17 significant digits and dict key order
follows construction order (never sorted, never locale dependent).
"""

from __future__ import annotations

import json

import numpy as np

__all__ = ["dumps_stable", "complex_to_json", "complex_from_json"]


def _fmt_float(v: float) -> str:
    if v != v or v in (float("inf"), float("-inf")):
        raise ValueError("non-finite float in report")
    return "%.17g" % v


def dumps_stable(obj) -> str:
    """Serialize to JSON with deterministic float formatting and key order."""
    if obj is None:
        return "null"
    if isinstance(obj, bool) or isinstance(obj, np.bool_):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        items = ",".join(f"{json.dumps(str(k))}:{dumps_stable(v)}" for k, v in obj.items())
        return "{" + items + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(dumps_stable(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj)!r}")


def complex_to_json(z) -> dict:
    z = complex(z)
    return {"re": float(z.real), "im": float(z.imag)}


def complex_from_json(d) -> complex:
    if isinstance(d, (int, float)):
        return complex(float(d))
    if not isinstance(d, dict) or "re" not in d or "im" not in d:
        raise ValueError("complex JSON must be a number or an object with re/im")
    return complex(float(d["re"]), float(d["im"]))
