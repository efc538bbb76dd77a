"""Deterministic float formatting and JSON emission for reports."""
from __future__ import annotations

import json
import math

import numpy as np

SIG = 12


def fmt_float(x: float) -> str:
    """Shortest round-trip repr of x rounded to 12 significant digits."""
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        return repr(x)
    return repr(float(f"{x:.{SIG}g}") + 0.0)


def round_float(x: float) -> float:
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        return x
    return float(f"{x:.{SIG}g}") + 0.0


def fmt_complex(z) -> str:
    """'<re>+<im>i' (or '<re>-<|im|>i')."""
    z = complex(z)
    im = round_float(z.imag)
    sign = "-" if im < 0 else "+"
    return f"{fmt_float(z.real)}{sign}{fmt_float(abs(im))}i"


def clean(obj):
    """Recursively convert numpy/complex values into rounded JSON-ready data."""
    if isinstance(obj, dict):
        return {str(k): clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [round_float(obj.real), round_float(obj.imag)]
    if isinstance(obj, (float, np.floating)):
        v = round_float(obj)
        return None if math.isnan(v) else v
    return obj


def dumps(obj) -> str:
    return json.dumps(clean(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"
