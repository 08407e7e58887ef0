"""JSON reports: rationals as {num, den}, floats with 17 significant digits."""

from __future__ import annotations

import dataclasses
import enum
import json
import math
from fractions import Fraction

import numpy as np

from .graph import VertexSet

SCHEMA = "xpk-report/1"


def to_jsonable(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, Fraction):
        return {"num": obj.numerator, "den": obj.denominator}
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, VertexSet):
        return list(obj.members)
    if isinstance(obj, np.ndarray):
        return [to_jsonable(x) for x in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        return [to_jsonable(x) for x in obj]
    if dataclasses.is_dataclass(obj):
        out = {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
        kind = getattr(type(obj), "kind", None)
        if isinstance(kind, str):
            out = {"kind": kind, **out}
        return out
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        return json.dumps(str(x))
    return format(x, ".17g")


def dumps(obj, indent: int = 2) -> str:
    """Serialise an already jsonable object, writing floats at 17 digits."""
    def enc(o, level):
        pad = " " * (indent * (level + 1))
        end = " " * (indent * level)
        if isinstance(o, float):
            return _float(o)
        if isinstance(o, dict):
            if not o:
                return "{}"
            items = [f"{pad}{json.dumps(k)}: {enc(v, level + 1)}" for k, v in o.items()]
            return "{\n" + ",\n".join(items) + "\n" + end + "}"
        if isinstance(o, list):
            if not o:
                return "[]"
            if all(not isinstance(x, (dict, list)) for x in o):
                return "[" + ", ".join(enc(x, level + 1) for x in o) + "]"
            return "[\n" + ",\n".join(pad + enc(x, level + 1) for x in o) + "\n" + end + "]"
        return json.dumps(o)
    return enc(to_jsonable(obj), 0)


def rational(d) -> Fraction:
    """Inverse of the rational encoding."""
    return Fraction(d["num"], d["den"])
