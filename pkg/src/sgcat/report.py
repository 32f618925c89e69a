"""Deterministic human and JSON rendering of command reports."""
from __future__ import annotations

import json
from fractions import Fraction

from .exactla import Matrix


def jsonable(x):
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, Matrix):
        return [[jsonable(v) for v in row] for row in x.to_rows()]
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    if isinstance(x, bool) or x is None or isinstance(x, (int, str, float)):
        return x
    if hasattr(x, "to_dict"):
        return jsonable(x.to_dict())
    return str(x)


def _scalar(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, list) and all(not isinstance(t, (dict, list)) for t in v):
        return "[" + ", ".join(_scalar(t) for t in v) + "]"
    return str(v)


def _lines(obj, indent: int):
    pad = "  " * indent
    out = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, dict) or (isinstance(v, list) and any(isinstance(t, (dict, list)) for t in v)):
                out.append(f"{pad}{k}:")
                out.extend(_lines(v, indent + 1))
            else:
                out.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)):
                out.append(f"{pad}-")
                out.extend(_lines(v, indent + 1))
            else:
                out.append(f"{pad}- {_scalar(v)}")
    else:
        out.append(f"{pad}{_scalar(obj)}")
    return out


def render(report: dict, as_json: bool = False) -> str:
    data = jsonable(report)
    if as_json:
        return json.dumps(data, indent=2, sort_keys=True) + "\n"
    return "\n".join(_lines(data, 0)) + "\n"
