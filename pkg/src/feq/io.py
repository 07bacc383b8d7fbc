"""JSON formats for groups, functions and reports.

Groups:    {"order": n, "cayley": [[...]], "names": [...]}
Functions: {"group": <preset string or group object>, "values": [[re, im], ...]}

Complex numbers are written as ``[re, im]`` pairs of Python floats, whose
repr is the shortest string that round-trips exactly.
"""

from __future__ import annotations

import dataclasses
import json
from pathlib import Path

import numpy as np

from .errors import InvalidFunction, InvalidTable
from .group import FiniteGroup, group_from_cayley, parse_group_ref


def _real(x) -> float:
    return float(x) + 0.0  # folds -0.0


def complex_pair(z) -> list[float]:
    z = complex(z)
    return [_real(z.real), _real(z.imag)]


def to_jsonable(obj):
    """Recursively convert arrays, complex numbers and dataclasses to plain JSON."""
    if isinstance(obj, FiniteGroup):
        return group_to_dict(obj)
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return [to_jsonable(v) for v in obj]
        if obj.dtype == bool:
            return obj.tolist()
        if np.issubdtype(obj.dtype, np.integer):
            return obj.tolist()
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        return complex_pair(obj)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return _real(x) if np.isfinite(x) else None
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return obj


def dumps(obj, indent: int | None = 2) -> str:
    return json.dumps(to_jsonable(obj), indent=indent)


# ---------------------------------------------------------------------------
# groups


def group_to_dict(G: FiniteGroup) -> dict:
    return {"order": G.order, "cayley": G.cayley.tolist(), "names": list(G.names)}


def group_from_dict(d: dict) -> FiniteGroup:
    try:
        table = d["cayley"]
    except (KeyError, TypeError):
        raise InvalidTable("group object needs a 'cayley' table") from None
    G = group_from_cayley(table, d.get("names"))
    if "order" in d and int(d["order"]) != G.order:
        raise InvalidTable(f"declared order {d['order']} != table size {G.order}")
    return G


def load_group(ref) -> FiniteGroup:
    """A preset string, a path to a group JSON file, or an already-parsed dict."""
    if isinstance(ref, FiniteGroup):
        return ref
    if isinstance(ref, dict):
        return group_from_dict(ref)
    p = Path(ref)
    if p.suffix == ".json" or p.is_file():
        return group_from_dict(json.loads(p.read_text()))
    return parse_group_ref(str(ref))


# ---------------------------------------------------------------------------
# functions


def function_to_dict(values, group=None, character: bool = False) -> dict:
    d = {}
    if group is not None:
        d["group"] = group if isinstance(group, str) else group_to_dict(group)
    d["values"] = [complex_pair(v) for v in np.asarray(values, dtype=np.complex128)]
    if character:
        d["character"] = True
    return d


def _parse_value(v) -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise InvalidFunction(f"complex value must be [re, im], got {v!r}")
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, str):
        return complex(v.replace(" ", ""))
    return complex(v)


def function_from_dict(d, G: FiniteGroup | None = None) -> np.ndarray:
    values = d["values"] if isinstance(d, dict) else d
    try:
        f = np.array([_parse_value(v) for v in values], dtype=np.complex128)
    except (TypeError, ValueError) as exc:
        raise InvalidFunction(f"cannot parse function values: {exc}") from None
    if G is not None and f.shape != (G.order,):
        raise InvalidFunction(f"expected {G.order} values, got {f.size}")
    return f


def load_function(path, G: FiniteGroup | None = None) -> np.ndarray:
    return function_from_dict(json.loads(Path(path).read_text()), G)


def save_json(path, obj) -> None:
    Path(path).write_text(dumps(obj) + "\n")
