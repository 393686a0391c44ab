"""JSON input/output for polytopes, affine maps, sphere functions, and reports.

Rationals are written as strings ("p/q"); floats in input are converted
exactly through their binary expansion.
"""

from __future__ import annotations

import dataclasses
import json
import os
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np

from . import linalg as la
from .polytope import AffineMap, GeometryError, VPolytope


class InputError(ValueError):
    """Malformed or inconsistent input file."""


def _read(source) -> Any:
    if isinstance(source, (dict, list)):
        return source
    try:
        return json.loads(Path(source).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {source}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def _scalar(x) -> Fraction:
    try:
        return la.to_fraction(x)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"not a rational number: {x!r}") from exc


def polytope_from_json(data) -> VPolytope:
    data = _read(data)
    if not isinstance(data, dict) or "vertices" not in data:
        raise InputError('polytope JSON needs a "vertices" list')
    verts = data["vertices"]
    if not isinstance(verts, list) or not verts:
        raise InputError('"vertices" must be a nonempty list')
    pts = [tuple(_scalar(c) for c in v) for v in verts]
    dim = data.get("dim", len(pts[0]))
    if not isinstance(dim, int) or any(len(p) != dim for p in pts):
        raise InputError(f"vertex lengths do not match dim {dim}")
    return VPolytope(pts, dim=dim)


def polytope_to_json(P: VPolytope) -> dict:
    return {"dim": P.dim, "vertices": [[str(c) for c in v] for v in P.vertices]}


def load_body(arg: str) -> VPolytope:
    """A polytope from a JSON path, or from a body spec such as ``cube:3`` or ``box:2,1,1``."""
    if os.path.exists(arg):
        return polytope_from_json(arg)
    if ":" in arg or arg.split(":")[0] in ("cube", "cross_polytope", "octahedron", "corner_simplex",
                                          "regular_simplex", "ball", "half_ball", "box",
                                          "cylinder", "segment"):
        from .bodies import parse_body_spec

        try:
            return parse_body_spec(arg)
        except (GeometryError, ValueError) as exc:
            raise InputError(f"bad body spec {arg!r}: {exc}") from exc
    raise InputError(f"no such file: {arg}")


def affine_map_from_json(data) -> AffineMap:
    data = _read(data)
    if not isinstance(data, dict) or "matrix" not in data:
        raise InputError('affine map JSON needs a "matrix"')
    m = [[_scalar(c) for c in row] for row in data["matrix"]]
    tr = data.get("translation")
    return AffineMap(m, None if tr is None else [_scalar(c) for c in tr])


def affine_map_to_json(T: AffineMap) -> dict:
    return {"matrix": [[str(c) for c in row] for row in T.matrix],
            "translation": [str(c) for c in T.translation]}


def sphere_function_from_json(data):
    from .wulff import SphereFunction

    data = _read(data)
    if not isinstance(data, dict) or "entries" not in data:
        raise InputError('sphere function JSON needs "entries"')
    try:
        return SphereFunction.from_pairs((e["normal"], _scalar(e["value"])) for e in data["entries"])
    except (KeyError, TypeError) as exc:
        raise InputError('each entry needs "normal" and "value"') from exc
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def sphere_function_to_json(f) -> dict:
    return {"entries": [{"normal": list(k), "value": str(v)} for k, v in sorted(f.entries.items())]}


def to_jsonable(obj):
    """Recursively convert results to JSON types: Fractions become strings."""
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, int)):
        return obj
    if isinstance(obj, float):
        return obj
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, VPolytope):
        return polytope_to_json(obj)
    if isinstance(obj, AffineMap):
        return affine_map_to_json(obj)
    if dataclasses.is_dataclass(obj):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [to_jsonable(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2)
