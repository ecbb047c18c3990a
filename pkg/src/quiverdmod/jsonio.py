"""JSON encodings of rationals, matrices, arrangements, weights, reps and reports."""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .arrangement import Arrangement, Hyperplane, Key, StratGraph, key_str, parse_key
from .exactlin import Matrix, format_rat, rat
from .quiver import Rep
from .weights import Weights
from .weyl import WeylPoly


class InputError(ValueError):
    """Malformed or inconsistent input data."""


def rat_to_json(q: Fraction) -> str:
    return format_rat(q)


def rat_from_json(v: Any) -> Fraction:
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise InputError(f"expected a rational as string or integer, got {v!r}")
    try:
        return rat(v)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad rational {v!r}") from exc


def matrix_to_json(m) -> Any:
    if isinstance(m, Matrix):
        return [[format_rat(x) for x in row] for row in m.tolist()]
    if isinstance(m, WeylPoly):
        return m.to_str()
    if isinstance(m, Fraction):
        return format_rat(m)
    if isinstance(m, dict):
        return {_label(k): matrix_to_json(v) for k, v in sorted(m.items(), key=lambda kv: repr(kv[0]))}
    if isinstance(m, (list, tuple)):
        return [matrix_to_json(x) for x in m]
    return m


def _label(k) -> str:
    if isinstance(k, tuple) and k and all(isinstance(i, int) for i in k):
        return key_str(k)
    if isinstance(k, tuple):
        return "(" + ", ".join(_label(x) for x in k) + ")"
    if k == ():
        return "[]"
    return str(k)


def to_plain(obj) -> Any:
    """Recursively convert Fractions, keys, matrices and Weyl elements to JSON values."""
    if isinstance(obj, (Matrix, WeylPoly, Fraction)):
        return matrix_to_json(obj)
    if isinstance(obj, dict):
        return {(k if isinstance(k, str) else _label(k)): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(x) for x in obj]
    return obj


def matrix_from_json(data: Any, rows: int, cols: int) -> Matrix:
    if not isinstance(data, list) or len(data) != rows:
        raise InputError(f"matrix must have {rows} rows")
    grid = []
    for r in data:
        if not isinstance(r, list) or len(r) != cols:
            raise InputError(f"matrix rows must have {cols} entries")
        grid.append([rat_from_json(x) for x in r])
    return Matrix(rows, cols, grid) if rows else Matrix.zeros(0, cols)


def arrangement_to_json(arr: Arrangement) -> dict:
    return {"dim": arr.dim,
            "hyperplanes": [{"normal": [format_rat(a) for a in h.normal], "offset": format_rat(h.offset)}
                            for h in arr.hyperplanes]}


def arrangement_from_json(data: Any) -> Arrangement:
    try:
        n = data["dim"]
        hs = data["hyperplanes"]
        if not isinstance(n, int) or isinstance(n, bool) or n < 0 or not isinstance(hs, list):
            raise InputError("arrangement needs an integer dim and a list of hyperplanes")
        planes = []
        for h in hs:
            normal = [rat_from_json(a) for a in h["normal"]]
            if len(normal) != n:
                raise InputError(f"normal {h['normal']} does not have {n} entries")
            planes.append(Hyperplane(tuple(normal), rat_from_json(h.get("offset", 0))))
        return Arrangement(n, planes)
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed arrangement: {exc}") from exc
    except InputError:
        raise
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def weights_to_json(w: Weights) -> dict:
    return {"weights": [format_rat(v) for v in w.values]}


def weights_from_json(data: Any, arr: Arrangement | None = None) -> Weights:
    try:
        w = Weights([rat_from_json(v) for v in data["weights"]])
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed weights: {exc}") from exc
    if arr is not None and len(w) != len(arr):
        raise InputError(f"{len(w)} weights for {len(arr)} hyperplanes")
    return w


def key_from_json(v: Any, graph: StratGraph | None = None) -> Key:
    if isinstance(v, str):
        try:
            k = parse_key(v)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    elif isinstance(v, list) and all(isinstance(i, int) and not isinstance(i, bool) for i in v):
        k = tuple(sorted(v))
    else:
        raise InputError(f"bad flat key {v!r}")
    if graph is not None and k not in graph:
        raise InputError(f"unknown flat key {key_str(k)}")
    return k


def rep_to_json(rep: Rep) -> dict:
    g = rep.graph
    maps = []
    for a, b in g.ordered_pairs:
        maps.append({"from": list(b), "to": list(a), "matrix": matrix_to_json(rep.A(a, b))})
    return {"dims": {key_str(v): rep.dims[v] for v in g.vertices}, "maps": maps}


def rep_from_json(data: Any, graph: StratGraph) -> Rep:
    try:
        dims = {key_from_json(k, graph): int(d) for k, d in data.get("dims", {}).items()}
        if any(d < 0 for d in dims.values()):
            raise InputError("negative dimension")
        full = {v: dims.get(v, 0) for v in graph.vertices}
        maps = {}
        for entry in data.get("maps", []):
            a = key_from_json(entry["to"], graph)
            b = key_from_json(entry["from"], graph)
            if not graph.adjacent(a, b):
                raise InputError(f"no arrow between {key_str(a)} and {key_str(b)}")
            maps[(a, b)] = matrix_from_json(entry["matrix"], full[a], full[b])
        return Rep(graph, full, maps)
    except (KeyError, TypeError, AttributeError) as exc:
        raise InputError(f"malformed rep: {exc}") from exc


def flag_bases_to_json(bases: dict) -> dict:
    return {"flag_bases": {key_str(v): [[key_str(x) for x in flag] for flag in flags]
                           for v, flags in bases.items()}}


def dumps(obj) -> str:
    """Deterministic serialization."""
    return json.dumps(to_plain(obj), indent=2, sort_keys=False)


def load_file(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc
