"""JSON files for complexes, angles, states and graphs ("format": "icp/1").

Floats are written with 17 significant digits so every double survives a
round trip.  Angles are radians; anything at or above π is rejected.
"""

from __future__ import annotations

import json
import math

from .angles import AngleData, edge_key
from .complex import CellComplex
from .errors import SchemaError
from .solver import ConformalState

FORMAT = "icp/1"


def fmt(x: float) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if not math.isfinite(x):
        return json.dumps("nan" if math.isnan(x) else ("inf" if x > 0 else "-inf"))
    s = format(x, ".17g")
    if "e" not in s and "." not in s and "inf" not in s:
        s += ".0"
    return s


def dumps(obj, indent: int = 1, _level: int = 0) -> str:
    """Deterministic JSON: sorted keys, floats at 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, float):
        return fmt(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return json.dumps(obj)
    if hasattr(obj, "item") and not hasattr(obj, "__len__"):  # numpy scalar
        return dumps(obj.item(), indent, _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = sorted(obj.items(), key=lambda kv: _sort_key(kv[0]))
        body = ",\n".join(f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in items)
        return "{\n" + body + "\n" + end + "}"
    if isinstance(obj, (list, tuple, set, frozenset)):
        seq = sorted(obj) if isinstance(obj, (set, frozenset)) else list(obj)
        if not seq:
            return "[]"
        if all(isinstance(x, (int, float, str)) and not isinstance(x, bool) for x in seq):
            return "[" + ", ".join(dumps(x, indent, _level + 1) for x in seq) + "]"
        body = ",\n".join(pad + dumps(x, indent, _level + 1) for x in seq)
        return "[\n" + body + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _sort_key(k):
    if isinstance(k, str) and "," in k:
        try:
            return (0, tuple(int(x) for x in k.split(",")), "")
        except ValueError:
            pass
    if isinstance(k, int) or (isinstance(k, str) and k.lstrip("-").isdigit()):
        return (0, (int(k),), "")
    return (1, (), str(k))


def edge_str(e) -> str:
    v, w = edge_key(*e)
    return f"{v},{w}"


def parse_edge(s: str):
    try:
        v, w = (int(x) for x in s.split(","))
    except ValueError as exc:
        raise SchemaError(f"bad edge key {s!r}") from exc
    return edge_key(v, w)


def _canon_face(f):
    k = f.index(min(f))
    return list(f[k:]) + list(f[:k])


# -- encode --------------------------------------------------------------------------


def complex_dict(c: CellComplex, a: AngleData | None = None) -> dict:
    d = {
        "format": FORMAT,
        "vertices": sorted(c.vertices),
        "faces": [_canon_face(f) for f in c.faces],
    }
    if a is not None:
        d["theta"] = {edge_str(e): float(a[e]) for e in sorted(c.edges)}
    return d


def state_dict(state: ConformalState, c: CellComplex | None = None, a: AngleData | None = None, report=None) -> dict:
    d = {
        "format": FORMAT,
        "background": state.background,
        "u": {str(v): float(x) for v, x in state.u.items()},
        "kinds": {str(v): k for v, k in state.kinds.items()},
    }
    if c is not None:
        d["complex"] = complex_dict(c, a)
    if report is not None:
        d["report"] = report.as_dict() if hasattr(report, "as_dict") else report
    return d


# -- decode --------------------------------------------------------------------------


def _need(d, key, kind=None):
    if not isinstance(d, dict) or key not in d:
        raise SchemaError(f"missing field {key!r}")
    x = d[key]
    if kind is not None and not isinstance(x, kind):
        raise SchemaError(f"field {key!r} has the wrong type")
    return x


def _check_format(d):
    if not isinstance(d, dict):
        raise SchemaError("top level must be an object")
    f = d.get("format", FORMAT)
    if f != FORMAT:
        raise SchemaError(f"unsupported format {f!r}; expected {FORMAT!r}")


def _number(x, what):
    if isinstance(x, bool) or not isinstance(x, (int, float, str)):
        raise SchemaError(f"{what} is not a number")
    try:
        y = float(x)
    except ValueError as exc:
        raise SchemaError(f"{what} is not a number") from exc
    if math.isnan(y):
        raise SchemaError(f"{what} is NaN")
    return y


def complex_from_dict(d):
    """(CellComplex, AngleData or None) from a decoded complex file."""
    _check_format(d)
    faces = _need(d, "faces", list)
    try:
        faces = [tuple(int(v) for v in f) for f in faces]
    except (TypeError, ValueError) as exc:
        raise SchemaError("faces must be lists of integer vertex ids") from exc
    c = CellComplex(faces)
    if "vertices" in d:
        listed = set(int(v) for v in d["vertices"])
        if listed != set(c.vertices):
            raise SchemaError("vertex list does not match the faces")
    if "theta" not in d:
        return c, None
    raw = _need(d, "theta", dict)
    theta = {}
    for k, x in raw.items():
        e = parse_edge(k)
        y = _number(x, f"theta {k}")
        if not 0 < y < math.pi:
            raise SchemaError(f"theta {k} = {x} is outside (0, pi); angles are radians")
        theta[e] = y
    for e in sorted(c.edges):
        if e not in theta:
            raise SchemaError(f"missing theta for edge {edge_str(e)}")
    extra = set(theta) - set(c.edges)
    if extra:
        raise SchemaError(f"theta given for non-edge {edge_str(min(extra))}")
    return c, AngleData(theta)


def state_from_dict(d):
    """(ConformalState, CellComplex or None, AngleData or None)."""
    _check_format(d)
    bg = _need(d, "background", str)
    raw = _need(d, "u", dict)
    u = {}
    for k, x in raw.items():
        try:
            v = int(k)
        except ValueError as exc:
            raise SchemaError(f"bad vertex id {k!r}") from exc
        u[v] = _number(x, f"u[{k}]")
        if math.isinf(u[v]):
            raise SchemaError(f"u[{k}] is infinite")
    kinds = {int(k): str(x) for k, x in d.get("kinds", {}).items()}
    c = a = None
    if "complex" in d:
        c, a = complex_from_dict(d["complex"])
        missing = set(c.vertices) - set(u)
        if missing:
            raise SchemaError(f"no factor for vertex {min(missing)}")
    return ConformalState(bg, u, kinds), c, a


def radii_from_dict(d) -> dict:
    """Boundary radii: {"r": {"v": x}} or a bare mapping."""
    raw = d.get("r", d) if isinstance(d, dict) else None
    if not isinstance(raw, dict):
        raise SchemaError("radius file must map vertex ids to radii")
    out = {}
    for k, x in raw.items():
        if k == "format":
            continue
        y = _number(x, f"radius {k}")
        if not y > 0 or math.isinf(y):
            raise SchemaError(f"radius {k} must be positive and finite")
        out[int(k)] = y
    return out


def graph_from_dict(d) -> dict:
    """Neighbour mapping from {"edges": [[v, w], ...]} or a complex file."""
    _check_format(d)
    if "faces" in d:
        c, _ = complex_from_dict(d)
        return {v: list(c.neighbors[v]) for v in c.vertices}
    edges = _need(d, "edges", list)
    adj = {int(v): set() for v in d.get("vertices", [])}
    for e in edges:
        try:
            v, w = (int(x) for x in e)
        except (TypeError, ValueError) as exc:
            raise SchemaError(f"bad edge {e!r}") from exc
        if v == w:
            raise SchemaError(f"loop at vertex {v}")
        adj.setdefault(v, set()).add(w)
        adj.setdefault(w, set()).add(v)
    return {v: sorted(nb) for v, nb in adj.items()}


def read_json(path):
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: not valid JSON ({exc.msg} at line {exc.lineno})") from exc


def write_text(path, text: str):
    with open(path, "w") as fh:
        fh.write(text)
