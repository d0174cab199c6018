"""Reading and writing the JSON documents used by the command line.

All rationals are written as ``"p"`` or ``"p/q"`` strings; nothing is ever a
float.  Unknown keys are rejected.
"""
from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .clfunc import CLFunction
from .cover import Edge, MalformedInput, Marking, TropCover, Vertex
from .halfint import HalfInt, fraction_str

TOP_KEYS = {"genus", "mu", "vertices", "edges", "datum", "differential"}
VERTEX_KEYS = {"id", "branch_count", "markings"}
MARKING_KEYS = {"id", "zero_order"}
EDGE_KEYS = {"id", "ends", "ramified", "length"}
FUNCTION_KEYS = {"values", "edge_slopes", "leg_slopes", "branch_leg_slope"}


def _check_keys(obj, allowed, where, required=()):
    if not isinstance(obj, dict):
        raise MalformedInput(f"{where}: expected an object")
    extra = sorted(set(obj) - allowed)
    if extra:
        raise MalformedInput(f"{where}: unknown field(s) {', '.join(extra)}")
    missing = [k for k in required if k not in obj]
    if missing:
        raise MalformedInput(f"{where}: missing field(s) {', '.join(missing)}")


def _int(x, where) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise MalformedInput(f"{where}: expected an integer, got {x!r}")
    return x


def _rational(x, where) -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        raise MalformedInput(f"{where}: expected an exact rational, got {x!r}")
    try:
        return Fraction(x)
    except (TypeError, ValueError, ZeroDivisionError):
        raise MalformedInput(f"{where}: cannot read {x!r} as a rational") from None


def _half(x, where) -> HalfInt:
    value = _rational(x, where)
    try:
        return HalfInt.of(value)
    except ValueError:
        raise MalformedInput(f"{where}: {x!r} is not a half-integer") from None


def cover_from_dict(doc: dict) -> TropCover:
    _check_keys(doc, TOP_KEYS, "document", ("genus", "mu", "vertices", "edges"))
    genus = _int(doc["genus"], "genus")
    if not isinstance(doc["mu"], list):
        raise MalformedInput("mu: expected a list")
    mu = tuple(_int(x, f"mu[{i}]") for i, x in enumerate(doc["mu"]))
    if not isinstance(doc["vertices"], list) or not isinstance(doc["edges"], list):
        raise MalformedInput("vertices and edges must be lists")
    vertices = []
    for i, v in enumerate(doc["vertices"]):
        where = f"vertices[{i}]"
        _check_keys(v, VERTEX_KEYS, where, ("id",))
        if not isinstance(v["id"], str):
            raise MalformedInput(f"{where}.id: expected a string")
        marks = []
        for j, m in enumerate(v.get("markings", [])):
            mw = f"{where}.markings[{j}]"
            _check_keys(m, MARKING_KEYS, mw, ("id",))
            if not isinstance(m["id"], str):
                raise MalformedInput(f"{mw}.id: expected a string")
            marks.append(Marking(m["id"], _int(m.get("zero_order", 0), f"{mw}.zero_order")))
        vertices.append(Vertex(v["id"], _int(v.get("branch_count", 0), f"{where}.branch_count"),
                               tuple(marks)))
    edges = []
    for i, e in enumerate(doc["edges"]):
        where = f"edges[{i}]"
        _check_keys(e, EDGE_KEYS, where, ("id", "ends"))
        ends = e["ends"]
        if (not isinstance(ends, list) or len(ends) != 2
                or not all(isinstance(x, str) for x in ends)):
            raise MalformedInput(f"{where}.ends: expected two vertex ids")
        ram = e.get("ramified", False)
        if not isinstance(ram, bool):
            raise MalformedInput(f"{where}.ramified: expected true or false")
        length = _rational(e.get("length", 1), f"{where}.length")
        edges.append(Edge(e["id"], (ends[0], ends[1]), ram, length))
    return TropCover(genus, mu, tuple(vertices), tuple(edges))


def function_from_dict(T: TropCover, block: dict, where: str = "datum") -> CLFunction:
    """Read a function block; missing values are integrated from the slopes."""
    _check_keys(block, FUNCTION_KEYS, where)
    for key in ("values", "edge_slopes", "leg_slopes"):
        if key in block and not isinstance(block[key], dict):
            raise MalformedInput(f"{where}.{key}: expected an object")
    slopes = {k: _half(x, f"{where}.edge_slopes.{k}")
              for k, x in block.get("edge_slopes", {}).items()}
    legs = {k: _half(x, f"{where}.leg_slopes.{k}") for k, x in block.get("leg_slopes", {}).items()}
    branch = _half(block.get("branch_leg_slope", 0), f"{where}.branch_leg_slope")
    if "values" in block:
        values = {k: _rational(x, f"{where}.values.{k}") for k, x in block["values"].items()}
    else:
        values = integrate(T, slopes, where)
    return CLFunction(values, slopes, legs, branch)


def integrate(T: TropCover, slopes: dict, where: str = "datum") -> dict:
    """Vertex values from edge slopes, shifted so the minimum is 0."""
    if not T.vertices:
        return {}
    start = T.vertex_ids[0]
    values = {start: Fraction(0)}
    queue = [start]
    for v in queue:
        for e in T.incident(v):
            w = e.other(v)
            if w in values:
                continue
            if e.id not in slopes:
                raise MalformedInput(f"{where}: no slope for edge {e.id}")
            s = slopes[e.id].fraction
            values[w] = values[v] + (s if e.ends[0] == v else -s) * e.length
            queue.append(w)
    missing = [v for v in T.vertex_ids if v not in values]
    if missing:
        raise MalformedInput(f"{where}: cannot reach vertices {missing}")
    low = min(values.values())
    return {v: values[v] - low for v in T.vertex_ids}


def load_document(source) -> tuple[TropCover, CLFunction | None, CLFunction | None]:
    """Parse a path, JSON text or dict into (cover, datum, differential)."""
    if isinstance(source, dict):
        doc = source
    else:
        text = Path(source).read_text() if not str(source).lstrip().startswith("{") else source
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MalformedInput(f"not valid JSON: {exc}") from None
    T = cover_from_dict(doc)
    datum = function_from_dict(T, doc["datum"], "datum") if "datum" in doc else None
    diff = function_from_dict(T, doc["differential"], "differential") if "differential" in doc else None
    return T, datum, diff


def load_fixture(name: str):
    """One of the bundled example documents, by file stem."""
    ref = resources.files("gorcontract") / "data" / f"{name}.json"
    return load_document(json.loads(ref.read_text()))


def fixture_names() -> list[str]:
    folder = resources.files("gorcontract") / "data"
    return sorted(p.name[:-5] for p in folder.iterdir() if p.name.endswith(".json"))


def cover_to_dict(T: TropCover) -> dict:
    out = {"genus": T.genus, "mu": list(T.mu), "vertices": [], "edges": []}
    for v in T.vertices:
        item = {"id": v.id, "branch_count": v.branch_count}
        if v.markings:
            item["markings"] = [{"id": m.id, "zero_order": m.zero_order} for m in v.markings]
        out["vertices"].append(item)
    for e in T.edges:
        item = {"id": e.id, "ends": list(e.ends), "ramified": e.ramified}
        if e.length != 1:
            item["length"] = fraction_str(e.length)
        out["edges"].append(item)
    return out


def function_to_dict(T: TropCover, f: CLFunction) -> dict:
    out = {
        "values": {v: fraction_str(f.value(v)) for v in T.vertex_ids},
        "edge_slopes": {e: str(f.edge_slopes.get(e, HalfInt(0))) for e in T.edge_ids},
        "leg_slopes": {m.id: str(f.leg(m.id)) for m, _ in T.markings()},
    }
    if f.branch_leg_slope:
        out["branch_leg_slope"] = str(f.branch_leg_slope)
    return out


def dumps(obj) -> str:
    """Byte-stable JSON text."""
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"
