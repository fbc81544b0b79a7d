"""Graph spec strings, graph JSON/DOT export and report serialisation.

Rationals are written as ``[numerator, denominator]`` pairs and floats as
decimal strings (``repr`` of the float, or ``"inf"``), so reports are
byte-identical across reruns.
"""

from __future__ import annotations

import csv
import dataclasses
import io as _io
import json
import math
import re
from fractions import Fraction
from pathlib import Path

import numpy as np

from .config import DEFAULT_CAPS, Caps
from .errors import DomainError, InvalidGraphError, InvalidMeasureError
from .exact import as_fraction
from .graph import Graph, Subset, diamond_graph, laakso_graph, make_graph, oslash_power, path_graph
from .measures import (
    EdgeMeasure,
    GeodesicMetric,
    edge_measure,
    geodesic_metric,
    laakso_weighted_measure,
    power_edge_measure,
    power_metric,
    standard_metric,
    uniform_edge_measure,
)
from .transport import TransportInstance, make_instance

_SPEC = re.compile(r"^\s*(path|diamond|laakso)\s*(?::\s*([0-9,\s]*))?\s*$")


def parse_spec(spec: str) -> Graph:
    """``"path:k"``, ``"diamond:k,m"`` or ``"laakso"``."""
    m = _SPEC.match(spec or "")
    if not m:
        raise InvalidGraphError(f"cannot parse graph spec {spec!r}")
    kind, args = m.group(1), m.group(2)
    nums = [int(x) for x in args.split(",") if x.strip()] if args else []
    if kind == "laakso":
        if nums:
            raise InvalidGraphError("laakso takes no parameters")
        return laakso_graph()
    if kind == "path":
        if len(nums) != 1:
            raise InvalidGraphError("path needs one parameter, e.g. path:3")
        return path_graph(nums[0])
    if len(nums) != 2:
        raise InvalidGraphError("diamond needs two parameters, e.g. diamond:2,2")
    return diamond_graph(*nums)


def base_measure(g: Graph, name: str = "uniform") -> EdgeMeasure:
    if name == "uniform":
        return uniform_edge_measure(g)
    if name == "weighted":
        return laakso_weighted_measure(g)
    raise InvalidMeasureError(f"unknown measure {name!r}; use uniform or weighted")


def build_from_spec(spec: str, n: int = 1, measure: str = "uniform", caps: Caps = DEFAULT_CAPS):
    """Base graph, its power, and the product measure and metric on the power."""
    g = parse_spec(spec)
    nu = base_measure(g, measure)
    d = standard_metric(g)
    power = oslash_power(g, n, caps)
    if n == 1:
        return g, power, nu, d
    return g, power, power_edge_measure(nu, power), power_metric(d, power)


# ------------------------------------------------------------ JSON values


def rational(x) -> list[int]:
    x = Fraction(x)
    return [x.numerator, x.denominator]


def real(x) -> str:
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return repr(x)


def to_jsonable(obj):
    """Convert reports and their fields into plain JSON values."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, Fraction):
        return rational(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return real(obj)
    if isinstance(obj, Subset):
        return {"vertices": list(obj.members), "labels": list(obj.labels)}
    if isinstance(obj, Graph):
        return {"n_vertices": obj.n_vertices, "n_edges": obj.n_edges}
    if dataclasses.is_dataclass(obj):
        return {
            f.name: to_jsonable(getattr(obj, f.name))
            for f in dataclasses.fields(obj)
            if f.repr or f.name == "profile"
        }
    if isinstance(obj, dict):
        return {str(k if not isinstance(k, Fraction) else f"{k.numerator}/{k.denominator}"): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [to_jsonable(v) for v in obj]
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(payload) -> str:
    return json.dumps(to_jsonable(payload), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def csv_row(payload: dict) -> str:
    """Scalar fields of a flat report as a two-line CSV (header and row)."""
    flat = {}
    for key, val in to_jsonable(payload).items():
        if isinstance(val, list) and len(val) == 2 and all(isinstance(v, int) for v in val):
            flat[key] = f"{val[0]}/{val[1]}"
        elif isinstance(val, dict) and "labels" in val:
            flat[key] = "{" + ";".join(val["labels"]) + "}"
        elif isinstance(val, (str, int, bool)) or val is None:
            flat[key] = val
    buf = _io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(flat), lineterminator="\n")
    writer.writeheader()
    writer.writerow(flat)
    return buf.getvalue()


# ------------------------------------------------------------ graphs


def graph_to_json(g: Graph, nu: EdgeMeasure | None = None, d: GeodesicMetric | None = None) -> dict:
    out = {
        "vertices": [{"id": v, "label": g.vertex_labels[v]} for v in g.vertices],
        "edges": [
            {"id": e, "src": int(u), "dst": int(v), "label": g.edge_labels[e]}
            for e, (u, v) in enumerate(g.edges)
        ],
        "source": g.source,
        "sink": g.sink,
    }
    if nu is not None:
        out["edge_measure"] = [rational(x) for x in nu.mass]
    if d is not None:
        out["edge_lengths"] = [rational(x) for x in d.lengths]
    return out


def graph_from_json(data: dict) -> tuple[Graph, EdgeMeasure | None, GeodesicMetric | None]:
    try:
        vertices = sorted(data["vertices"], key=lambda v: v["id"])
        edges = sorted(data["edges"], key=lambda e: e["id"])
        if [v["id"] for v in vertices] != list(range(len(vertices))):
            raise InvalidGraphError("vertex ids must be 0..n-1")
        g = make_graph(
            len(vertices),
            [(e["src"], e["dst"]) for e in edges],
            data.get("source"),
            data.get("sink"),
            [v["label"] for v in vertices],
            [e.get("label", f"{e['src']}->{e['dst']}") for e in edges],
            st_check="warn",
        )
    except (KeyError, TypeError) as exc:
        raise InvalidGraphError(f"malformed graph JSON: {exc}") from None
    nu = edge_measure(g, [as_fraction(x) for x in data["edge_measure"]]) if "edge_measure" in data else None
    d = geodesic_metric(g, [as_fraction(x) for x in data["edge_lengths"]]) if "edge_lengths" in data else None
    return g, nu, d


def graph_to_dot(g: Graph, name: str = "G") -> str:
    lines = [f"digraph {json.dumps(name)} {{"]
    for v in g.vertices:
        attrs = [f"label={json.dumps(g.vertex_labels[v], ensure_ascii=False)}"]
        if v == g.source:
            attrs.append("shape=box")
        elif v == g.sink:
            attrs.append("shape=doublecircle")
        lines.append(f"  {v} [{', '.join(attrs)}];")
    for e, (u, v) in enumerate(g.edges):
        lines.append(f"  {u} -> {v} [label={json.dumps(g.edge_labels[e], ensure_ascii=False)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------ transport instances


def load_instance(path: str | Path, caps: Caps = DEFAULT_CAPS) -> TransportInstance:
    """Read ``{"points", "dist" | "graph_ref", "mu", "nu"}``.

    ``graph_ref`` is a graph spec string, optionally with ``"power"``; its
    standard metric supplies the distances and the edges for the flow
    formulation.
    """
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise DomainError(f"cannot read instance: {exc}") from None
    return instance_from_json(data, caps)


def instance_from_json(data: dict, caps: Caps = DEFAULT_CAPS) -> TransportInstance:
    if "mu" not in data or "nu" not in data:
        raise DomainError("instance needs mu and nu")
    if "graph_ref" in data:
        _, power, _, d = build_from_spec(data["graph_ref"], int(data.get("power", 1)), caps=caps)
        return make_instance(d, data["mu"], data["nu"])
    if "graph" in data:
        _, _, d = graph_from_json(data["graph"])
        if d is None:
            raise DomainError("embedded graph needs edge_lengths")
        return make_instance(d, data["mu"], data["nu"])
    if "dist" in data:
        return make_instance(data["dist"], data["mu"], data["nu"])
    raise DomainError("instance needs dist, graph or graph_ref")
