"""JSON (de)serialization for instances, allocations, and graphs.

Values travel as decimal integers or "p/q" strings -- never binary
floats -- so round-trips are exact and artifacts are diffable.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .errors import InputError
from .model import Allocation, Instance, as_rational
from .orientations import Edge, GraphInstance, Orientation


def _encode_value(v: Fraction):
    return int(v) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _decode_value(x) -> Fraction:
    if isinstance(x, str):
        return Fraction(x)
    return as_rational(x)


def instance_to_dict(inst: Instance) -> dict[str, Any]:
    return {
        "n": inst.n,
        "m": inst.m,
        "values": [[_encode_value(v) for v in row] for row in inst.values],
    }


def instance_from_dict(d: dict[str, Any]) -> Instance:
    try:
        values = [[_decode_value(v) for v in row] for row in d["values"]]
        inst = Instance.from_rows(values)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad instance payload: {exc}") from exc
    if inst.n != d.get("n", inst.n) or inst.m != d.get("m", inst.m):
        raise InputError("instance dimensions disagree with values matrix")
    return inst


def allocation_to_dict(alloc: Allocation) -> dict[str, Any]:
    return {
        "bundles": [sorted(b) for b in alloc.bundles],
        "pool": sorted(alloc.pool),
    }


def allocation_from_dict(d: dict[str, Any]) -> Allocation:
    try:
        bundles = tuple(frozenset(b) for b in d["bundles"])
        pool = frozenset(d.get("pool", ()))
        return Allocation(bundles, pool)
    except (KeyError, TypeError) as exc:
        raise InputError(f"bad allocation payload: {exc}") from exc


def graph_to_dict(ginst: GraphInstance) -> dict[str, Any]:
    return {
        "n": ginst.n,
        "edges": [
            {"u": e.u, "v": e.v,
             "wu": _encode_value(e.wu), "wv": _encode_value(e.wv),
             "label": e.label}
            for e in ginst.edges
        ],
    }


def graph_from_dict(d: dict[str, Any]) -> GraphInstance:
    try:
        edges = [
            Edge(e["u"], e["v"],
                 _decode_value(e["wu"]), _decode_value(e["wv"]),
                 e.get("label"))
            for e in d["edges"]
        ]
        return GraphInstance(d["n"], tuple(edges))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad graph payload: {exc}") from exc


def orientation_to_dict(orientation: Orientation) -> dict[str, Any]:
    return {"receivers": list(orientation.receivers)}


def orientation_from_dict(d: dict[str, Any]) -> Orientation:
    try:
        return Orientation(tuple(int(r) for r in d["receivers"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad orientation payload: {exc}") from exc


def dump(obj, path) -> None:
    """Serialize a known object type to a JSON file (sorted keys)."""
    if isinstance(obj, Instance):
        payload = instance_to_dict(obj)
    elif isinstance(obj, Allocation):
        payload = allocation_to_dict(obj)
    elif isinstance(obj, GraphInstance):
        payload = graph_to_dict(obj)
    elif isinstance(obj, Orientation):
        payload = orientation_to_dict(obj)
    else:
        raise InputError(f"cannot serialize {type(obj).__name__}")
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_json(path) -> dict[str, Any]:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
