"""JSON payloads: graphs, constraints, points and exact rationals.

Rationals are always written as canonical ``"p/q"`` strings with ``q > 0``
(integers included, e.g. ``"3/1"``); readers also accept ``"p"``.
Edge keys are ``"u-v"`` with ``u < v``.
"""
from __future__ import annotations

import dataclasses
import json
from fractions import Fraction

import numpy as np

from .errors import InputError
from .graphs import Cycle, Graph, Matching, RedBlueGraph, norm_edge
from .polyhedra import Constraint, FacetCertificate, as_fraction


def q_str(v) -> str:
    f = as_fraction(v)
    return f"{f.numerator}/{f.denominator}"


def q_parse(s) -> Fraction:
    if isinstance(s, bool):
        raise InputError(f"not a rational: {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise InputError(f"rationals must be strings 'p/q', got {s!r}")
    try:
        f = Fraction(s.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad rational {s!r}") from exc
    return f


def edge_key(e) -> str:
    u, v = norm_edge(*e)
    return f"{u}-{v}"


def parse_edge_key(key: str):
    try:
        u, v = (int(p) for p in key.split("-"))
    except ValueError as exc:
        raise InputError(f"bad edge key {key!r}") from exc
    return norm_edge(u, v)


def graph_to_json(g) -> dict:
    red = []
    if isinstance(g, RedBlueGraph):
        red = [list(e) for e in sorted(g.red)]
        g = g.graph
    return {
        "n": g.n,
        "bipartition": [list(s) for s in g.bipartition] if g.bipartition is not None else None,
        "edges": [list(e) for e in g.edges],
        "red": red,
    }


def graph_from_json(data):
    """Return a ``RedBlueGraph`` when a bipartition is given, else a ``Graph``."""
    try:
        n = int(data["n"])
        edges = tuple(norm_edge(int(u), int(v)) for u, v in data["edges"])
        bip = data.get("bipartition")
        red = data.get("red") or []
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed graph JSON: {exc}") from exc
    bipartition = None
    if bip is not None:
        if len(bip) != 2:
            raise InputError("bipartition must have two sides")
        bipartition = (tuple(int(v) for v in bip[0]), tuple(int(v) for v in bip[1]))
    g = Graph(n, edges, bipartition)
    if bipartition is None:
        if red:
            raise InputError("red edges require a bipartition")
        return g
    return RedBlueGraph(g, frozenset(norm_edge(int(u), int(v)) for u, v in red))


def constraint_to_json(c: Constraint) -> dict:
    return {
        "coeffs": {edge_key(e): q_str(a) for e, a in zip(c.edges, c.coeffs)},
        "rhs": q_str(c.rhs),
        "sense": c.sense,
    }


def constraint_from_json(data) -> Constraint:
    try:
        items = [(parse_edge_key(k), q_parse(v)) for k, v in data["coeffs"].items()]
        items.sort()
        return Constraint(tuple(e for e, _ in items), tuple(a for _, a in items),
                          q_parse(data["rhs"]), data.get("sense", ">="))
    except (KeyError, TypeError, AttributeError) as exc:
        raise InputError(f"malformed constraint JSON: {exc}") from exc


def point_to_json(edges, x) -> dict:
    return {"values": {edge_key(e): q_str(v) for e, v in zip(edges, x)}}


def point_from_json(data, edges) -> tuple:
    """Dense point over ``edges``; edges missing from the payload are 0."""
    try:
        values = {parse_edge_key(k): q_parse(v) for k, v in data["values"].items()}
    except (KeyError, TypeError, AttributeError) as exc:
        raise InputError(f"malformed point JSON: {exc}") from exc
    unknown = set(values) - set(edges)
    if unknown:
        raise InputError(f"point has values on non-edges: {sorted(unknown)}")
    return tuple(values.get(tuple(e), Fraction(0)) for e in edges)


def certificate_to_json(cert: FacetCertificate) -> dict:
    return {
        "constraint": constraint_to_json(cert.constraint),
        "polytope_dim": cert.polytope_dim,
        "face_dim": cert.face_dim,
        "is_facet": cert.is_facet,
        "tight_count": cert.tight_count,
        "generator_count": len(cert.tight_generators),
        "tight_generators": to_jsonable(cert.tight_generators),
        "details": to_jsonable(cert.details),
    }


def to_jsonable(obj):
    """Recursively convert package objects into plain JSON values."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, Fraction):
        return q_str(obj)
    if isinstance(obj, float):
        return obj
    if isinstance(obj, Constraint):
        return constraint_to_json(obj)
    if isinstance(obj, FacetCertificate):
        return certificate_to_json(obj)
    if isinstance(obj, (Graph, RedBlueGraph)):
        return graph_to_json(obj)
    if isinstance(obj, Cycle):
        return list(obj.vertices)
    if isinstance(obj, Matching):
        return [list(e) for e in obj.edges]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if dataclasses.is_dataclass(obj):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {_key(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (frozenset, set)):
        return [to_jsonable(v) for v in sorted(obj)]
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _key(k) -> str:
    if isinstance(k, tuple) and len(k) == 2:
        return edge_key(k)
    return str(k)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)
