"""Canonical transformation to the doubled graph, expressibility and matching facets."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Optional

import numpy as np

from .errors import CertificationError, InputError, ValidityError
from .graphs import CROSS, Cycle, Graph, RedBlueGraph, doubled_graph, enumerate_odd_red_perfect_matchings, norm_edge
from .oddcycle import odd_cycle_table
from .polyhedra import GE, Constraint, FacetCertificate, affine_dimension_int, rank_of_int_matrix


@dataclass(frozen=True)
class TransferContext:
    """A base graph together with its red-blue double (cross edges red)."""

    base: Graph

    @cached_property
    def doubled(self) -> RedBlueGraph:
        return doubled_graph(self.base, CROSS)

    @property
    def n(self) -> int:
        return self.base.n

    def forward(self, e) -> tuple[int, int]:
        """``{u+, v-}`` for ``e = {u, v}`` with ``u < v``."""
        u, v = norm_edge(*e)
        return (u, self.n + v)

    def backward(self, e) -> tuple[int, int]:
        """``{u-, v+}`` for ``e = {u, v}`` with ``u < v``."""
        u, v = norm_edge(*e)
        return (v, self.n + u)

    def identity(self, v: int) -> tuple[int, int]:
        return (v, self.n + v)

    def base_edge(self, f) -> Optional[tuple[int, int]]:
        """Preimage of a doubled edge, or None for identity edges."""
        a, b = norm_edge(*f)
        u, w = a, b - self.n
        return None if u == w else norm_edge(u, w)


def canonical_transform(c: Constraint, ctx: TransferContext) -> Constraint:
    if c.sense != GE:
        raise InputError("canonical transformation needs a covering (>=) constraint")
    if any(a < 0 for a in c.coeffs):
        raise InputError("canonical transformation needs nonnegative coefficients")
    if set(c.edges) != set(ctx.base.edges):
        raise InputError("constraint is not over the base graph's edges")
    coeff = {}
    for e, a in zip(c.edges, c.coeffs):
        coeff[ctx.forward(e)] = a
        coeff[ctx.backward(e)] = a
    return Constraint.from_mapping(ctx.doubled.edges, coeff, c.rhs, GE)


def half_point(cycle: Cycle, ctx: TransferContext) -> tuple:
    """1/2 on both copies of each cycle edge, 1 on identity edges off the cycle."""
    on = set(cycle.vertices)
    vals = {}
    for e in cycle.edges:
        vals[ctx.forward(e)] = Fraction(1, 2)
        vals[ctx.backward(e)] = Fraction(1, 2)
    for v in range(ctx.n):
        if v not in on:
            vals[ctx.identity(v)] = Fraction(1)
    return tuple(vals.get(f, Fraction(0)) for f in ctx.doubled.edges)


def expressible_closure(g: Graph, c: Constraint, q: Iterable) -> frozenset:
    """Least superset of ``q`` closed under completing tight odd cycles."""
    table = odd_cycle_table(g)
    values, rhs = table.values(c)
    if (values < rhs).any():
        i = int(np.flatnonzero(values < rhs)[0])
        raise ValidityError("constraint is not valid on the odd cycles", witness=table.cycles[i])
    closed = {norm_edge(*e) for e in q}
    unknown = closed - set(g.edges)
    if unknown:
        raise InputError(f"seed edges not in the graph: {sorted(unknown)}")
    tight = [table.cycles[i].edges for i in np.flatnonzero(values == rhs)]
    changed = True
    while changed:
        changed = False
        for edges in tight:
            missing = [e for e in edges if e not in closed]
            if len(missing) == 1:
                closed.add(missing[0])
                changed = True
    return frozenset(closed)


def check_k_expressing(g: Graph, c: Constraint, k: int, q: Iterable) -> bool:
    q = {norm_edge(*e) for e in q}
    if len(q) > k:
        raise InputError(f"seed set has {len(q)} > {k} edges")
    return expressible_closure(g, c, q) == frozenset(g.edges)


class MatchingTable:
    """Odd-red perfect matchings of a red-blue graph and their incidence matrix."""

    def __init__(self, h: RedBlueGraph):
        self.graph = h
        self.matchings = enumerate_odd_red_perfect_matchings(h)
        idx = h.graph.edge_index
        m = np.zeros((len(self.matchings), len(h.edges)), dtype=np.int64)
        for r, pm in enumerate(self.matchings):
            m[r, [idx[e] for e in pm.edges]] = 1
        self.incidence = m

    def __len__(self):
        return len(self.matchings)

    @cached_property
    def dimension(self) -> int:
        return affine_dimension_int(self.incidence) if len(self) else -1

    def values(self, c: Constraint) -> tuple[np.ndarray, int]:
        if tuple(c.edges) != self.graph.edges:
            raise InputError("constraint is not over this graph's edges")
        coeffs, rhs, _ = c.integral()
        return self.incidence @ np.array(coeffs, dtype=object), rhs


@lru_cache(maxsize=8)
def matching_table(h: RedBlueGraph) -> MatchingTable:
    return MatchingTable(h)


@dataclass
class Hypotheses:
    """The two side conditions of the transfer statement, checked directly."""

    seed: tuple
    expressing: bool
    slack_witness: Optional[Cycle]
    details: dict = field(default_factory=dict)

    @property
    def hold(self) -> bool:
        return self.expressing and self.slack_witness is not None


def check_hypotheses(g: Graph, c: Constraint, q: Iterable) -> Hypotheses:
    """``(n-1)``-expressing via ``q`` and a strictly slack odd cycle."""
    from .oddcycle import slack_cycle

    q = tuple(sorted(norm_edge(*e) for e in q))
    expressing = check_k_expressing(g, c, g.n - 1, q) if len(q) <= g.n - 1 else False
    return Hypotheses(q, expressing, slack_cycle(c, g))


def certify_matching_facet(ctx: TransferContext, c: Constraint, source: Optional[Constraint] = None,
                           hypotheses: Optional[Hypotheses] = None) -> FacetCertificate:
    """Certify ``c`` as a facet of the odd-red matching polytope by enumeration."""
    table = matching_table(ctx.doubled)
    if not len(table):
        raise CertificationError("no odd-red perfect matchings; polytope is empty")
    values, rhs = table.values(c)
    bad = np.flatnonzero(values < rhs)
    if bad.size:
        m = table.matchings[int(bad[0])]
        raise ValidityError(f"constraint violated by matching {m.edges}", witness=m, index=int(bad[0]))
    tight = np.flatnonzero(values == rhs)
    pdim = table.dimension
    if tight.size == 0:
        raise CertificationError("no tight matching; face is empty", polytope_dim=pdim, face_dim=-1)
    rows = table.incidence[tight]
    homog = np.hstack([rows, np.ones((rows.shape[0], 1), dtype=np.int64)])
    frank, pivots = rank_of_int_matrix(homog)
    fdim = frank - 1
    if tight.size == len(table):
        raise CertificationError("every matching is tight; face is not proper",
                                 polytope_dim=pdim, face_dim=fdim)
    if fdim != pdim - 1:
        raise CertificationError(f"face dimension {fdim} != {pdim - 1}", polytope_dim=pdim, face_dim=fdim)
    details = {"matchings": len(table), "transform": c}
    if source is not None:
        details["source"] = source
    if hypotheses is not None:
        details["hypotheses"] = hypotheses
    return FacetCertificate(
        constraint=c,
        polytope_dim=pdim,
        face_dim=fdim,
        tight_generators=[table.matchings[int(tight[p])] for p in pivots],
        tight_count=int(tight.size),
        details=details,
    )


def tight_matchings(ctx: TransferContext, c: Constraint) -> frozenset:
    table = matching_table(ctx.doubled)
    values, rhs = table.values(c)
    return frozenset(int(i) for i in np.flatnonzero(values == rhs))


def degree_constraint(h: RedBlueGraph, v: int) -> Constraint:
    """``y(delta(v)) >= 1``, the degree equation read as a covering constraint."""
    return Constraint.from_mapping(h.edges, {e: 1 for e in h.graph.delta([v])}, 1, GE)


def expected_dimension(h: RedBlueGraph) -> int:
    """``|E| - |V| + 1`` for a connected bipartite graph."""
    return len(h.edges) - h.n + 1

