"""C-induced constraints of the odd-cycle dominant of K_n and their certification."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator, Optional

import numpy as np

from . import kernels
from .errors import CertificationError, InputError, ValidityError
from .graphs import Cycle, Graph, complete_graph, enumerate_cycles_of_length, enumerate_odd_cycles, norm_edge
from .polyhedra import GE, Constraint, FacetCertificate, rank_of_int_matrix


@dataclass(frozen=True)
class CInducedSpec:
    """An (n-2)-cycle ``v_1..v_{2k+1}`` of K_n; ``s < t`` are the two vertices off it."""

    n: int
    cycle: tuple

    def __post_init__(self):
        n = self.n
        if n < 5 or n % 2 == 0:
            raise InputError("C-induced constraints need odd n >= 5")
        cyc = tuple(int(v) for v in self.cycle)
        if len(cyc) != n - 2 or len(set(cyc)) != len(cyc) or not all(0 <= v < n for v in cyc):
            raise InputError(f"cycle must list {n - 2} distinct vertices of K_{n}")
        object.__setattr__(self, "cycle", cyc)

    @classmethod
    def standard(cls, n: int) -> "CInducedSpec":
        return cls(n, tuple(range(n - 2)))

    @property
    def k(self) -> int:
        return (self.n - 3) // 2

    @cached_property
    def outside(self) -> tuple[int, int]:
        on = set(self.cycle)
        s, t = (v for v in range(self.n) if v not in on)
        return s, t

    @property
    def s(self) -> int:
        return self.outside[0]

    @property
    def t(self) -> int:
        return self.outside[1]

    @cached_property
    def position(self) -> dict:
        """Vertex -> 1-based index on the cycle."""
        return {v: i + 1 for i, v in enumerate(self.cycle)}

    def vertex(self, i: int) -> int:
        """``v_i`` with the index taken cyclically (1-based)."""
        return self.cycle[(i - 1) % len(self.cycle)]

    def as_cycle(self) -> Cycle:
        return Cycle(self.cycle)


@dataclass(frozen=True)
class Valid:
    pass


@dataclass(frozen=True)
class Violation:
    cycle: Cycle
    value: object


def ell(spec: CInducedSpec, e) -> int:
    """Length of the odd path along the cycle between the endpoints of ``e``."""
    u, v = e
    pos = spec.position
    if u not in pos or v not in pos or u == v:
        raise InputError(f"edge {e} does not join two distinct cycle vertices")
    d = abs(pos[u] - pos[v])
    return d if d % 2 else 2 * spec.k + 1 - d


def build_c_induced(spec: CInducedSpec) -> Constraint:
    g = complete_graph(spec.n)
    k = spec.k
    s, t = spec.outside
    coeffs = []
    for u, v in g.edges:
        if {u, v} == {s, t}:
            coeffs.append(1)
        elif u in (s, t) or v in (s, t):
            coeffs.append(k)
        else:
            coeffs.append(ell(spec, (u, v)))
    return Constraint(g.edges, tuple(coeffs), 2 * k + 1, GE)


class OddCycleTable:
    """All odd cycles of a graph with a flat edge-index layout for the kernels."""

    def __init__(self, g: Graph):
        self.graph = g
        self.cycles = enumerate_odd_cycles(g)
        idx = g.edge_index
        flat = []
        offsets = [0]
        for c in self.cycles:
            flat.extend(idx[e] for e in c.edges)
            offsets.append(len(flat))
        self.flat = np.array(flat, dtype=np.int32)
        self.offsets = np.array(offsets, dtype=np.int64)

    def __len__(self):
        return len(self.cycles)

    @cached_property
    def incidence(self) -> np.ndarray:
        m = np.zeros((len(self.cycles), len(self.graph.edges)), dtype=np.int64)
        rows = np.repeat(np.arange(len(self.cycles)), np.diff(self.offsets))
        m[rows, self.flat] = 1
        return m

    def values(self, c: Constraint) -> tuple[np.ndarray, int]:
        """Scaled left-hand sides on every cycle, and the equally scaled rhs."""
        if tuple(c.edges) != self.graph.edges:
            raise InputError("constraint is not over this graph's edges")
        coeffs, rhs, _ = c.integral()
        w = np.array(coeffs, dtype=np.int64)
        return kernels.cycle_weights(self.flat, self.offsets, w), rhs


@lru_cache(maxsize=16)
def odd_cycle_table(g: Graph) -> OddCycleTable:
    return OddCycleTable(g)


def verify_validity(c: Constraint, n: int):
    """Brute-force check of ``c`` on every odd cycle of K_n."""
    table = odd_cycle_table(complete_graph(n))
    values, rhs = table.values(c)
    bad = np.flatnonzero(values < rhs)
    if bad.size:
        i = int(bad[0])
        return Violation(table.cycles[i], c.value_on(table.cycles[i].edges))
    return Valid()


def slack_cycle(c: Constraint, g: Graph) -> Optional[Cycle]:
    """First odd cycle of ``g`` with strictly positive slack, if any."""
    table = odd_cycle_table(g)
    values, rhs = table.values(c)
    over = np.flatnonzero(values > rhs)
    return table.cycles[int(over[0])] if over.size else None


def tight_cycles(c: Constraint, g: Graph) -> list[Cycle]:
    table = odd_cycle_table(g)
    values, rhs = table.values(c)
    return [table.cycles[i] for i in np.flatnonzero(values == rhs)]


def _even_path(spec: CInducedSpec, i: int, j: int) -> list[int]:
    """Vertices of the even-length arc from ``v_i`` to ``v_j`` (inclusive)."""
    m = len(spec.cycle)
    fwd = (j - i) % m
    step = 1 if fwd % 2 == 0 else -1
    length = fwd if step == 1 else m - fwd
    return [spec.vertex(i + step * r) for r in range(length + 1)]


def tight_family(spec: CInducedSpec) -> list[Cycle]:
    """Triangles ``T^i``, ``T_s^i``, ``T_t^i``, chord cycles ``C_{i,j}`` and ``C``."""
    m = len(spec.cycle)
    s, t = spec.outside
    fam = []
    for i in range(1, m + 1):
        fam.append(Cycle((s, t, spec.vertex(i))))
    for i in range(1, m + 1):
        fam.append(Cycle((s, spec.vertex(i), spec.vertex(i + 1))))
    for i in range(1, m + 1):
        fam.append(Cycle((t, spec.vertex(i), spec.vertex(i + 1))))
    for i in range(1, m + 1):
        for j in range(i + 2, m + 1):
            if (j - i) % m in (1, m - 1):
                continue
            fam.append(Cycle(tuple(_even_path(spec, i, j))))
    fam.append(spec.as_cycle())
    return fam


def certify_dominant_facet(spec: CInducedSpec, c: Optional[Constraint] = None) -> FacetCertificate:
    """Certify that the C-induced constraint is a facet of the dominant.

    The dominant is full-dimensional, so it suffices that the constraint is
    valid, cuts off the origin, and its tight odd cycles have rank ``|E|``.
    """
    if c is None:
        c = build_c_induced(spec)
    g = complete_graph(spec.n)
    table = odd_cycle_table(g)
    values, rhs = table.values(c)
    bad = np.flatnonzero(values < rhs)
    if bad.size:
        cyc = table.cycles[int(bad[0])]
        raise ValidityError(f"constraint violated by odd cycle {cyc.vertices}", witness=cyc)
    if c.rhs <= 0:
        raise CertificationError("origin satisfies the constraint; not a facet of the dominant")
    tight = np.flatnonzero(values == rhs)
    dim = len(g.edges)
    rank, pivots = rank_of_int_matrix(table.incidence[tight])
    if rank != dim:
        raise CertificationError(f"tight odd cycles reach rank {rank} < {dim}",
                                 polytope_dim=dim, face_dim=rank - 1, rank=rank)
    gens = [tuple(int(a) for a in table.incidence[tight[p]]) for p in pivots]
    return FacetCertificate(
        constraint=c,
        polytope_dim=dim,
        face_dim=rank - 1,
        tight_generators=gens,
        tight_count=int(tight.size),
        details={"rank": rank, "tight_cycles": [table.cycles[int(tight[p])].vertices for p in pivots]},
    )


def all_c_induced_specs(n: int) -> Iterator[CInducedSpec]:
    """One spec per (n-2)-cycle of K_n, in canonical cycle order."""
    for c in enumerate_cycles_of_length(complete_graph(n), n - 2):
        yield CInducedSpec(n, c.vertices)


def distinct_coefficients(c: Constraint) -> list:
    return sorted(set(c.coeffs))


def chord_edges(spec: CInducedSpec) -> list:
    m = len(spec.cycle)
    return [norm_edge(spec.vertex(i), spec.vertex(j))
            for i in range(1, m + 1) for j in range(i + 2, m + 1) if (j - i) % m not in (1, m - 1)]
