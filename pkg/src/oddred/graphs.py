"""Graphs, the doubling construction and exhaustive enumerators.

Vertices are integers ``0..n-1``. For a doubled graph of a base graph on
``n`` vertices, ``v+`` is vertex ``v`` and ``v-`` is vertex ``n + v``.
Edges are always stored normalized as ``(u, v)`` with ``u < v``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Optional

from .errors import InputError

Edge = tuple[int, int]

CROSS = "cross"
IDENTITY = "identity"


def norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[Edge, ...]
    bipartition: Optional[tuple[tuple[int, ...], tuple[int, ...]]] = None

    def __post_init__(self):
        if self.n < 0:
            raise InputError("vertex count must be nonnegative")
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InputError(f"edge {(u, v)} references a missing vertex")
            e = norm_edge(u, v)
            if e in seen:
                raise InputError(f"parallel edge {e}")
            seen.add(e)
        object.__setattr__(self, "edges", tuple(sorted(seen)))
        if self.bipartition is not None:
            left, right = (tuple(sorted(side)) for side in self.bipartition)
            if set(left) & set(right) or set(left) | set(right) != set(range(self.n)):
                raise InputError("bipartition must split the vertex set into two disjoint sides")
            lset = set(left)
            for u, v in self.edges:
                if (u in lset) == (v in lset):
                    raise InputError(f"edge {(u, v)} does not cross the bipartition")
            object.__setattr__(self, "bipartition", (left, right))

    @cached_property
    def edge_index(self) -> dict[Edge, int]:
        return {e: i for i, e in enumerate(self.edges)}

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    def has_edge(self, u: int, v: int) -> bool:
        return norm_edge(u, v) in self.edge_index

    def index(self, u: int, v: int) -> int:
        return self.edge_index[norm_edge(u, v)]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def delta(self, vertices: Iterable[int]) -> list[Edge]:
        """Edges with exactly one endpoint in ``vertices``."""
        s = set(vertices)
        return [e for e in self.edges if (e[0] in s) != (e[1] in s)]

    def induced_edges(self, vertices: Iterable[int]) -> list[Edge]:
        s = set(vertices)
        return [e for e in self.edges if e[0] in s and e[1] in s]


@dataclass(frozen=True)
class RedBlueGraph:
    graph: Graph
    red: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.graph.bipartition is None:
            raise InputError("a red-blue graph needs a bipartition")
        red = frozenset(norm_edge(*e) for e in self.red)
        missing = red - set(self.graph.edges)
        if missing:
            raise InputError(f"red edges not in the graph: {sorted(missing)}")
        object.__setattr__(self, "red", red)

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self.graph.edges

    def is_red(self, e: Edge) -> bool:
        return norm_edge(*e) in self.red

    @cached_property
    def red_vector(self) -> tuple[int, ...]:
        return tuple(int(e in self.red) for e in self.graph.edges)


@dataclass(frozen=True, order=True)
class Matching:
    edges: tuple[Edge, ...]

    def __post_init__(self):
        edges = tuple(sorted(norm_edge(*e) for e in self.edges))
        covered = [v for e in edges for v in e]
        if len(covered) != len(set(covered)):
            raise InputError("matching edges must be pairwise vertex-disjoint")
        object.__setattr__(self, "edges", edges)

    def __len__(self):
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)

    def is_perfect(self, g: Graph) -> bool:
        return 2 * len(self.edges) == g.n and all(g.has_edge(*e) for e in self.edges)

    def red_count(self, h: RedBlueGraph) -> int:
        return sum(1 for e in self.edges if e in h.red)

    def incidence(self, g: Graph) -> tuple[int, ...]:
        chosen = set(self.edges)
        return tuple(int(e in chosen) for e in g.edges)


def canonical_cycle(seq: Iterable[int]) -> tuple[int, ...]:
    """Lexicographically smallest rotation/reflection of a closed vertex sequence."""
    seq = tuple(seq)
    t = len(seq)
    if t <= 2:
        return tuple(sorted(seq))
    i = seq.index(min(seq))
    fwd = seq[i:] + seq[:i]
    bwd = (fwd[0],) + tuple(reversed(fwd[1:]))
    return min(fwd, bwd)


@dataclass(frozen=True, order=True)
class Cycle:
    """A closed walk through distinct vertices, stored canonically.

    Length-2 cycles are the degenerate "one edge used twice" cycles that
    come out of projecting matchings; they are never odd.
    """

    vertices: tuple[int, ...]

    def __post_init__(self):
        vs = tuple(self.vertices)
        if len(vs) < 2 or len(set(vs)) != len(vs):
            raise InputError(f"not a cycle: {vs}")
        object.__setattr__(self, "vertices", canonical_cycle(vs))

    @property
    def length(self) -> int:
        return len(self.vertices)

    def __len__(self):
        return len(self.vertices)

    @property
    def degenerate(self) -> bool:
        return len(self.vertices) == 2

    @property
    def is_odd(self) -> bool:
        return not self.degenerate and len(self.vertices) % 2 == 1

    @property
    def edges(self) -> tuple[Edge, ...]:
        vs = self.vertices
        if self.degenerate:
            return (norm_edge(*vs),)
        return tuple(norm_edge(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs)))

    def incidence(self, g: Graph) -> tuple[int, ...]:
        chosen = set(self.edges)
        return tuple(int(e in chosen) for e in g.edges)

    def in_graph(self, g: Graph) -> bool:
        return all(g.has_edge(*e) for e in self.edges)


def complete_graph(n: int) -> Graph:
    if n < 1:
        raise InputError("complete_graph needs n >= 1")
    return Graph(n, tuple((u, v) for u in range(n) for v in range(u + 1, n)))


def complete_bipartite(a: int, b: int) -> Graph:
    left = tuple(range(a))
    right = tuple(range(a, a + b))
    return Graph(a + b, tuple((u, v) for u in left for v in right), (left, right))


def doubled_graph(g: Graph, convention: str = CROSS) -> RedBlueGraph:
    """Build the bipartite double of ``g``.

    ``convention="cross"`` colors the edges ``{u+, v-}`` red (the odd-cycle
    correspondence); ``convention="identity"`` colors the edges ``{v+, v-}``
    red instead (the max-cut reduction).
    """
    if convention not in (CROSS, IDENTITY):
        raise InputError(f"unknown color convention {convention!r}")
    n = g.n
    identity = [(v, n + v) for v in range(n)]
    cross = []
    for u, v in g.edges:
        cross.append((u, n + v))
        cross.append((v, n + u))
    hat = Graph(2 * n, tuple(identity + cross), (tuple(range(n)), tuple(range(n, 2 * n))))
    red = cross if convention == CROSS else identity
    return RedBlueGraph(hat, frozenset(red))


def _sides(g: Graph) -> tuple[tuple[int, ...], tuple[int, ...]]:
    if g.bipartition is None:
        raise InputError("graph has no bipartition")
    return g.bipartition


def iter_perfect_matchings(g: Graph) -> Iterator[tuple[Edge, ...]]:
    """Backtracking over vertices in increasing order; yields unsorted edge lists."""
    n = g.n
    if n % 2:
        return
    adj = g.adjacency
    used = [False] * n
    chosen: list[Edge] = []

    def rec(start):
        v = start
        while v < n and used[v]:
            v += 1
        if v == n:
            yield tuple(chosen)
            return
        used[v] = True
        for w in adj[v]:
            if used[w]:
                continue
            used[w] = True
            chosen.append(norm_edge(v, w))
            yield from rec(v + 1)
            chosen.pop()
            used[w] = False
        used[v] = False

    if g.bipartition is not None and len(g.bipartition[0]) != len(g.bipartition[1]):
        return
    if any(not adj[v] for v in range(n)):
        return
    yield from rec(0)


def enumerate_perfect_matchings(g: Graph) -> list[Matching]:
    return sorted(Matching(m) for m in iter_perfect_matchings(g))


def enumerate_odd_red_perfect_matchings(h: RedBlueGraph) -> list[Matching]:
    _sides(h.graph)
    red = h.red
    out = [m for m in iter_perfect_matchings(h.graph) if sum(1 for e in m if e in red) % 2 == 1]
    return sorted(Matching(m) for m in out)


@lru_cache(maxsize=32)
def _odd_cycles(g: Graph) -> tuple[Cycle, ...]:
    adj = [set(a) for a in g.adjacency]
    found = []
    for s in range(g.n):
        path = [s]
        on_path = {s}

        def rec(v):
            for w in sorted(adj[v]):
                if w <= s or w in on_path:
                    continue
                path.append(w)
                on_path.add(w)
                t = len(path)
                if t >= 3 and t % 2 == 1 and s in adj[w] and path[1] < w:
                    found.append(Cycle(tuple(path)))
                rec(w)
                path.pop()
                on_path.discard(w)

        rec(s)
    return tuple(sorted(found, key=lambda c: (c.length, c.vertices)))


def enumerate_odd_cycles(g: Graph, length_filter: Optional[int] = None) -> list[Cycle]:
    """All odd cycles of ``g``, each once, ordered by (length, canonical sequence)."""
    if length_filter is not None and length_filter % 2 == 0:
        raise InputError("length_filter must be odd")
    cycles = _odd_cycles(g)
    if length_filter is None:
        return list(cycles)
    return [c for c in cycles if c.length == length_filter]


def enumerate_cycles_of_length(g: Graph, length: int) -> list[Cycle]:
    """All cycles of a given length (either parity), canonical and sorted."""
    if length < 3:
        raise InputError("cycles have length at least 3")
    adj = [set(a) for a in g.adjacency]
    found = []
    for s in range(g.n):
        path = [s]

        def rec(v):
            if len(path) == length:
                if s in adj[v] and path[1] < path[-1]:
                    found.append(Cycle(tuple(path)))
                return
            for w in sorted(adj[v]):
                if w > s and w not in path:
                    path.append(w)
                    rec(w)
                    path.pop()

        rec(s)
    return sorted(found)


def cycle_to_matching(c: Cycle, g: Graph, orientation: int = 0) -> Matching:
    """Map an odd cycle of ``g`` to an odd-red perfect matching of its double.

    ``orientation`` 0 follows the stored vertex order, 1 the reverse.
    """
    if not c.is_odd:
        raise InputError("cycle_to_matching needs an odd cycle")
    if not c.in_graph(g):
        raise InputError("cycle is not in the graph")
    if orientation not in (0, 1):
        raise InputError("orientation must be 0 or 1")
    n = g.n
    seq = c.vertices if orientation == 0 else tuple(reversed(c.vertices))
    t = len(seq)
    edges = [norm_edge(seq[i], n + seq[(i + 1) % t]) for i in range(t)]
    on = set(seq)
    edges.extend((v, n + v) for v in range(n) if v not in on)
    return Matching(tuple(edges))


def matching_to_cycle_cover(m: Matching, h: RedBlueGraph) -> frozenset:
    """Project a perfect matching of a doubled graph back onto the base graph.

    Each edge ``{u+, w-}`` becomes the arc ``u -> w``; the arcs form a
    permutation whose nontrivial cycles are returned (2-cycles flagged as
    degenerate by ``Cycle.degenerate``).
    """
    if not m.is_perfect(h.graph):
        raise InputError("matching is not perfect")
    if h.n % 2:
        raise InputError("not a doubled graph")
    n = h.n // 2
    succ = {}
    for a, b in m.edges:
        if not (a < n <= b):
            raise InputError(f"edge {(a, b)} does not join V+ to V-")
        succ[a] = b - n
    seen = set()
    cycles = set()
    for v in range(n):
        if v in seen or succ[v] == v:
            seen.add(v)
            continue
        seq = []
        w = v
        while w not in seen:
            seen.add(w)
            seq.append(w)
            w = succ[w]
        cycles.add(Cycle(tuple(seq)))
    return frozenset(cycles)
