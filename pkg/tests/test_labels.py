from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oddred.errors import InputError, SizeLimitError
from oddred.graphs import (
    Graph, RedBlueGraph, complete_bipartite, complete_graph, doubled_graph, enumerate_odd_red_perfect_matchings,
    norm_edge,
)
from oddred.labels import (
    DegreeViolation, Inside, LabelViolation, Labeling, NegativeEntry, brute_force_max_cut, build_counterexample,
    cubic_graphs, enumerate_labelings, label_edge_set, q_membership, reduce_maxcut_to_separation,
)
from oddred.polyhedra import Outside, conv_membership
from oracles import max_cut

K4 = complete_graph(4)
K33 = Graph(6, tuple((u, v) for u in range(3) for v in range(3, 6)))


def _v(i):
    """Vertex id of v_i in the counterexample graph."""
    return i - 1


def test_labeling_validation():
    assert Labeling.from_bits("0110")[1] == 1 and Labeling.from_bits("0110")[0] == 0
    assert Labeling.from_bits("0110").bits == "0110"
    for bad in ("", "012", "1000"):
        with pytest.raises(InputError):
            Labeling.from_bits(bad)
    with pytest.raises(InputError):
        Labeling(0, 3)


@pytest.mark.parametrize("h, count", [
    (RedBlueGraph(complete_bipartite(2, 2)), 8),
    (build_counterexample()[0], 512),
    (RedBlueGraph(complete_bipartite(1, 1)), 2),
])
def test_labeling_counts(h, count):
    labs = list(enumerate_labelings(h))
    assert len(labs) == count == len(set(labs))
    assert all(L.ones % 2 == (h.n // 2) % 2 for L in labs)
    assert [L.mask for L in labs] == sorted(L.mask for L in labs)


def test_single_edge_labelings():
    labs = list(enumerate_labelings(RedBlueGraph(complete_bipartite(1, 1))))
    assert {L.bits for L in labs} == {"01", "10"}


def test_label_edge_set_examples():
    h = RedBlueGraph(complete_bipartite(2, 2), {(0, 2)})
    ones = Labeling.from_bits("1111")
    assert label_edge_set(h, ones) == frozenset(e for e in h.edges if not h.is_red(e))
    # a single flip changes parity, so flip the whole left side
    es = label_edge_set(h, Labeling.from_bits("0011"))
    assert es == {(0, 2)}
    with pytest.raises(InputError):
        label_edge_set(h, Labeling.from_bits("11"))


def test_cut_labelings_on_reduction_instance():
    inst = reduce_maxcut_to_separation(K4, 4)
    h, n = inst.graph, 4
    for S in range(1 << n):
        bits = "".join(str((S >> v) & 1) for v in range(n)) * 2
        L = Labeling.from_bits(bits)
        cut = sum(1 for u, v in K4.edges if ((S >> u) & 1) != ((S >> v) & 1))
        es = label_edge_set(h, L)
        assert not any(h.is_red(e) for e in es)
        value = sum(x for e, x in zip(h.edges, inst.x) if e in es)
        assert value == inst.alpha * 2 * (len(K4.edges) - cut)


def test_counterexample_shape():
    h, y = build_counterexample()
    assert h.n == 10 and len(h.edges) == 14 and len(h.red) == 3
    assert h.red == {norm_edge(_v(2), _v(7)), norm_edge(_v(4), _v(9)), norm_edge(_v(5), _v(10))}
    val = dict(zip(h.edges, y))
    assert val[norm_edge(_v(1), _v(6))] == Fraction(2, 3)
    assert h.graph.degree(_v(1)) == 2
    assert sum(val[e] for e in h.graph.delta([_v(1)])) == 1


def test_counterexample_in_q_not_in_p(derived):
    h, y = build_counterexample()
    res = q_membership(h, y)
    assert isinstance(res, Inside) and res.min_label_value >= 1
    pms = enumerate_odd_red_perfect_matchings(h)
    assert len(pms) == derived["counterexample"]["odd_red_pms"]
    assert isinstance(conv_membership([m.incidence(h.graph) for m in pms], y, h.edges), Outside)
    e37 = norm_edge(_v(3), _v(7))
    assert all(e37 not in m.edges for m in pms)


def test_odd_intersection_on_counterexample():
    h, _ = build_counterexample()
    G = nx.Graph(list(h.edges))
    for cyc in nx.simple_cycles(G):
        edges = {norm_edge(cyc[i], cyc[(i + 1) % len(cyc)]) for i in range(len(cyc))}
        if sum(h.is_red(e) for e in edges) % 2:
            for L in enumerate_labelings(h):
                assert len(edges & label_edge_set(h, L)) % 2 == 1


def test_q_membership_other_outcomes():
    h = RedBlueGraph(complete_bipartite(1, 1))
    assert isinstance(q_membership(h, (-1,)), NegativeEntry)
    assert isinstance(q_membership(h, (Fraction(1, 2),)), DegreeViolation)
    blue = RedBlueGraph(complete_bipartite(1, 1))
    res = q_membership(blue, (1,))
    assert isinstance(res, LabelViolation) and res.labeling.bits == "01" and res.value == 0
    with pytest.raises(InputError):
        q_membership(h, (1, 1))
    big = RedBlueGraph(complete_bipartite(13, 13))
    with pytest.raises(SizeLimitError):
        q_membership(big, (0,) * len(big.edges))


@pytest.mark.parametrize("g", [complete_graph(3), complete_graph(4), complete_graph(5)])
def test_p_inside_q(g):
    h = doubled_graph(g)
    for m in enumerate_odd_red_perfect_matchings(h):
        assert isinstance(q_membership(h, m.incidence(h.graph)), Inside)


def test_threads_agree():
    inst = reduce_maxcut_to_separation(cubic_graphs(8)[0], 9)
    one = q_membership(inst.graph, inst.x, threads=1)
    many = q_membership(inst.graph, inst.x, threads=4)
    assert one == many


def test_reduction_examples():
    inst = reduce_maxcut_to_separation(K4, 4)
    assert inst.alpha == Fraction(1, 6)
    vals = {(inst.graph.is_red(e), x) for e, x in zip(inst.graph.edges, inst.x)}
    assert vals == {(True, Fraction(1, 2)), (False, Fraction(1, 6))}
    assert isinstance(q_membership(inst.graph, inst.x), LabelViolation)
    assert reduce_maxcut_to_separation(K33, 7).alpha == Fraction(1, 6)


def test_reduction_rejects():
    with pytest.raises(InputError):
        reduce_maxcut_to_separation(complete_graph(5), 3)
    with pytest.raises(InputError):
        reduce_maxcut_to_separation(K4, 5)
    with pytest.raises(InputError):
        reduce_maxcut_to_separation(K4, -1)


def test_reduction_point_in_pm_polytope():
    for g in cubic_graphs(6) + cubic_graphs(8):
        for k in range(len(g.edges) - 1):
            inst = reduce_maxcut_to_separation(g, k)
            assert inst.alpha <= Fraction(1, 6)
            deg = [Fraction(0)] * inst.graph.n
            for (u, v), x in zip(inst.graph.edges, inst.x):
                deg[u] += x
                deg[v] += x
            assert set(deg) == {1}


def test_max_cut(derived):
    assert brute_force_max_cut(K4) == 4 == derived["max_cut"]["K4"]
    assert brute_force_max_cut(K33) == 9 == derived["max_cut"]["K33"]
    assert brute_force_max_cut(Graph(2, ((0, 1),))) == 1
    assert brute_force_max_cut(Graph(1, ())) == 0
    with pytest.raises(SizeLimitError):
        brute_force_max_cut(Graph(25, ()))


@given(st.integers(2, 9), st.floats(0.1, 0.9), st.integers(0, 10 ** 6))
@settings(max_examples=40, deadline=None)
def test_max_cut_matches_oracle(n, p, seed):
    g = nx.gnp_random_graph(n, p, seed=seed)
    edges = tuple(sorted(tuple(sorted(e)) for e in g.edges()))
    assert brute_force_max_cut(Graph(n, edges)) == max_cut(n, edges)


def test_cubic_graph_counts():
    assert [len(cubic_graphs(n)) for n in (4, 6, 8)] == [1, 2, 5]
    assert len(cubic_graphs(8, connected=False)) == 6
    assert cubic_graphs(5) == [] and cubic_graphs(2) == []
    for g in cubic_graphs(8, connected=False):
        assert all(g.degree(v) == 3 for v in range(8))


def _check_reduction(g):
    best = brute_force_max_cut(g)
    for k in range(len(g.edges) - 1):
        inst = reduce_maxcut_to_separation(g, k)
        res = q_membership(inst.graph, inst.x)
        assert isinstance(res, LabelViolation) == (best >= k), (g.edges, k)
        if isinstance(res, LabelViolation):
            es = label_edge_set(inst.graph, res.labeling)
            assert not (es & inst.graph.red)


def test_reduction_small_cubic():
    for nv in (4, 6, 8):
        for g in cubic_graphs(nv, connected=False):
            _check_reduction(g)


@pytest.mark.slow
def test_reduction_ten_vertex_cubic():
    graphs = cubic_graphs(10, connected=False)
    assert len(graphs) == 21 and len(cubic_graphs(10)) == 19
    for g in graphs:
        _check_reduction(g)


def test_red_pair_parity_on_reduction():
    for g in cubic_graphs(6):
        inst = reduce_maxcut_to_separation(g, 5)
        for L in enumerate_labelings(inst.graph):
            es = label_edge_set(inst.graph, L)
            if es & inst.graph.red:
                assert sum(x for e, x in zip(inst.graph.edges, inst.x) if e in es) >= 1
