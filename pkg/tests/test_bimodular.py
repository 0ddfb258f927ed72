import json
import random
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from oddred.bimodular import (
    BimodularSystem, bimodular_bounds_hold, bimodular_representation, build_bimodular_system, check_bimodularity,
    integral_solutions, lift_point, translate_facet,
)
from oddred.complexity import random_integral_image, to_matrix
from oddred.errors import InputError, SizeLimitError
from oddred.graphs import (
    IDENTITY, Graph, RedBlueGraph, complete_bipartite, complete_graph, doubled_graph, enumerate_odd_red_perfect_matchings,
)
from oddred.labels import build_counterexample
from oddred.oddcycle import CInducedSpec, build_c_induced
from oddred.polyhedra import Constraint
from oddred.transfer import TransferContext, canonical_transform
from oracles import fraction_det, fraction_rank

SINGLE = RedBlueGraph(complete_bipartite(1, 1), {(0, 1)})
TWO_EDGES = RedBlueGraph(Graph(4, ((0, 2), (1, 3)), ((0, 1), (2, 3))), {(0, 2)})


def _oracle_minors(matrix):
    r = fraction_rank(matrix)
    rows, cols = len(matrix), len(matrix[0])
    return {fraction_det([[matrix[i][j] for j in cs] for i in rs])
            for rs in combinations(range(rows), r) for cs in combinations(range(cols), r)}


def test_single_red_edge_system():
    s = build_bimodular_system(SINGLE)
    assert s.matrix == ((1, 0), (1, 0), (1, -2)) and s.rhs == (1, 1, 1)
    assert s.row_tags == ("degree:0", "degree:1", "parity")
    rep = check_bimodularity(s)
    assert rep.rank == 2 and set(rep.values) <= {-2, 0} and rep.ok


@pytest.mark.parametrize("h, shape", [
    (build_counterexample()[0], (11, 15)),
    (doubled_graph(complete_graph(3)), (7, 10)),
])
def test_shapes(h, shape):
    assert build_bimodular_system(h).shape == shape


def test_two_edge_example():
    rep = check_bimodularity(build_bimodular_system(TWO_EDGES))
    assert rep.ok and set(rep.values) == {-2, 0, 2}


def test_four_cycle_has_unit_minors():
    # degree rows of a bipartite graph are dependent, so maximal minors can skip y
    g = complete_bipartite(2, 2)
    s = build_bimodular_system(RedBlueGraph(g, {g.edges[0]}))
    rep = check_bimodularity(s)
    assert set(rep.violations) == {-1, 1}
    assert set(rep.values) == _oracle_minors(s.matrix)
    assert rep.y_column_ok


def test_doubled_k3_has_minor_three():
    s = build_bimodular_system(doubled_graph(complete_graph(3)))
    rep = check_bimodularity(s)
    assert 3 in {abs(v) for v in rep.violations}
    assert rep.y_column_ok


def test_injected_violation():
    s = build_bimodular_system(SINGLE)
    bad = BimodularSystem(((1, 0), (1, 0), (1, -3)), s.rhs, s.row_tags, s.columns)
    rep = check_bimodularity(bad)
    assert -3 in rep.violations and not rep.ok


def test_size_cap():
    h = doubled_graph(complete_graph(5))
    with pytest.raises(SizeLimitError):
        check_bimodularity(build_bimodular_system(h))


@pytest.mark.parametrize("seed", range(6))
def test_minors_match_oracle(seed):
    rng = random.Random(seed)
    a, b = rng.randint(1, 3), rng.randint(1, 3)
    edges = [(u, a + v) for u in range(a) for v in range(b) if rng.random() < 0.7][:7]
    if not edges:
        edges = [(0, a)]
    g = Graph(a + b, tuple(edges), (tuple(range(a)), tuple(range(a, a + b))))
    h = RedBlueGraph(g, {e for e in edges if rng.random() < 0.5})
    s = build_bimodular_system(h)
    rep = check_bimodularity(s)
    assert set(rep.values) == _oracle_minors(s.matrix)
    assert set(rep.y_column_values) <= {-2, 0, 2}


def test_json_roundtrip():
    s = build_bimodular_system(doubled_graph(complete_graph(3)))
    assert BimodularSystem.from_json(json.loads(json.dumps(s.to_json()))) == s
    with pytest.raises(InputError):
        BimodularSystem.from_json({"matrix": []})


def test_lift_examples():
    # identity edges red: the red count is the number of fixed points
    h = doubled_graph(complete_graph(3), IDENTITY)
    by_count = {}
    for m in enumerate_odd_red_perfect_matchings(h):
        by_count.setdefault(m.red_count(h), m.incidence(h.graph))
    x1, x3 = by_count[1], by_count[3]
    assert lift_point(x1, h)[-1] == 0
    assert lift_point(x3, h)[-1] == 1
    mid = [Fraction(a + b, 2) for a, b in zip(x1, x3)]
    assert lift_point(mid, h)[-1] == Fraction(1, 2)
    with pytest.raises(InputError):
        lift_point((1,), h)


def test_translate_examples():
    h = doubled_graph(complete_graph(3))
    a = tuple(range(9))
    same = translate_facet(a, 0, 4, h)
    assert same.coeffs == a and same.rhs == 4
    face = translate_facet((0,) * 9, 2, 0, h)
    assert face.coeffs == h.red_vector and face.rhs == 1
    with pytest.raises(InputError):
        translate_facet((0,), 0, 0, h)


@pytest.mark.parametrize("g", [complete_graph(3), complete_graph(4), build_counterexample()[0]])
def test_integral_solutions_are_lifted_matchings(g):
    h = g if isinstance(g, RedBlueGraph) else doubled_graph(g)
    s = build_bimodular_system(h)
    lifted = {tuple(int(v) for v in lift_point(m.incidence(h.graph), h))
              for m in enumerate_odd_red_perfect_matchings(h)}
    assert set(integral_solutions(s, h)) == lifted


@pytest.mark.parametrize("n", [5, 7])
def test_matchings_lift_onto_system(n):
    h = doubled_graph(complete_graph(n))
    a = build_bimodular_system(h).as_array()
    for m in enumerate_odd_red_perfect_matchings(h):
        vec = np.array([int(v) for v in lift_point(m.incidence(h.graph), h)])
        assert (a @ vec == 1).all() and vec[-1] >= 0


@pytest.mark.parametrize("c", [-4, -2, 0, 2, 6])
def test_facet_correspondence_n5(c):
    g = complete_graph(5)
    ctx = TransferContext(g)
    t = canonical_transform(build_c_induced(CInducedSpec.standard(5)), ctx)
    h = ctx.doubled
    a = tuple(coef - Fraction(c, 2) * r for coef, r in zip(t.coeffs, h.red_vector))
    b = t.rhs - Fraction(c, 2)
    back = translate_facet(a, c, b, h)
    assert back == t
    lifted = Constraint(h.edges + (("y", "y"),), a + (c,), b)
    pms = enumerate_odd_red_perfect_matchings(h)
    tight_bimod = {m for m in pms if lifted.evaluate(lift_point(m.incidence(h.graph), h)) == b}
    tight_orig = {m for m in pms if t.value_on(m.edges) == t.rhs}
    assert tight_bimod == tight_orig and 0 < len(tight_orig) < len(pms)


@pytest.mark.parametrize("n, c", [(7, 2), (7, -2), (9, 2), (9, -2)])
def test_complexity_transfer(n, c):
    ctx = TransferContext(complete_graph(n))
    t = canonical_transform(build_c_induced(CInducedSpec.standard(n)), ctx)
    a = [coef - Fraction(c, 2) * r for coef, r in zip(t.coeffs, ctx.doubled.red_vector)]
    assert len(set(a)) <= 2 * len(set(t.coeffs))
    assert 2 * max(abs(v) for v in a) <= 3 * max(abs(v) for v in t.coeffs)


@pytest.mark.parametrize("n", [7, 9, 11])
def test_corollary_bounds_on_sampled_lifts(n):
    ctx = TransferContext(complete_graph(n))
    t = canonical_transform(build_c_induced(CInducedSpec.standard(n)), ctx)
    m = to_matrix(t, ctx)
    base = m.as_int_array()
    red = 1 - np.eye(n, dtype=np.int64)
    rng = np.random.default_rng(100 + n)
    checked = 0
    for i in range(2000):
        img = random_integral_image(base, rng, spread=3 + i % 20)
        c = int(rng.integers(-6, 7))
        rep = bimodular_representation(img, red, c)
        if rep is None:
            continue
        checked += 1
        assert all(bimodular_bounds_hold(rep.ravel(), n))
    assert checked > 500


def test_bimodular_representation_parity():
    img = np.array([[0, 3], [3, 0]])
    red = np.array([[0, 1], [1, 0]])
    assert bimodular_representation(img, red, 1) is None
    assert (bimodular_representation(img, red, 2) == np.array([[0, 2], [2, 0]])).all()
