import pytest

from gorcontract.cover import (
    Edge, Marking, TropCover, Vertex, build_cover_graph, contracted_subcurve_genus,
    preimage_is_connected, validate_cover,
)
from gorcontract.io import load_fixture


def two_vertex(b1, b2, ramified, mu=(1,)):
    g = (b1 + b2 - 2) // 2
    marks = tuple(Marking(f"z{j}", m) for j, m in enumerate(mu))
    return TropCover(g, mu, (Vertex("v1", b1), Vertex("v2", b2, marks)),
                     (Edge("e", ("v1", "v2"), ramified),))


def codes(rep):
    return {v.code for v in rep.violations}


def test_figure_cover_passes():
    rep = validate_cover(two_vertex(5, 1, True))
    assert rep.ok
    assert rep.vertex_genera == {"v1": 2, "v2": 0}


def test_single_vertex():
    T = TropCover(3, (2,), (Vertex("v", 8, (Marking("z", 2),)),), ())
    assert validate_cover(T).vertex_genera == {"v": 3}
    G = build_cover_graph(T)
    assert [v.genus for v in G.vertices] == [3] and G.genus == 3


def test_parity_failure_names_vertex():
    rep = validate_cover(two_vertex(5, 1, False))
    assert not rep.ok
    assert "parity" in codes(rep)
    bad = [v for v in rep.violations if v.code == "parity"]
    assert bad[0].ids == ("v1",)


@pytest.mark.parametrize("T, code", [
    (TropCover(2, (1,), (Vertex("a", 6, (Marking("z", 1),)), Vertex("b", 0)), ()), "not-a-tree"),
    (TropCover(2, (1,), (Vertex("a", 4, (Marking("z", 1),)),), ()), "branch-sum"),
    (TropCover(2, (0,), (Vertex("a", 6, (Marking("z", 0),)),), ()), "mu-sum"),
    (TropCover(2, (1, 0), (Vertex("a", 6, (Marking("z", 1),)),), ()), "mu-length"),
    (TropCover(1, (0,), (Vertex("a", 4, (Marking("z", 0),)),), ()), "genus"),
])
def test_validation_errors(T, code):
    rep = validate_cover(T)
    assert not rep.ok and code in codes(rep)


def test_cycle_rejected():
    T = TropCover(2, (1,), (Vertex("a", 2, (Marking("z", 1),)), Vertex("b", 2), Vertex("c", 2)), (
        Edge("x", ("a", "b")), Edge("y", ("b", "c")), Edge("w", ("c", "a"))))
    assert "not-a-tree" in codes(validate_cover(T))


def test_star_cover_graph():
    T, _, _ = load_fixture("ex2_9_bare")
    assert validate_cover(T, min_genus=1).ok
    G = build_cover_graph(T)
    assert len(G.vertices) == 7 and len(G.edges) == 6
    assert G.b1 == 0 and G.genus == 1
    assert sorted(v.genus for v in G.vertices) == [0] * 6 + [1]


def test_two_tacnode_cover_is_a_cycle():
    T, _, _ = load_fixture("ex5_5")
    G = build_cover_graph(T)
    assert G.b1 == 1 and G.genus == 3
    assert sorted(v.genus for v in G.vertices) == [0, 0, 1, 1]
    assert len(G.edges) == 4
    # each genus-0 vertex sits over the split vertex
    split = [v.id for v in T.vertices if T.is_split(v.id)]
    assert {v.base for v in G.vertices if v.genus == 0} == set(split)


def test_edge_lift_counts_and_legs():
    T, _, _ = load_fixture("ex2_10")
    G = build_cover_graph(T)
    ram = sum(1 for e in T.edges if e.ramified)
    assert len(G.edges) == ram + 2 * (len(T.edges) - ram)
    assert sum(1 for leg in G.legs if leg.kind == "ramification") == 2 * T.genus + 2
    marks = [leg for leg in G.legs if leg.kind == "marking"]
    assert len(marks) == 2 * len(T.mu)
    assert build_cover_graph(T) == G


def test_contracted_subcurve_genus():
    T, _, _ = load_fixture("ex2_10")
    G = build_cover_graph(T)
    assert contracted_subcurve_genus(T, G, ["mid"]) == 2
    T5, _, _ = load_fixture("ex5_5")
    G5 = build_cover_graph(T5)
    top = [v.id for v in T5.vertices if v.branch_count == 4][0]
    assert contracted_subcurve_genus(T5, G5, [top]) == 1
    split = [v.id for v in T5.vertices if T5.is_split(v.id)][0]
    assert contracted_subcurve_genus(T5, G5, [split]) == 0
    assert not preimage_is_connected(T5, G5, [split])
    with pytest.raises(ValueError):
        contracted_subcurve_genus(T, G, [])
