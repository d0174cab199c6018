import csv

import pytest

from gorcontract.clfunc import solve_slopes
from gorcontract.cover import validate_cover
from gorcontract.halfint import HalfInt
from gorcontract.oracle import (
    EnumerationOverflow, EnumerationSpec, canonical_form, decorated_trees, enumerate_data,
    genus_two_ways, semigroup_delta, tree_hash, write_census,
)


def test_figure_enumeration(fixture):
    T, _, _ = fixture("fig1_case1")
    en = enumerate_data(T, EnumerationSpec(4, support=("v1",)))
    assert len(en.strict) == 1
    assert en.strict[0].slope(T.edge("e"), "v1") == HalfInt(-3)


def test_empty_support_gives_zero_function(fixture):
    T, _, _ = fixture("fig1_case2")
    en = enumerate_data(T, EnumerationSpec(4, support=()))
    assert [f.is_zero() for f in en.strict] == [True]


def test_example_datum_is_enumerated(fixture):
    T, f, _ = fixture("ex2_10")
    en = enumerate_data(T, EnumerationSpec(4), modes=("strict",))
    # edge lengths are reset to 1; compare slopes
    slopes = {tuple(g.edge_slopes[e] for e in T.edge_ids) for g in en.strict}
    assert tuple(f.edge_slopes[e] for e in T.edge_ids) in slopes


def test_overflow_guard(fixture):
    T, _, _ = fixture("ex2_10")
    with pytest.raises(EnumerationOverflow):
        enumerate_data(T, EnumerationSpec(8, limit=50))


def test_nonnegative_pruning_matches_filter():
    for T in decorated_trees(4):
        plain = enumerate_data(T, EnumerationSpec(6), modes=("strict",)).contractible_strict
        pruned = enumerate_data(T, EnumerationSpec(6, nonnegative=True), modes=("strict",)).strict
        assert [f.edge_slopes for f in plain] == [f.edge_slopes for f in pruned]


def test_solve_slopes_is_enumerated():
    for T in decorated_trees(4):
        en = enumerate_data(T, EnumerationSpec(8), modes=("strict",))
        found = {tuple(f.values[v] for v in T.vertex_ids) for f in en.strict}
        for f in en.strict:
            g = solve_slopes(T, f.support(T))
            assert tuple(g.values[v] for v in T.vertex_ids) in found
            assert g.edge_slopes == f.edge_slopes


@pytest.mark.parametrize("name, g", [("ex5_5", 3), ("smooth", 2), ("ex2_10", 4), ("ex2_9", 7)])
def test_genus_two_ways(fixture, name, g):
    T, f, lam = fixture(name)
    if f is None:
        from gorcontract.clfunc import truncate
        T, f = truncate(T, lam, -1)
    assert genus_two_ways(T, f) == (g, g)


def test_genus_two_ways_refuses_ribbons(fixture):
    T, f, _ = fixture("ex2_12")
    with pytest.raises(ValueError):
        genus_two_ways(T, f)


def test_semigroup_delta():
    assert semigroup_delta(3) == 2
    assert semigroup_delta(1) == 1
    assert [semigroup_delta(2 * g0 - 1) for g0 in (1, 2, 3, 4)] == [1, 2, 3, 4]
    assert semigroup_delta(5, contracted=False) == 2
    with pytest.raises(ValueError):
        semigroup_delta(2)


def test_decorated_trees_are_valid_and_distinct():
    trees = list(decorated_trees(4))
    assert all(validate_cover(T).ok for T in trees)
    keys = [canonical_form(T) for T in trees]
    assert len(keys) == len(set(keys))
    assert len({tree_hash(T) for T in trees}) == len(trees)


def test_canonical_form_ignores_ids(fixture):
    T, _, _ = fixture("ex2_10")
    renamed = T.with_changes(vertices=list(reversed(T.vertices)))
    assert canonical_form(renamed) == canonical_form(T)


def test_census(tmp_path):
    path = tmp_path / "census.csv"
    write_census(path, [["abc", "{}", "reduced", "2"]])
    rows = list(csv.reader(open(path)))
    assert rows[0] == ["tree_hash", "datum", "outcome", "deltas"] and rows[1][0] == "abc"
