import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from p3vc.graph import (
    Graph,
    GraphParseError,
    Path3,
    Satellite,
    Tail,
    components_profile,
    detect_structures,
    find_p3,
    is_packing,
    maximal_p3_packing,
    neighborhood,
    packing_vertices,
    parse_graph,
    second_neighborhood,
    serialize_graph,
)
from p3vc.oracle import path_graph

from .conftest import complete, graphs


def test_parse_path():
    g = parse_graph("p edge 3 2\ne 1 2\ne 2 3\n")
    assert g.n == 3 and g.m == 2
    assert sorted(g.edges()) == [(0, 1), (1, 2)]


def test_parse_triangle_with_comments():
    g = parse_graph("c a triangle\np edge 3 3\ne 1 2\ne 2 3\ne 1 3\n")
    assert g.m == 3 and all(g.degree(v) == 2 for v in g.vertices())


def test_duplicate_edges_collapse():
    g = parse_graph("p edge 2 2\ne 1 2\ne 2 1\n")
    assert g.m == 1


@pytest.mark.parametrize(
    "text, line",
    [
        ("p edge 2 1\ne 1 1\n", 2),
        ("p edge 2 1\ne 1 3\n", 2),
        ("p graph 2 1\ne 1 2\n", 1),
        ("p edge 2\n", 1),
        ("e 1 2\n", 1),
        ("p edge 2 1\nx 1 2\n", 2),
    ],
)
def test_parse_errors_name_line(text, line):
    with pytest.raises(GraphParseError) as err:
        parse_graph(text)
    assert err.value.line == line
    assert f"line {line}" in str(err.value)


def test_self_loop_message():
    with pytest.raises(GraphParseError, match="self-loop"):
        parse_graph("p edge 2 1\ne 1 1")


def test_edge_count_mismatch():
    with pytest.raises(GraphParseError):
        parse_graph("p edge 3 2\ne 1 2\n")


@given(graphs())
def test_serialize_roundtrip(g):
    text = serialize_graph(g)
    assert parse_graph(text) == g
    assert serialize_graph(parse_graph(text)) == text


def test_serialize_is_sorted_and_one_indexed():
    g = Graph.from_edges(4, [(3, 2), (1, 0), (0, 3)])
    assert serialize_graph(g) == "p edge 4 3\ne 1 2\ne 1 4\ne 3 4\n"


def test_graph_rejects_asymmetric():
    with pytest.raises(ValueError):
        Graph((frozenset({1}), frozenset()))


def test_delete_returns_label_map():
    g = path_graph(5)
    sub, labels = g.delete({1, 3})
    assert labels == [0, 2, 4]
    assert sub.m == 0


def test_neighborhood_examples():
    p = path_graph(3)
    assert neighborhood(p, {1}) == {0, 2}
    assert neighborhood(p, {0, 1}, closed=True) == {0, 1, 2}
    assert neighborhood(complete(4), {0}) == {1, 2, 3}
    assert neighborhood(p, set()) == set()


@given(graphs(), st.data())
def test_neighborhood_properties(g, data):
    xs = data.draw(st.sets(st.sampled_from(range(g.n)))) if g.n else set()
    open_ = neighborhood(g, xs)
    assert neighborhood(g, xs, closed=True) == open_ | xs
    assert not open_ & xs


def test_second_neighborhood():
    assert second_neighborhood(path_graph(4), 0) == {2}
    assert second_neighborhood(complete(4), 0) == set()


def test_components_profile_examples():
    prof = components_profile(Graph.empty(4))
    assert prof.count == 4 and prof.by_size == {1: 4}
    prof = components_profile(Graph.from_edges(4, [(0, 1), (2, 3)]))
    assert prof.count == 2 and prof.by_size == {2: 2}
    prof = components_profile(Graph.from_edges(4, [(0, 1), (1, 2)]))
    assert prof.count == 2 and prof.by_size == {1: 1, 3: 1}


@given(graphs())
def test_components_partition_vertices(g):
    prof = components_profile(g)
    assert prof.count == sum(prof.by_size.values())
    assert sum(size * cnt for size, cnt in prof.by_size.items()) == g.n
    assert sorted(v for c in prof.components for v in c) == list(range(g.n))


def test_find_p3_examples():
    matching = Graph.from_edges(6, [(0, 1), (2, 3), (4, 5)])
    assert find_p3(matching) is None
    tri = complete(3)
    assert find_p3(tri) == Path3(1, 0, 2)
    star = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    assert find_p3(star).middle == 0


@given(graphs())
def test_find_p3_iff_max_degree_two(g):
    path = find_p3(g)
    assert (path is None) == (g.max_degree() <= 1)
    if path is not None:
        assert path.is_valid(g)


def test_maximal_packing_examples():
    assert maximal_p3_packing(path_graph(3)) == [Path3(0, 1, 2)]
    assert maximal_p3_packing(Graph.from_edges(6, [(0, 1), (2, 3), (4, 5)])) == []
    # greedy trace on P6: middle 1 takes (0, 1, 2); middle 4 takes (3, 4, 5)
    assert maximal_p3_packing(path_graph(6)) == [Path3(0, 1, 2), Path3(3, 4, 5)]


@given(graphs())
def test_maximal_packing_is_maximal(g):
    packing = maximal_p3_packing(g)
    assert is_packing(g, packing)
    assert find_p3(g, packing_vertices(packing)) is None
    assert maximal_p3_packing(g) == packing


# --------------------------------------------------- structure detection


def _naive_structures(g):
    """Direct re-scan of each definition over all vertex tuples."""
    V = list(g.vertices())
    closed = [g.adj[v] | {v} for v in V]
    tails = [
        (v, u, w)
        for v, u, w in itertools.permutations(V, 3)
        if g.degree(v) == 1 and g.has_edge(v, u) and g.degree(u) == 2 and g.has_edge(u, w)
    ]
    dominated = [(v, u) for v, u in itertools.permutations(V, 2) if g.has_edge(v, u) and closed[u] <= closed[v]]
    sats = [
        (v, p, s)
        for v, p, s in itertools.permutations(V, 3)
        if g.has_edge(v, p) and closed[p] - closed[v] == {s}
    ]
    chains = [
        (a, b, c, d)
        for a, b, c, d in itertools.permutations(V, 4)
        if g.has_edge(a, b) and g.has_edge(b, c) and g.has_edge(c, d)
        and g.degree(a) >= 3 and g.degree(b) == 2 and g.degree(c) == 2
    ]
    tri = [
        (v, a, b, c)
        for v, a, b, c in itertools.permutations(V, 4)
        if g.degree(v) == 3 and g.degree(a) == 1 and {a, b, c} == set(g.adj[v]) and b < c and g.has_edge(b, c)
    ]
    return sorted(tails), sorted(dominated), sorted(sats), sorted(chains), sorted(tri)


@settings(max_examples=150)
@given(graphs(max_n=9))
def test_detect_structures_matches_naive(g):
    rep = detect_structures(g)
    found = (
        sorted(map(tuple, rep.tails)),
        sorted(rep.dominated_pairs),
        sorted(map(tuple, rep.satellites)),
        sorted(map(tuple, rep.chains)),
        sorted(map(tuple, rep.triangle_pendants)),
    )
    assert found == _naive_structures(g)


def test_detect_examples():
    rep = detect_structures(path_graph(3))
    assert (1, 0) in rep.dominated_pairs
    rep = detect_structures(path_graph(4))
    assert Tail(0, 1, 2) in rep.tails and Tail(3, 2, 1) in rep.tails
    # v=0, p=1, q=2, s=3 with edges vp, vq, ps
    rep = detect_structures(Graph.from_edges(4, [(0, 1), (0, 2), (1, 3)]))
    assert Satellite(0, 1, 3) in rep.satellites


def test_chain_excludes_closed_loop():
    # triangle 0-1-2 plus pendant edges at 0: the walk 0,1,2,0 is not a chain
    g = Graph.from_edges(5, [(0, 1), (1, 2), (2, 0), (0, 3), (0, 4)])
    assert detect_structures(g).chains == []
