from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ltmax.graph import (
    GraphFormatError,
    complete_graph,
    edgeless_graph,
    format_number,
    from_edges,
    generate_random_graph,
    parse_graph,
    path_graph,
    serialize_graph,
    star_graph,
    validate_graph,
)


def test_path_basics():
    g = path_graph(3)
    assert g.n == 3 and not g.directed
    assert [g.deg(v) for v in range(3)] == [1, 2, 1]
    assert g.undirected_edges() == [(0, 1), (1, 2)]
    assert g.uniform and g.unit_vertex_weights


def test_star_and_clique_degrees():
    assert [star_graph(5).deg(v) for v in range(5)] == [4, 1, 1, 1, 1]
    assert all(complete_graph(6).deg(v) == 5 for v in range(6))
    assert edgeless_graph(3).num_entries == 0


def test_choice_distribution_with_slack_and_weights():
    g = from_edges(3, [(0, 2), (1, 2)], directed=True, edge_weights={(0, 2): 3, (1, 2): 1})
    g = g.with_(slackness=[1, 1, Fraction(1, 2)])
    dist = dict(g.choice_distribution(2))
    assert dist == {None: Fraction(1, 2), 0: Fraction(3, 8), 1: Fraction(1, 8)}


def test_parse_full_format():
    text = """# comment
graph 3 directed
v 0 weight=2.5
v 2 slack=0.3
e 0 1 weight=2
e 2 1
candidates 0 2
"""
    g = parse_graph(text)
    assert g.directed and g.vertex_weight[0] == Fraction(5, 2)
    assert g.slackness[2] == Fraction(3, 10)
    assert g.in_neighbors[1] == (0, 2)
    assert g.edge_weight_of(0, 1) == 2
    assert g.candidate_list() == [0, 2]
    assert parse_graph(serialize_graph(g)) == g


@pytest.mark.parametrize(
    "text",
    [
        "",
        "graph x undirected\n",
        "graph 2 sideways\n",
        "graph 2 undirected\ne 0 5\n",
        "graph 2 undirected\ne 0 0\n",
        "graph 2 undirected\ne 0 1 weight=-1\n",
        "graph 2 undirected\nv 0 slack=2\n",
        "graph 2 undirected\nq 1\n",
    ],
)
def test_parse_rejects(text):
    with pytest.raises(GraphFormatError):
        parse_graph(text)


def test_parse_error_carries_line():
    with pytest.raises(GraphFormatError) as e:
        parse_graph("graph 2 undirected\n\ne 0 7\n")
    assert e.value.line == 3


def test_format_number():
    assert format_number(Fraction(5, 2)) == "2.5"
    assert format_number(Fraction(3)) == "3"
    assert format_number(Fraction(1, 3)) == "1/3"
    assert format_number(Fraction(-1, 8)) == "-0.125"


def test_random_graph_is_pure():
    assert generate_random_graph(7, 0.5, 42) == generate_random_graph(7, 0.5, 42)
    assert validate_graph(generate_random_graph(7, 0.5, 42)) == []


@st.composite
def graphs(draw):
    n = draw(st.integers(1, 7))
    directed = draw(st.booleans())
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v and (directed or u < v)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    weights = None
    if edges and draw(st.booleans()):
        weights = {e: Fraction(draw(st.integers(1, 9)), 4) for e in edges}
    vw = [Fraction(draw(st.integers(1, 20)), 8) for _ in range(n)]
    sl = [Fraction(draw(st.integers(1, 10)), 10) for _ in range(n)]
    return from_edges(n, edges, directed=directed, edge_weights=weights, vertex_weight=vw, slackness=sl)


@settings(max_examples=150, deadline=None)
@given(graphs())
def test_serialize_round_trip(g):
    assert validate_graph(g) == []
    assert parse_graph(serialize_graph(g)) == g


@settings(max_examples=100, deadline=None)
@given(graphs())
def test_choice_distribution_sums_to_one(g):
    for v in range(g.n):
        assert sum(p for _, p in g.choice_distribution(v)) == 1
