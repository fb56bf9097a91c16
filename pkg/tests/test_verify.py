from fractions import Fraction

import pytest

from ltmax import verify as V
from ltmax.graph import complete_graph, path_graph


@pytest.fixture(scope="module")
def small():
    return V.build_corpus(1, max_n=5, random_count=6)


def test_connected_graph_counts():
    assert [len(V.labeled_connected_graphs(n)) for n in range(1, 5)] == [1, 1, 4, 38]


def test_corpus_contents():
    c = V.build_corpus(1)
    tags = [t for _, t in c.graphs]
    assert sum(t.startswith("random:") for t in tags) == 200
    assert sum(t.startswith("clique:") for t in tags) == 7
    assert {g.n for g, t in c.graphs if t.startswith("random:")} == {5, 6, 7}
    assert [t for _, t in V.build_corpus(1).graphs] == tags
    assert [t for _, t in V.build_corpus(2).graphs] != tags


@pytest.mark.parametrize(
    "check",
    [
        V.check_oracle_agreement,
        V.check_live_edge_equivalence,
        V.check_negative_correlation,
        V.check_escape_bounds,
        V.check_degree_bound,
        V.check_submodularity,
        V.check_surplus,
    ],
)
def test_corpus_checks_pass(small, check):
    res = check(small)
    assert res.instances > 0
    assert res.status == "pass", res.violations[:3]


def test_coverage_bridge_small(small):
    res = V.check_coverage_bridge(small, lemma_instances=30)
    assert res.status == "pass"


def test_decomposition_small(small):
    res = V.check_intersection_decomposition(small, count=5)
    assert res.instances == 5 and res.status == "pass"


def test_clique_check_small():
    res = V.check_clique_bound(n_max=50, brute_max=5, mc_n=30, samples=20_000)
    assert res.status == "pass"


def test_escape_tight_on_triangle():
    k3 = complete_graph(3)
    assert V.escape_first_prob(k3, [0], 1, 2) == Fraction(1, 2)
    assert V.escape_second_prob(k3, [0], 1, 2) == Fraction(1, 2)


def test_negative_correlation_sides():
    marg, cond = V.negative_correlation_sides(complete_graph(4), [0], [], [], 1, 2)
    assert cond <= marg
    # 2 is only reached through 1, which A = {1} blocks
    _, cond = V.negative_correlation_sides(path_graph(3), [1], [], [], 0, 2)
    assert cond is None


def test_surplus_target():
    assert V.surplus_target(2) == Fraction(3, 4) + Fraction(1, 512000)
    assert V.surplus_target(1) == 1


def test_directed_tight_small():
    res = V.check_directed_tight([(2, 100)])
    assert res.status == "pass"
    assert res.details["k=2,m=100"]["ratio"] == "25/33"


def test_check_result_dict():
    d = V.CheckResult("x", 3, [{"a": 1}]).as_dict()
    assert d["status"] == "fail" and d["instances"] == 3 and list(d)[:4] == ["check", "instances", "violations", "status"]


def test_report_independent_of_threads():
    a = V.report_json(V.run_suite("submodularity", 1, max_n=4, threads=1))
    b = V.report_json(V.run_suite("submodularity", 1, max_n=4, threads=3))
    assert a == b


def test_unknown_check():
    with pytest.raises(KeyError):
        V.run_suite("nope", 1, max_n=3)


def test_negative_correlation_worked_examples():
    marg, cond = V.negative_correlation_sides(path_graph(3), [0], [], [], 1, 2)
    assert (marg, cond) == (Fraction(1, 2), Fraction(1, 2))
    marg, cond = V.negative_correlation_sides(complete_graph(3), [0], [], [], 1, 2)
    assert (marg, cond) == (Fraction(3, 4), Fraction(1, 2))
    assert V.negative_correlation_sides(complete_graph(4), [1], [], [], 1, 2) == (1, 1)


def test_escape_path_example():
    assert V.escape_first_prob(path_graph(3), [0], 2, 1) == 0
