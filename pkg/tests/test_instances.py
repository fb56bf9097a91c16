from fractions import Fraction

import pytest

from ltmax.cascade import estimate_sigma
from ltmax.exact import exact_infection_prob
from ltmax.graph import validate_graph
from ltmax.instances import (
    InstanceSpec,
    NonPositiveBudget,
    check_structure,
    gen_tight_directed,
    gen_tight_normalized_weighted,
    gen_tight_undirected,
    gen_tight_vertex_weighted,
    normalized_sigma_prediction,
    predicted_ratio_bounds,
    undirected_budget,
)
from ltmax.selection import ExactOracle, greedy_seeds, optimal_seeds


def test_directed_k2_m100_sizes():
    lg = gen_tight_directed(2, 100)
    assert lg.star_sizes == [100, 50, 25, 21] and lg.ell == 2
    assert sum(lg.star_sizes) == 196
    assert check_structure(lg) == [] and validate_graph(lg.graph) == []


def test_directed_k3_m9_total():
    assert sum(gen_tight_directed(3, 9).star_sizes) == 21


def test_directed_hubs_unreachable():
    lg = gen_tight_directed(3, 9)
    g = lg.graph
    for u in lg.u_ids:
        assert g.in_neighbors[u] == ()
        others = [x for x in lg.u_ids + lg.v_ids if x != u]
        assert exact_infection_prob(g, others, u) == 0
    for v in lg.v_ids:
        assert sorted(g.in_neighbors[v]) == sorted(lg.u_ids)


@pytest.mark.parametrize("k,m", [(2, 100), (3, 100), (4, 1000)])
def test_directed_greedy_and_optimum(k, m):
    lg = gen_tight_directed(k, m)
    o = ExactOracle(lg.graph)
    assert greedy_seeds(lg.graph, k, o).seeds == lg.v_ids[:k]
    best, val = optimal_seeds(lg.graph, k, o)
    assert list(best) == lg.u_ids and val == m * k - k


def test_predicted_bounds_directed():
    lower, upper = predicted_ratio_bounds(InstanceSpec("tight_directed", 2, 100))
    assert (lower, upper) == (Fraction(3, 4), Fraction(25, 33))
    lower, upper = predicted_ratio_bounds(InstanceSpec("tight_directed", 4, 1000))
    assert lower == Fraction(175, 256)
    # (1000 + 750 + 563 + 422) / 3996
    assert upper == Fraction(2735, 3996)


def test_predicted_upper_decreases_to_lower():
    ups = [predicted_ratio_bounds(InstanceSpec("tight_directed", 3, m))[1] for m in (10**2, 10**3, 10**4)]
    lower = predicted_ratio_bounds(InstanceSpec("tight_directed", 3, 100))[0]
    assert ups[0] > ups[1] > ups[2] > lower


def test_predicted_bounds_reject_undirected():
    with pytest.raises(ValueError):
        predicted_ratio_bounds(InstanceSpec("tight_undirected", 4, c=0.25))


def test_vertex_weighted_k2_m1024():
    lg = gen_tight_vertex_weighted(2, 1024)
    g = lg.graph
    w = [g.vertex_weight[v] for v in lg.v_ids]
    assert w[:2] == [1024, 512]
    assert all(x == 256 for x in w[2:-1]) and w[-1] <= 256
    assert sum(w) == 2044 == 1024 * 2 - 2 * 2
    assert all(len(c) == 2 for c in lg.clique_ids)
    assert check_structure(lg) == []


def test_vertex_weighted_total_large_m():
    lg = gen_tight_vertex_weighted(2, 10**4)
    assert sum(lg.graph.vertex_weight[v] for v in lg.v_ids) == 2 * 10**4 - 3 * 2
    ws = [lg.graph.vertex_weight[v] for v in lg.v_ids]
    assert ws == sorted(ws, reverse=True)


def test_normalized_edge_weights():
    lg = gen_tight_normalized_weighted(2, 16)
    g = lg.graph
    assert check_structure(lg) == []
    eps = Fraction(1, 10**12)
    for j, v in enumerate(lg.v_ids):
        dist = dict(g.choice_distribution(v))
        assert dist[lg.u_ids[0]] == 1 / (2 + (lg.star_sizes[j] - 1) * eps)


def test_normalized_mc_matches_prediction():
    lg = gen_tight_normalized_weighted(2, 16)
    pred = normalized_sigma_prediction(lg)
    est = estimate_sigma(lg.graph, lg.v_ids[:2], 100_000, 1)
    assert abs(est.mean - float(pred)) < 5 * est.std_error


def test_undirected_rejects_large_constant():
    with pytest.raises(NonPositiveBudget):
        gen_tight_undirected(InstanceSpec("tight_undirected", 2, c=100))


def test_undirected_k16_structure():
    spec = InstanceSpec("tight_undirected", 16, c=1)
    lg = gen_tight_undirected(spec)
    assert sum(lg.star_sizes) == undirected_budget(spec)
    assert lg.star_sizes == sorted(lg.star_sizes, reverse=True)
    assert check_structure(lg) == []
    g = lg.graph
    nv = len(lg.v_ids)
    for j, v in enumerate(lg.v_ids):
        assert g.deg(v) == 16 + lg.star_sizes[j] - 1
    for u in lg.u_ids:
        assert g.deg(u) == len(lg.clique_ids[0]) - 1 + nv


def test_undirected_small_scaled():
    lg = gen_tight_undirected(InstanceSpec("tight_undirected", 4, c=0.25))
    assert check_structure(lg) == [] and validate_graph(lg.graph) == []
