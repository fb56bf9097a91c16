from fractions import Fraction
from itertools import combinations

import pytest

from ltmax.exact import (
    ConfigTable,
    EnumerationBudget,
    ExactIntractable,
    PathTable,
    clique_bound_holds,
    clique_single_seed_sigma,
    exact_event_prob,
    exact_infection_prob,
    exact_probs_by_config_enum,
    exact_probs_by_threshold_enum,
    exact_sigma,
    exact_sigma_by_config_enum,
    exact_sigma_by_threshold_enum,
    num_configs,
)
from ltmax.graph import complete_graph, from_edges, generate_random_graph, path_graph, star_graph


def test_path_single_seed():
    g = path_graph(3)
    assert exact_sigma(g, [0]) == 2
    assert exact_sigma_by_config_enum(g, [0]) == 2
    assert exact_sigma_by_threshold_enum(g, [0]) == 2


def test_k4_values():
    g = complete_graph(4)
    assert exact_sigma(g, [0]) == Fraction(26, 9)
    assert exact_infection_prob(g, [0], 1) == Fraction(17, 27)
    assert exact_probs_by_config_enum(g, [0]) == [1] + [Fraction(17, 27)] * 3


def test_events():
    assert exact_event_prob(complete_graph(3), [0], [], 1) == Fraction(3, 4)
    assert exact_event_prob(path_graph(3), [0], [1], 2) == 0
    assert exact_event_prob(path_graph(3), [1], [1], 2) == 1
    assert exact_event_prob(path_graph(3), [2], [0, 1], 2) == 1


def test_clique_formula_small_values():
    assert [clique_single_seed_sigma(n) for n in range(1, 5)] == [1, 2, Fraction(5, 2), Fraction(26, 9)]
    assert (Fraction(26, 9)) ** 2 < 36 and clique_bound_holds(4)


@pytest.mark.parametrize("n", range(1, 7))
def test_clique_formula_matches_enumeration(n):
    assert clique_single_seed_sigma(n) == exact_sigma_by_config_enum(complete_graph(n), [0])


@pytest.mark.parametrize("seed", range(8))
def test_three_oracles_agree(seed):
    g = generate_random_graph(6, 0.5, seed)
    for r in (1, 2):
        for s in combinations(range(6), r):
            a = exact_sigma(g, s)
            assert a == exact_sigma_by_config_enum(g, s) == exact_sigma_by_threshold_enum(g, s)
    assert exact_probs_by_threshold_enum(g, [0]) == exact_probs_by_config_enum(g, [0])


def test_path_table_matches_config_table_with_slack_and_weights():
    g = from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (1, 3)], edge_weights={(0, 4): 5, (1, 3): 2})
    g = g.with_(slackness=[1, Fraction(1, 3), 1, Fraction(4, 5), Fraction(1, 2)], vertex_weight=[1, 2, 3, 1, Fraction(1, 2)])
    pt, ct = PathTable(g), ConfigTable(g)
    for s in ([0], [2], [1, 4], []):
        a = [Fraction(x, pt.denom) for x in pt.numerators(s)]
        b = [Fraction(x, ct.denom) for x in ct.numerators(s)]
        assert a == b


def test_directed_edges_point_one_way():
    g = from_edges(3, [(0, 1), (1, 2)], directed=True)
    assert exact_sigma(g, [0]) == 3
    assert exact_sigma(g, [2]) == 1


def test_threshold_enum_rejects_weighted_and_slack():
    g = path_graph(3).with_(slackness=[Fraction(1, 2)] * 3)
    with pytest.raises(ValueError):
        exact_sigma_by_threshold_enum(g, [0])


def test_budget_exceeded():
    with pytest.raises(ExactIntractable) as e:
        ConfigTable(complete_graph(7), EnumerationBudget(max_configs=1000))
    assert e.value.needed == num_configs(complete_graph(7))
    with pytest.raises(ExactIntractable):
        exact_sigma(complete_graph(8), [0], EnumerationBudget(max_walk_nodes=100))


def test_star_center_reaches_all():
    assert exact_sigma(star_graph(6), [0]) == 6
    # a leaf reaches the centre with probability 1/5
    assert exact_infection_prob(star_graph(6), [1], 0) == Fraction(1, 5)


def test_traces_partition_configurations():
    t = ConfigTable(complete_graph(4))
    for v in range(4):
        paths, inverse, w = t.traces(v)
        assert int(w.sum()) == t.denom
        assert all(p[0] == v for p in paths)
