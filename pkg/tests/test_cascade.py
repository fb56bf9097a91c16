from fractions import Fraction

import numpy as np
import pytest

from ltmax.cascade import (
    INFINITE,
    LiveEdgeConfig,
    ThresholdAssignment,
    estimate_sigma,
    event_reaches_avoiding,
    live_edge_choices,
    live_reachable,
    reach_values,
    run_threshold_cascade,
    sample_live_config,
    sample_thresholds,
    sample_values,
    trace_reverse_path,
)
from ltmax.exact import clique_single_seed_sigma, exact_sigma
from ltmax.graph import complete_graph, from_edges, path_graph, philox, star_graph


def test_cascade_on_path_with_thresholds():
    g = path_graph(4)
    # vertex 1 needs both neighbours, vertex 2 needs one
    theta = ThresholdAssignment((1, 2, 1, 1))
    assert run_threshold_cascade(g, theta, [0]) == {0}
    assert run_threshold_cascade(g, theta, [3]) == {2, 3}
    assert run_threshold_cascade(g, theta, [0, 3]) == {0, 1, 2, 3}


def test_infinite_threshold_never_fires():
    g = star_graph(3)
    theta = ThresholdAssignment((INFINITE, 1, 1))
    assert run_threshold_cascade(g, theta, [1, 2]) == {1, 2}


def test_integer_thresholds_in_range():
    g = star_graph(5)
    rng = philox(3)
    for _ in range(200):
        t = sample_thresholds(g, rng)
        assert 1 <= t.theta[0] <= 4
        assert all(x == 1 for x in t.theta[1:])


def test_integer_thresholds_reject_weighted():
    g = from_edges(2, [(0, 1)], edge_weights={(0, 1): 2})
    with pytest.raises(ValueError):
        sample_thresholds(g, philox(0))
    assert sample_thresholds(g, philox(0), "continuous").mode == "continuous"


def test_trace_and_events():
    # 2 <- 1 <- 0, 0 has no live edge
    cfg = LiveEdgeConfig((None, 0, 1))
    assert trace_reverse_path(cfg, 2) == [2, 1, 0]
    assert live_reachable(cfg, [0]) == {0, 1, 2}
    assert event_reaches_avoiding(cfg, [0], [], 2)
    assert not event_reaches_avoiding(cfg, [0], [1], 2)
    # the hit vertex itself may lie in B
    assert event_reaches_avoiding(cfg, [1], [1], 2)
    assert event_reaches_avoiding(cfg, [2], [0], 2)


def test_trace_stops_on_cycle():
    cfg = LiveEdgeConfig((1, 0, 1))
    assert trace_reverse_path(cfg, 2) == [2, 1, 0]


def test_live_config_respects_slack():
    g = path_graph(3).with_(slackness=[Fraction(1, 10)] * 3)
    rng = philox(5)
    none = sum(sample_live_config(g, rng).choice[1] is None for _ in range(2000))
    assert 1700 < none < 1900


@pytest.mark.parametrize("method", ["forward", "live_edge", "reverse_walk"])
def test_estimates_match_exact(method):
    g = complete_graph(5)
    est = estimate_sigma(g, [0], 20_000, 11, method=method)
    exact = float(clique_single_seed_sigma(5))
    assert abs(est.mean - exact) < 5 * est.std_error
    assert est.samples == 20_000 and est.method == method


def test_estimate_weighted_slack_graph():
    g = from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)], edge_weights={(0, 3): 3}, vertex_weight=[1, 2, 1, 3])
    g = g.with_(slackness=[1, Fraction(7, 10), 1, Fraction(1, 2)])
    exact = float(exact_sigma(g, [0]))
    for method in ("forward", "live_edge", "reverse_walk"):
        est = estimate_sigma(g, [0], 40_000, 2, method=method)
        assert abs(est.mean - exact) < 5 * est.std_error


def test_zero_variance_has_zero_error():
    est = estimate_sigma(path_graph(2), [0, 1], 500, 0)
    assert est.mean == 2 and est.std_error == 0


def test_sampling_independent_of_workers():
    g = complete_graph(6)
    a = sample_values(g, [0, 1], 5000, 9, workers=1)
    b = sample_values(g, [0, 1], 5000, 9, workers=4)
    assert np.array_equal(a, b)


def test_prefix_stability():
    g = complete_graph(4)
    a = sample_values(g, [0], 3000, 1)
    b = sample_values(g, [0], 1500, 1)
    assert np.array_equal(a[:1500], b)


def test_reach_values_matches_scalar_reachability():
    g = star_graph(5)
    ch = live_edge_choices(g, 300, 4)
    vals = reach_values(ch, [1], np.ones(5))
    for i in range(300):
        cfg = LiveEdgeConfig(tuple(None if c == 5 else int(c) for c in ch[i]))
        assert vals[i] == len(live_reachable(cfg, [1]))
