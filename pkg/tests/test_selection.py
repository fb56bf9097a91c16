from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from ltmax.exact import exact_sigma
from ltmax.graph import complete_graph, generate_random_graph, path_graph, star_graph
from ltmax.instances import gen_tight_directed
from ltmax.selection import (
    CapExceeded,
    ExactOracle,
    MonteCarloOracle,
    approximation_base,
    approximation_report,
    greedy_seeds,
    lazy_greedy_seeds,
    optimal_seeds,
)


def test_base_values():
    assert approximation_base(1) == 1
    assert approximation_base(2) == Fraction(3, 4)
    assert approximation_base(3) == Fraction(19, 27)


def test_backends_agree():
    g = generate_random_graph(7, 0.5, 3)
    a, b = ExactOracle(g, backend="table"), ExactOracle(g, backend="paths")
    sets = [list(s) for r in range(4) for s in combinations(range(7), r)]
    assert a.sigma_many(sets) == b.sigma_many(sets)
    assert a.gains([1], [0, 2, 5]) == b.gains([1], [0, 2, 5])


def test_numerators_many_matches_single():
    o = ExactOracle(complete_graph(4))
    many = o.numerators_many([[0], [1, 2], []])
    assert many.tolist()[0] == o.numerators([0])
    assert many.tolist()[1] == o.numerators([1, 2])
    assert o.sigma([0]) == Fraction(26, 9)


def test_greedy_star_picks_centre():
    trace = greedy_seeds(star_graph(5), 2)
    assert trace.seeds[0] == 0
    assert trace.picks[0][1] == 5


def test_greedy_tie_break_smallest_id():
    assert greedy_seeds(complete_graph(5), 2).seeds == [0, 1]
    assert lazy_greedy_seeds(complete_graph(5), 2).seeds == [0, 1]


@pytest.mark.parametrize("seed", range(10))
def test_lazy_equals_plain(seed):
    g = generate_random_graph(7, 0.4, seed)
    for k in (1, 2, 3):
        assert lazy_greedy_seeds(g, k).seeds == greedy_seeds(g, k).seeds


def test_lazy_uses_fewer_calls():
    g = gen_tight_directed(3, 100).graph
    o1, o2 = ExactOracle(g), ExactOracle(g)
    plain, lazy = greedy_seeds(g, 3, o1), lazy_greedy_seeds(g, 3, o2)
    assert plain.seeds == lazy.seeds
    assert lazy.calls < plain.calls


@pytest.mark.parametrize("seed", range(6))
def test_branch_and_bound_equals_exhaustive(seed):
    g = generate_random_graph(7, 0.5, seed + 20)
    o = ExactOracle(g)
    for k in (1, 2, 3):
        assert optimal_seeds(g, k, o, method="exhaustive") == optimal_seeds(g, k, o, method="branch_and_bound")


def test_optimum_is_true_max():
    g = path_graph(5)
    best, val = optimal_seeds(g, 2)
    assert val == max(exact_sigma(g, s) for s in combinations(range(5), 2))
    assert exact_sigma(g, best) == val


def test_cap_enforced():
    g = complete_graph(6)
    with pytest.raises(CapExceeded):
        optimal_seeds(g, 3, cap=5, method="exhaustive")
    assert optimal_seeds(g, 3, cap=5)[1] == optimal_seeds(g, 3)[1]


def test_candidates_restrict_choices():
    g = star_graph(5)
    assert greedy_seeds(g, 1, candidates=[2, 3]).seeds == [2]
    assert optimal_seeds(g, 2, candidates=[1, 2, 3])[0] == (1, 2)
    with pytest.raises(ValueError):
        greedy_seeds(g, 3, candidates=[1, 2])


def test_directed_tight_report():
    lg = gen_tight_directed(2, 100)
    rep = approximation_report(lg.graph, 2)
    assert rep.ratio == Fraction(25, 33)
    assert rep.base == Fraction(3, 4)
    assert rep.surplus == Fraction(1, 132)
    assert rep.greedy == lg.v_ids[:2]
    assert list(rep.optimal) == lg.u_ids


def test_monte_carlo_oracle_common_numbers():
    g = complete_graph(5)
    o = MonteCarloOracle(g, 4000, 1)
    assert o.sigma([0]) == o.sigma([0])
    gains = o.gains([0], [1, 2])
    assert gains[0] == pytest.approx(o.sigma([0, 1]) - o.sigma([0]))
    assert greedy_seeds(g, 2, o).seeds[0] in range(5)
    with pytest.raises(ValueError):
        lazy_greedy_seeds(g, 2, o)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 6), st.floats(0.2, 0.9))
def test_greedy_within_base_of_optimum(seed, n, p):
    g = generate_random_graph(n, p, seed)
    for k in range(1, min(3, n) + 1):
        o = ExactOracle(g)
        sg = o.sigma(lazy_greedy_seeds(g, k, o).seeds)
        assert sg >= approximation_base(k) * optimal_seeds(g, k, o)[1]
