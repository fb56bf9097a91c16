"""Acceptance criteria 1-12 at full size.

Each test prints one ``CRITERION <n>: PASS|FAIL`` line to the terminal
(bypassing capture) before asserting.
"""

import time
from fractions import Fraction

import pytest

from ltmax import verify as V
from ltmax.graph import complete_graph

pytestmark = pytest.mark.acceptance


@pytest.fixture(scope="module")
def corpus():
    return V.build_corpus(1)


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\nCRITERION {n}: {'PASS' if ok else 'FAIL'} - {detail}")
        return ok

    return emit


def _timed(fn, *args, **kwargs):
    t0 = time.perf_counter()
    res = fn(*args, **kwargs)
    return res, time.perf_counter() - t0


def _summary(res, seconds=None):
    s = f"{res.check}: {res.instances} instances, {len(res.violations)} violations"
    return s + (f", {seconds:.1f}s" if seconds is not None else "")


def test_criterion_01_oracle_triad(corpus, report):
    res, dt = _timed(V.check_oracle_agreement, corpus, 4)
    ok = res.status == "pass" and dt < 120
    assert report(1, ok, _summary(res, dt)), res.violations[:3]


def test_criterion_02_live_edge_theorem(corpus, report):
    res = V.check_live_edge_equivalence(corpus, 4)
    assert report(2, res.status == "pass", _summary(res)), res.violations[:3]


def test_criterion_03_clique_lemma(report):
    res, dt = _timed(V.check_clique_bound, 1000, 7, 400, 10**5, 1)
    ok = res.status == "pass" and dt < 60
    detail = _summary(res, dt) + f", MC z={res.details['monte_carlo']['z']}"
    assert report(3, ok, detail), res.violations[:3]


def test_criterion_04_degree_bound(corpus, report):
    res = V.check_degree_bound(corpus, 4)
    assert report(4, res.status == "pass", _summary(res)), res.violations[:3]


def test_criterion_05_submodularity(corpus, report):
    res = V.check_submodularity(corpus, 4)
    assert report(5, res.status == "pass", _summary(res)), res.violations[:3]


def test_criterion_06_negative_correlation_and_escape(corpus, report):
    nc = V.check_negative_correlation(corpus, 4)
    esc = V.check_escape_bounds(corpus, 4)
    k3 = complete_graph(3)
    tight = V.escape_first_prob(k3, [0], 1, 2) == Fraction(1, 2) and V.escape_second_prob(k3, [0], 1, 2) == Fraction(1, 2)
    ok = nc.status == "pass" and esc.status == "pass" and tight
    assert report(6, ok, f"{_summary(nc)}; {_summary(esc)}; K3 equality {tight}"), (nc.violations[:2], esc.violations[:2])


def test_criterion_07_directed_tight(report):
    res, dt = _timed(V.check_directed_tight, V.DIRECTED_PARAMS)
    ok = res.status == "pass" and dt < 60
    detail = _summary(res, dt) + ", k=2 m=100 ratio " + res.details["k=2,m=100"]["ratio"]
    assert report(7, ok, detail), res.violations


def test_criterion_08_surplus(corpus, report):
    res = V.check_surplus(corpus, 4)
    assert report(8, res.status == "pass", _summary(res)), res.violations[:3]


def test_criterion_09_vertex_weighted(report):
    res = V.check_vertex_weighted_tight(2, 10**4, 10**5, 1)
    d = res.details
    detail = f"MC ratio {d['mc_ratio']} (limit 0.76), greedy {d['greedy']}, optimum {d['optimal']}"
    assert report(9, float(d["mc_ratio"]) <= 0.76, detail)


def test_criterion_10_coverage_bridge(corpus, report):
    res = V.check_coverage_bridge(corpus, 4, lemma_instances=500)
    assert report(10, res.status == "pass", _summary(res)), res.violations[:3]


def test_criterion_11_decomposition(corpus, report):
    res = V.check_intersection_decomposition(corpus, 50)
    ok = res.status == "pass" and res.instances == 50
    assert report(11, ok, _summary(res)), res.violations[:3]


def test_criterion_12_determinism(report):
    a = V.report_json(V.run_suite("all", 1, threads=1))
    b = V.report_json(V.run_suite("all", 1, threads=4))
    assert report(12, a == b, f"two full reports ({len(a)} bytes), threads 1 vs 4, identical={a == b}")
