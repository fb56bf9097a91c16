"""Executable checks of the model's lemmas and bounds over a reproducible corpus.

Every check returns a :class:`CheckResult`; :func:`run_suite` assembles them
into a JSON-ready report whose bytes depend only on the corpus seed and the
suite options (never on timing or thread count).
"""

from __future__ import annotations

import itertools
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from .cascade import estimate_sigma
from .coverage import (
    build_coverage_instance,
    check_coverage_lemmas,
    coverage_greedy,
    coverage_value,
    intersection_decomposition,
    random_coverage_instance,
)
from .exact import (
    ConfigTable,
    PathTable,
    ThresholdTable,
    clique_single_seed_sigma,
    exact_sigma_by_config_enum,
    weighted_total,
)
from .graph import Graph, complete_graph, from_edges, generate_random_graph, path_graph, philox, serialize_graph, star_graph
from .instances import (
    InstanceSpec,
    NonPositiveBudget,
    check_structure,
    gen_tight_directed,
    gen_tight_normalized_weighted,
    gen_tight_undirected,
    gen_tight_vertex_weighted,
    normalized_sigma_prediction,
    predicted_ratio_bounds,
)
from .selection import ExactOracle, MonteCarloOracle, approximation_base, greedy_seeds, lazy_greedy_seeds, optimal_seeds

SCHEMA = "ltmax/1"
SURPLUS_CONSTANT = 64000
DIRECTED_PARAMS = ((2, 100), (2, 1000), (3, 100), (3, 1000), (4, 100), (4, 1000))
MAX_WITNESSES = 20


# ---------------------------------------------------------------------------
# corpus


@dataclass
class Corpus:
    graphs: list[tuple[Graph, str]]
    master_seed: int

    def __len__(self):
        return len(self.graphs)

    def select(self, pred: Callable[[Graph, str], bool]) -> list[tuple[Graph, str]]:
        return [(g, t) for g, t in self.graphs if pred(g, t)]


def _connected(n: int, edges: Sequence[tuple[int, int]]) -> bool:
    adj = {v: set() for v in range(n)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    seen, stack = {0}, [0]
    while stack:
        for y in adj[stack.pop()]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == n


def labeled_connected_graphs(n: int) -> list[Graph]:
    pairs = list(itertools.combinations(range(n), 2))
    out = []
    for mask in range(1 << len(pairs)):
        edges = [p for i, p in enumerate(pairs) if mask >> i & 1]
        if _connected(n, edges):
            out.append(from_edges(n, edges))
    return out


def random_corpus_seeds(master_seed: int, count: int) -> list[int]:
    return [int(x) for x in philox(master_seed, 0xC0).integers(0, 2**63, size=count)]


def build_corpus(master_seed: int = 1, max_n: int = 7, random_count: int = 200, adversarial: bool = True) -> Corpus:
    """Labeled connected graphs (n <= 4), seeded random graphs (n in 5..7),
    cliques, paths, stars and the adversarial instances at desk size."""
    graphs: list[tuple[Graph, str]] = []
    for n in range(1, 5):
        for i, g in enumerate(labeled_connected_graphs(n)):
            graphs.append((g, f"connected:n={n}:{i}"))
    ns, ps = (5, 6, 7), (0.3, 0.5, 0.8)
    for i, seed in enumerate(random_corpus_seeds(master_seed, random_count)):
        n, p = ns[i % 3], ps[(i // 3) % 3]
        graphs.append((generate_random_graph(n, p, seed), f"random:n={n}:p={p}:seed={seed}"))
    for n in range(1, 8):
        graphs.append((complete_graph(n), f"clique:n={n}"))
    for n in range(2, 8):
        graphs.append((path_graph(n), f"path:n={n}"))
    for n in range(3, 8):
        graphs.append((star_graph(n), f"star:n={n}"))
    graphs = [(g, t) for g, t in graphs if g.n <= max_n]
    if adversarial:
        graphs.append((gen_tight_directed(2, 8).graph, "tight_directed:k=2:m=8"))
        graphs.append((gen_tight_directed(3, 9).graph, "tight_directed:k=3:m=9"))
        graphs.append((gen_tight_vertex_weighted(2, 1024).graph, "tight_vertex_weighted:k=2:m=1024"))
    return Corpus(graphs, master_seed)


def _plain_undirected(g: Graph) -> bool:
    """Undirected, no edge weights, slackness 1, unit vertex weights, all candidates."""
    return not g.directed and g.uniform and g.unit_vertex_weights and g.candidates is None


# ---------------------------------------------------------------------------
# results


@dataclass
class CheckResult:
    check: str
    instances: int = 0
    violations: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        return "pass" if not self.violations else "fail"

    def as_dict(self) -> dict:
        return {
            "check": self.check,
            "instances": self.instances,
            "violations": self.violations,
            "status": self.status,
            "details": self.details,
        }


def _merge(name: str, parts: Iterable[tuple[int, list]]) -> CheckResult:
    res = CheckResult(name)
    for count, viol in parts:
        res.instances += count
        res.violations.extend(viol)
    return res


def _map(fn, items, threads: int):
    if threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def _witness(g: Graph, tag: str, **values) -> dict:
    out = {"instance": tag, "graph": serialize_graph(g)}
    out.update({k: (str(v) if isinstance(v, Fraction) else v) for k, v in values.items()})
    return out


def _subsets(n: int, max_size: int) -> list[tuple[int, ...]]:
    return [c for r in range(max_size + 1) for c in itertools.combinations(range(n), r)]


# ---------------------------------------------------------------------------
# oracle agreement and the live-edge theorem


@lru_cache(maxsize=1024)
def _triad(g: Graph, max_seeds: int = 2):
    sets = _subsets(g.n, min(max_seeds, g.n))
    oracle = ExactOracle(g, backend="table")
    cfg = oracle.numerators_many(sets)
    thr_table = ThresholdTable(g)
    thr = [thr_table.numerators(s) for s in sets]
    saw_table = PathTable(g)
    saw = [saw_table.numerators(s) for s in sets]
    return sets, (cfg, oracle.denom), (thr, thr_table.denom), (saw, saw_table.denom)


def _triad_instance(item, per_vertex: bool):
    g, tag = item
    sets, (cfg, dc), (thr, dt), (saw, ds) = _triad(g)
    viol = []
    for i, s in enumerate(sets):
        if per_vertex:
            pc = [Fraction(int(x), dc) for x in cfg[i]]
            pt = [Fraction(int(x), dt) for x in thr[i]]
            if pc != pt:
                viol.append(_witness(g, tag, seeds=list(s), config=[str(x) for x in pc], threshold=[str(x) for x in pt]))
        else:
            a = weighted_total(g, cfg[i], dc)
            b = weighted_total(g, thr[i], dt)
            c = weighted_total(g, saw[i], ds)
            if not a == b == c:
                viol.append(_witness(g, tag, seeds=list(s), config=a, threshold=b, walks=c))
    return len(sets), viol


def _threshold_ready(g: Graph, t: str) -> bool:
    return g.uniform


def check_oracle_agreement(corpus: Corpus, threads: int = 1) -> CheckResult:
    """σ by self-avoiding walks, configuration and threshold enumeration agree exactly (|S| <= 2)."""
    items = corpus.select(_threshold_ready)
    return _merge("oracle_agreement", _map(lambda it: _triad_instance(it, False), items, threads))


def check_live_edge_equivalence(corpus: Corpus, threads: int = 1) -> CheckResult:
    """Per-vertex infection probabilities from thresholds equal those from live edges (|S| <= 2)."""
    items = corpus.select(_threshold_ready)
    return _merge("live_edge_equivalence", _map(lambda it: _triad_instance(it, True), items, threads))


# ---------------------------------------------------------------------------
# negative correlation and escape bounds


def _padded(sets: list[tuple[int, ...]], n: int) -> np.ndarray:
    width = max((len(x) for x in sets), default=0) or 1
    out = np.full((len(sets), width), n, dtype=np.int64)
    for i, x in enumerate(sets):
        out[i, : len(x)] = x
    return out


def _event_tables(t: ConfigTable, x: int, a_idx: np.ndarray, b_idx: np.ndarray):
    """Over the traces of x: E[a, b] = A_a ->_{B_b} x and the joint blocker
    positions of A_a ∪ B_b (x itself never blocks).  Column n of the position
    table is the padding slot and always reads as absent."""
    pos = t.positions(x)
    big = t.n + 1
    posx = pos.copy()
    posx[:, x] = big
    src = pos[:, a_idx].min(axis=2).T  # (nA, T); 0 when x is in A
    blk_a = posx[:, a_idx].min(axis=2).T
    blk_b = posx[:, b_idx].min(axis=2).T  # (nB, T)
    first = src[:, None, :]
    events = (first < big) & (first <= blk_b[None, :, :])
    blockers = np.minimum(blk_a[:, None, :], blk_b[None, :, :])
    return pos, events, blockers


def _neg_corr_instance(item, max_a: int = 2, max_b: int = 1):
    """Negative correlation and the two escape lemmas on one graph."""
    g, tag = item
    n = g.n
    t = ConfigTable(g)
    L = t.denom
    big = n + 1
    A_sets = [a for a in _subsets(n, max_a) if a]
    B_sets = _subsets(n, max_b)
    a_idx, b_idx = _padded(A_sets, n), _padded(B_sets, n)
    viol_nc, viol_e1, viol_e2 = [], [], []
    count_nc = count_e1 = count_e2 = 0
    float_ok = t.exact_float
    tables = {x: _event_tables(t, x, a_idx, b_idx) for x in range(n)}
    # E1[u][a, b] : A ->_B u
    E1 = {u: tables[u][1] for u in range(n)}
    W1 = {u: t.traces(u)[2] for u in range(n)}
    m1 = {u: E1[u].astype(np.float64 if float_ok else object) @ W1[u].astype(np.float64 if float_ok else object) for u in range(n)}
    for u in range(n):
        for v in range(n):
            if u == v:
                continue
            # E2[a, b] : {u} ->_{A ∪ B} v
            pos_v, _, blk_v = tables[v]
            pu = pos_v[:, u][None, None, :]
            E2 = (pu < big) & (pu <= blk_v)
            W = t.pair_weights(u, v)
            if float_ok:
                X = E1[u].astype(np.float64) @ W
                J = np.rint(X @ E2.astype(np.float64).transpose(0, 2, 1)).astype(np.int64)
                m2 = np.rint(E2.astype(np.float64) @ t.traces(v)[2].astype(np.float64)).astype(np.int64)
                mm1 = np.rint(m1[u]).astype(np.int64)
                lhs = mm1[:, :, None].astype(object) * m2[:, None, :].astype(object)
            else:
                Wo = W.astype(object)
                X = E1[u].astype(object) @ Wo
                J = X @ E2.astype(object).transpose(0, 2, 1)
                m2 = E2.astype(object) @ t.traces(v)[2].astype(object)
                mm1 = m1[u]
                lhs = mm1[:, :, None] * m2[:, None, :]
            rhs = J.astype(object) * L
            valid = m2[:, None, :] > 0
            count_nc += int(valid.sum())
            bad = np.argwhere(valid & (lhs < rhs))
            for a, b1, b2 in bad[:MAX_WITNESSES]:
                viol_nc.append(
                    _witness(
                        g, tag, A=list(A_sets[a]), B1=list(B_sets[b1]), B2=list(B_sets[b2]), u=u, v=v,
                        lhs=Fraction(int(mm1[a, b1]), L), rhs=Fraction(int(J[a, b1, b2]), int(m2[a, b2])),
                    )
                )
            if g.directed or g.edge_weight is not None or any(s != 1 for s in g.slackness):
                continue
            # second escape lemma: Pr(A -> u | {u} ->_A v) <= |A|/(|A|+1), u, v outside A
            b0 = B_sets.index(())
            for a, A in enumerate(A_sets):
                if u in A or v in A or m2[a, b0] == 0:
                    continue
                count_e2 += 1
                if J[a, b0, b0] * (len(A) + 1) > len(A) * m2[a, b0]:
                    viol_e2.append(_witness(g, tag, A=list(A), u=u, v=v, prob=Fraction(int(J[a, b0, b0]), int(m2[a, b0]))))
    if not (g.directed or g.edge_weight is not None or any(s != 1 for s in g.slackness)):
        b0 = B_sets.index(())
        for v in range(n):
            paths, _, w = t.traces(v)
            second = paths[:, 1] if n > 1 else np.full(len(w), n)
            for a, A in enumerate(A_sets):
                if v in A:
                    continue
                ev = E1[v][a, b0]
                for u in g.in_neighbors[v]:
                    count_e1 += 1
                    mask = ev & (second != u)
                    num = int(w[mask].sum()) if mask.any() else 0
                    if num * (len(A) + 1) > len(A) * L:
                        viol_e1.append(_witness(g, tag, A=list(A), v=v, u=u, prob=Fraction(num, L)))
    return (count_nc, viol_nc), (count_e1, viol_e1), (count_e2, viol_e2)


@lru_cache(maxsize=1)
def _neg_corr_cached(key):
    corpus, threads = key
    return _map(_neg_corr_instance, corpus, threads)


def _neg_corr_all(corpus: Corpus, threads: int):
    items = tuple(corpus.graphs)
    return _neg_corr_cached((items, threads))


def check_negative_correlation(corpus: Corpus, threads: int = 1) -> CheckResult:
    """Pr(A ->_{B1} u) >= Pr(A ->_{B1} u | {u} ->_{A∪B2} v), |A| <= 2, |B1|,|B2| <= 1."""
    return _merge("negative_correlation", [r[0] for r in _neg_corr_all(corpus, threads)])


def check_escape_bounds(corpus: Corpus, threads: int = 1) -> CheckResult:
    """Both |A|/(|A|+1) escape lemmas on the undirected, unweighted corpus graphs."""
    res = _merge("escape_bounds", [(r[1][0] + r[2][0], r[1][1] + r[2][1]) for r in _neg_corr_all(corpus, threads)])
    return res


def escape_first_prob(g: Graph, A: Iterable[int], v: int, u: int) -> Fraction:
    """Pr(A -> v and the live edge of v does not come from u)."""
    t = ConfigTable(g)
    A = tuple(sorted(set(A)))
    paths, _, w = t.traces(v)
    ev = t.event_vector(v, A, ())
    mask = ev & (paths[:, 1] != u)
    return Fraction(int(w[mask].sum()) if mask.any() else 0, t.denom)


def escape_second_prob(g: Graph, A: Iterable[int], u: int, v: int) -> Fraction | None:
    """Pr(A -> u | {u} ->_A v), or None when the condition has probability 0."""
    t = ConfigTable(g)
    A = tuple(sorted(set(A)))
    e1 = t.event_vector(u, A, ())
    e2 = t.event_vector(v, (u,), A)
    W = t.pair_weights(u, v)
    joint = e1.astype(np.float64) @ W @ e2.astype(np.float64)
    cond = t.traces(v)[2][e2].sum() if e2.any() else 0
    return None if cond == 0 else Fraction(int(round(joint)), int(cond))


def negative_correlation_sides(g: Graph, A, B1, B2, u: int, v: int) -> tuple[Fraction, Fraction | None]:
    """(Pr(A ->_{B1} u), Pr(A ->_{B1} u | {u} ->_{A∪B2} v)); the second is None on a null condition."""
    t = ConfigTable(g)
    A, B1, B2 = set(A), set(B1), set(B2)
    e1 = t.event_vector(u, A, B1)
    e2 = t.event_vector(v, {u}, A | B2)
    w1 = t.traces(u)[2]
    marg = Fraction(int(w1[e1].sum()) if e1.any() else 0, t.denom)
    joint = e1.astype(np.float64) @ t.pair_weights(u, v) @ e2.astype(np.float64)
    cond = t.traces(v)[2][e2].sum() if e2.any() else 0
    return marg, (None if cond == 0 else Fraction(int(round(joint)), int(cond)))


# ---------------------------------------------------------------------------
# degree bound, cliques


SLACKS = (Fraction(1), Fraction(7, 10), Fraction(3, 10))


def _degree_instance(item):
    g, tag = item
    count, viol = 0, []
    for theta in SLACKS:
        h = g.with_(slackness=[theta] * g.n, vertex_weight=[1] * g.n)
        oracle = ExactOracle(h)
        sig = oracle.sigma_many([[v] for v in range(g.n)])
        for v in range(g.n):
            count += 1
            if sig[v] > g.deg(v) + 1:
                viol.append(_witness(g, tag, slack=theta, v=v, sigma=sig[v], bound=g.deg(v) + 1))
    return count, viol


def check_degree_bound(corpus: Corpus, threads: int = 1) -> CheckResult:
    """σ({v}) <= deg(v)+1 for every vertex, slackness 1, 7/10 and 3/10."""
    items = corpus.select(lambda g, t: not g.directed and g.edge_weight is None)
    return _merge("degree_bound", _map(_degree_instance, items, threads))


def check_clique_bound(
    n_max: int = 1000, brute_max: int = 7, mc_n: int | None = 400, samples: int = 10**5, master_seed: int = 1
) -> CheckResult:
    """Closed form σ(K_n) satisfies σ² < 9n; equals brute force for small n; agrees with Monte Carlo."""
    res = CheckResult("clique_bound")
    for n in range(2, n_max + 1):
        res.instances += 1
        s = clique_single_seed_sigma(n)
        if not s * s < 9 * n:
            res.violations.append({"n": n, "sigma": str(s)})
    for n in range(1, brute_max + 1):
        res.instances += 1
        a = clique_single_seed_sigma(n)
        b = exact_sigma_by_config_enum(complete_graph(n), [0])
        if a != b:
            res.violations.append({"n": n, "formula": str(a), "enumeration": str(b)})
    if mc_n:
        res.instances += 1
        est = estimate_sigma(complete_graph(mc_n), [0], samples, master_seed)
        exact = clique_single_seed_sigma(mc_n)
        z = abs(est.mean - float(exact)) / est.std_error if est.std_error else math.inf
        res.details["monte_carlo"] = {
            "n": mc_n,
            "samples": samples,
            "mean": repr(est.mean),
            "std_error": repr(est.std_error),
            "formula": repr(float(exact)),
            "z": round(z, 6),
        }
        if z > 5:
            res.violations.append({"n": mc_n, "mean": repr(est.mean), "formula": repr(float(exact)), "z": z})
    return res


# ---------------------------------------------------------------------------
# submodularity and monotonicity


def _submod_instance(item, max_b: int = 3):
    g, tag = item
    n = g.n
    oracle = ExactOracle(g)
    sets = _subsets(n, min(max_b + 1, n))
    index = {frozenset(s): i for i, s in enumerate(sets)}
    nums = oracle.numerators_many([list(s) for s in sets]).astype(object)
    b = np.array(oracle._b, dtype=object)
    sig = nums @ b
    viol, count = [], 0
    for B in sets:
        if len(B) > max_b:
            continue
        Bs = frozenset(B)
        iB = index[Bs]
        for r in range(len(B) + 1):
            for A in itertools.combinations(B, r):
                As = frozenset(A)
                iA = index[As]
                # monotonicity: σ(A) <= σ(B)
                count += 1
                if sig[iA] > sig[iB]:
                    viol.append(_witness(g, tag, kind="monotone", A=list(A), B=list(B)))
                if As == Bs:
                    continue
                for v in range(n):
                    if v in Bs:
                        continue
                    iAv, iBv = index[As | {v}], index[Bs | {v}]
                    count += 1
                    if sig[iAv] - sig[iA] < sig[iBv] - sig[iB]:
                        viol.append(_witness(g, tag, kind="sigma", A=list(A), B=list(B), v=v))
                    d = (nums[iAv] - nums[iA]) - (nums[iBv] - nums[iB])
                    for u in np.flatnonzero(d < 0):
                        if u in Bs or u == v:
                            continue
                        viol.append(_witness(g, tag, kind="per_target", A=list(A), B=list(B), v=v, u=int(u)))
    return count, viol


def check_submodularity(corpus: Corpus, threads: int = 1) -> CheckResult:
    """Monotonicity and (per-target) submodularity for all A ⊂ B, |B| <= 3, v ∉ B."""
    return _merge("submodularity", _map(_submod_instance, corpus.graphs, threads))


# ---------------------------------------------------------------------------
# surplus and tight instances


def surplus_target(k: int) -> Fraction:
    return min(Fraction(1), approximation_base(k) + Fraction(1, SURPLUS_CONSTANT * k**3))


def _ratio(oracle: ExactOracle, g: Graph, k: int, cands: list[int]):
    trace = lazy_greedy_seeds(g, k, oracle, cands)
    sg = oracle.sigma(trace.seeds)
    opt, so = optimal_seeds(g, k, oracle, cands)
    return sg / so, trace.seeds, opt


def _surplus_instance(item, trials: int = 2, seed: int = 1):
    (g, tag), idx = item
    count, viol = 0, []
    oracle = ExactOracle(g)
    rng = philox(seed, 0x5E, idx)
    for k in (2, 3):
        if k > g.n:
            continue
        target = surplus_target(k)
        runs = [("all", list(range(g.n)))]
        for _ in range(trials):
            size = int(rng.integers(k, g.n + 1))
            cands = sorted(int(x) for x in rng.choice(g.n, size=size, replace=False))
            runs.append(("prescribed", cands))
        for mode, cands in runs:
            count += 1
            ratio, gs, opt = _ratio(oracle, g, k, cands)
            if ratio < target:
                viol.append(_witness(g, tag, k=k, mode=mode, candidates=cands, ratio=ratio, target=target))
    return count, viol


def check_surplus(corpus: Corpus, threads: int = 1) -> CheckResult:
    """ratio >= min(1, 1-(1-1/k)^k + 1/(64000 k^3)) for k in {2,3}, full and prescribed candidates."""
    items = [(it, i) for i, it in enumerate(corpus.graphs) if _plain_undirected(it[0])]
    seed = corpus.master_seed
    return _merge("surplus_lower_bound", _map(lambda it: _surplus_instance(it, seed=seed), items, threads))


def directed_tight_case(k: int, m: int) -> dict:
    lg = gen_tight_directed(k, m)
    g = lg.graph
    oracle = ExactOracle(g)
    trace = greedy_seeds(g, k, oracle)
    sg = oracle.sigma(trace.seeds)
    opt, so = optimal_seeds(g, k, oracle)
    lower, upper = predicted_ratio_bounds(InstanceSpec("tight_directed", k, m))
    ratio = sg / so
    return {
        "k": k,
        "m": m,
        "greedy": trace.seeds,
        "v_ids": lg.v_ids[:k],
        "optimal": list(opt),
        "u_ids": lg.u_ids,
        "sigma_greedy": sg,
        "sigma_opt": so,
        "ratio": ratio,
        "lower": lower,
        "upper": upper,
    }


def check_directed_tight(params: Sequence[tuple[int, int]] = DIRECTED_PARAMS) -> CheckResult:
    """Greedy picks v_1..v_k, the optimum is the hubs with σ = mk-k, ratio inside the predicted bounds."""
    res = CheckResult("directed_tight_ratio")
    for k, m in params:
        res.instances += 1
        case = directed_tight_case(k, m)
        problems = []
        if case["greedy"] != case["v_ids"]:
            problems.append("greedy does not pick v_1..v_k")
        if case["optimal"] != sorted(case["u_ids"]) or case["sigma_opt"] != m * k - k:
            problems.append("optimum is not the hubs with sigma mk-k")
        if not case["lower"] < case["ratio"] <= case["upper"]:
            problems.append("ratio outside (lower, upper]")
        if (k, m) == (2, 100) and case["ratio"] != Fraction(25, 33):
            problems.append("ratio differs from 25/33")
        res.details[f"k={k},m={m}"] = {key: str(val) if isinstance(val, Fraction) else val for key, val in case.items()}
        if problems:
            res.violations.append({"k": k, "m": m, "problems": problems, "ratio": str(case["ratio"])})
    return res


def vertex_weighted_case(k: int = 2, m: int = 10**4, samples: int = 10**5, master_seed: int = 1) -> dict:
    """Exact greedy and optimal sets, then both σ values by Monte Carlo."""
    lg = gen_tight_vertex_weighted(k, m)
    g = lg.graph
    oracle = ExactOracle(g)
    trace = lazy_greedy_seeds(g, k, oracle)
    opt, so = optimal_seeds(g, k, oracle)
    sg = oracle.sigma(trace.seeds)
    est_g = estimate_sigma(g, trace.seeds, samples, master_seed)
    est_o = estimate_sigma(g, opt, samples, master_seed)
    return {
        "k": k,
        "m": m,
        "greedy": trace.seeds,
        "optimal": list(opt),
        "v_ids": lg.v_ids[:k],
        "u_ids": lg.u_ids,
        "exact_ratio": sg / so,
        "mc_greedy": est_g.mean,
        "mc_opt": est_o.mean,
        "mc_ratio": est_g.mean / est_o.mean,
        "base": approximation_base(k),
        "samples": samples,
    }


def check_vertex_weighted_tight(k: int = 2, m: int = 10**4, samples: int = 10**5, master_seed: int = 1) -> CheckResult:
    """Monte Carlo greedy/optimal ratio at most base + 0.01."""
    res = CheckResult("vertex_weighted_tight_ratio", instances=1)
    case = vertex_weighted_case(k, m, samples, master_seed)
    limit = float(case["base"]) + 0.01
    res.details = {key: (str(v) if isinstance(v, Fraction) else (repr(v) if isinstance(v, float) else v)) for key, v in case.items()}
    if case["mc_ratio"] > limit:
        res.violations.append({"k": k, "m": m, "mc_ratio": repr(case["mc_ratio"]), "limit": repr(limit)})
    return res


def check_surplus_and_ratio(corpus: Corpus, threads: int = 1) -> CheckResult:
    """The three ratio checks merged into one result."""
    parts = [check_surplus(corpus, threads), check_directed_tight(), check_vertex_weighted_tight(master_seed=corpus.master_seed)]
    res = CheckResult("surplus_and_ratio")
    for p in parts:
        res.instances += p.instances
        res.violations.extend({"part": p.check, **v} for v in p.violations)
    return res


def undirected_tight_report(k: int = 4, c: float = 0.25, samples: int = 20_000, master_seed: int = 1) -> dict:
    """Scaled undirected construction: Monte Carlo greedy picks and measured ratio (report only)."""
    lg = gen_tight_undirected(InstanceSpec("tight_undirected", k, c=c))
    g = lg.graph
    oracle = MonteCarloOracle(g, samples, master_seed)
    trace = greedy_seeds(g, k, oracle)
    hubs = oracle.sigma(lg.u_ids)
    sg = oracle.sigma(trace.seeds)
    return {
        "k": k,
        "c": c,
        "n": g.n,
        "star_sizes": lg.star_sizes,
        "ell": lg.ell,
        "greedy": trace.seeds,
        "greedy_is_v_prefix": trace.seeds == lg.v_ids[:k],
        "sigma_greedy": repr(sg),
        "sigma_hubs": repr(hubs),
        "ratio_vs_hubs": repr(sg / hubs),
        "base": str(approximation_base(k)),
        "samples": samples,
    }


def check_tight_instances(master_seed: int = 1, samples: int = 10**5) -> CheckResult:
    """Generator structure, budget rejection, and the normalized-weight Monte Carlo prediction."""
    res = CheckResult("tight_instances")
    built = [
        gen_tight_directed(2, 8),
        gen_tight_directed(3, 9),
        gen_tight_directed(2, 100),
        gen_tight_vertex_weighted(2, 1024),
        gen_tight_vertex_weighted(2, 10**4),
        gen_tight_normalized_weighted(2, 16),
        gen_tight_undirected(InstanceSpec("tight_undirected", 16, c=1)),
        gen_tight_undirected(InstanceSpec("tight_undirected", 4, c=0.25)),
    ]
    for lg in built:
        res.instances += 1
        problems = check_structure(lg)
        if problems:
            res.violations.append({"kind": lg.kind, "k": lg.k, "problems": problems})
    res.instances += 1
    try:
        gen_tight_undirected(InstanceSpec("tight_undirected", 2, c=100))
        res.violations.append({"kind": "tight_undirected", "k": 2, "problems": ["c=100 accepted"]})
    except NonPositiveBudget:
        pass
    lg = gen_tight_normalized_weighted(2, 16)
    est = estimate_sigma(lg.graph, lg.v_ids[:2], samples, master_seed)
    pred = normalized_sigma_prediction(lg)
    z = abs(est.mean - float(pred)) / est.std_error if est.std_error else (0.0 if est.mean == float(pred) else math.inf)
    res.instances += 1
    res.details["normalized"] = {"mean": repr(est.mean), "std_error": repr(est.std_error), "prediction": str(pred), "z": round(z, 6)}
    if z > 5:
        res.violations.append({"kind": "tight_normalized_weighted", "problems": ["Monte Carlo sigma off prediction"]})
    res.details["undirected_report"] = undirected_tight_report(master_seed=master_seed)
    return res


# ---------------------------------------------------------------------------
# coverage bridge and decomposition


def _coverage_instance_check(item):
    g, tag = item
    inst, vmap = build_coverage_instance(g)
    oracle = ExactOracle(g)
    sets = _subsets(g.n, min(2, g.n))
    sig = oracle.sigma_many([list(s) for s in sets])
    count, viol = 0, []
    for s, val in zip(sets, sig):
        count += 1
        cov = coverage_value(inst, [vmap[v] for v in s])
        if cov != val:
            viol.append(_witness(g, tag, seeds=list(s), sigma=val, coverage=cov))
    for k in range(1, min(3, g.n) + 1):
        count += 1
        a = coverage_greedy(inst, k)
        b = greedy_seeds(g, k, oracle).seeds
        if [vmap[v] for v in b] != a:
            viol.append(_witness(g, tag, k=k, coverage_greedy=a, greedy=b))
    return count, viol


def check_coverage_bridge(corpus: Corpus, threads: int = 1, lemma_instances: int = 500) -> CheckResult:
    """Reduction identity, matching greedy picks, and the coverage lemmas on seeded random instances."""
    items = corpus.select(lambda g, t: True)
    res = _merge("coverage_bridge", _map(_coverage_instance_check, items, threads))
    rng = philox(corpus.master_seed, 0xC07)
    lemma_counts: dict[str, int] = {}
    for i in range(lemma_instances):
        inst = random_coverage_instance(rng)
        for r in check_coverage_lemmas(inst):
            res.instances += 1
            if r.applicable:
                lemma_counts[r.lemma] = lemma_counts.get(r.lemma, 0) + 1
            if not r.holds:
                res.violations.append({"instance": i, "coverage": inst.to_json(), **r.as_dict()})
    res.details["lemma_applications"] = dict(sorted(lemma_counts.items()))
    return res


def _extra_graphs(master_seed: int, limit: int = 2000):
    for i, seed in enumerate(random_corpus_seeds(master_seed ^ 0xDEC0, limit)):
        n, p = (6, 7)[i % 2], (0.3, 0.5)[(i // 2) % 2]
        yield generate_random_graph(n, p, seed), f"extra:n={n}:p={p}:seed={seed}"


def decomposition_instances(corpus: Corpus, count: int = 50) -> list[tuple[Graph, str, int, tuple[int, ...], int]]:
    """Graphs where greedy's first pick v1 lies outside the optimum S*, k in {2,3}.

    The corpus is scanned first; seeded extra random graphs fill any shortfall.
    """
    out = []
    graphs = itertools.chain(corpus.graphs, _extra_graphs(corpus.master_seed))
    for g, tag in graphs:
        if not _plain_undirected(g):
            continue
        oracle = ExactOracle(g)
        for k in (2, 3):
            if k >= g.n:
                continue
            v1 = lazy_greedy_seeds(g, 1, oracle).seeds[0]
            opt, _ = optimal_seeds(g, k, oracle)
            if v1 not in opt:
                out.append((g, tag, v1, opt, k))
                if len(out) >= count:
                    return out
    return out


def check_intersection_decomposition(corpus: Corpus, count: int = 50) -> CheckResult:
    """c1 + c2 + c3 equals the weighted overlap of Σ({v1}) and Σ(S*) exactly."""
    res = CheckResult("intersection_decomposition")
    cases = decomposition_instances(corpus, count)
    for g, tag, v1, opt, k in cases:
        res.instances += 1
        d = intersection_decomposition(g, v1, opt)
        if not d.identity_holds or min(d.c1, d.c2, d.c3) < 0:
            res.violations.append(
                _witness(g, tag, k=k, v1=v1, s_star=list(opt), c1=d.c1, c2=d.c2, c3=d.c3, total=d.total)
            )
    res.details["requested"] = count
    return res


# ---------------------------------------------------------------------------
# suite


SUITES = (
    "oracle_agreement",
    "live_edge_equivalence",
    "negative_correlation",
    "escape_bounds",
    "degree_bound",
    "clique_bound",
    "submodularity",
    "surplus_lower_bound",
    "directed_tight_ratio",
    "vertex_weighted_tight_ratio",
    "coverage_bridge",
    "intersection_decomposition",
    "tight_instances",
)


def run_check(name: str, corpus: Corpus, threads: int = 1) -> CheckResult:
    seed = corpus.master_seed
    table = {
        "oracle_agreement": lambda: check_oracle_agreement(corpus, threads),
        "live_edge_equivalence": lambda: check_live_edge_equivalence(corpus, threads),
        "negative_correlation": lambda: check_negative_correlation(corpus, threads),
        "escape_bounds": lambda: check_escape_bounds(corpus, threads),
        "degree_bound": lambda: check_degree_bound(corpus, threads),
        "clique_bound": lambda: check_clique_bound(master_seed=seed),
        "submodularity": lambda: check_submodularity(corpus, threads),
        "surplus_lower_bound": lambda: check_surplus(corpus, threads),
        "directed_tight_ratio": lambda: check_directed_tight(),
        "vertex_weighted_tight_ratio": lambda: check_vertex_weighted_tight(master_seed=seed),
        "coverage_bridge": lambda: check_coverage_bridge(corpus, threads),
        "intersection_decomposition": lambda: check_intersection_decomposition(corpus),
        "tight_instances": lambda: check_tight_instances(master_seed=seed),
    }
    if name not in table:
        raise KeyError(f"unknown check {name!r}; expected 'all' or one of {SUITES}")
    return table[name]()


def run_suite(suite: str = "all", corpus_seed: int = 1, max_n: int = 7, threads: int = 1) -> dict:
    _triad.cache_clear()
    _neg_corr_cached.cache_clear()
    corpus = build_corpus(corpus_seed, max_n=max_n)
    names = SUITES if suite == "all" else (suite,)
    results = [run_check(name, corpus, threads).as_dict() for name in names]
    return {
        "schema": SCHEMA,
        "suite": suite,
        "corpus_seed": corpus_seed,
        "max_n": max_n,
        "corpus_size": len(corpus),
        "checks": results,
        "status": "pass" if all(r["status"] == "pass" for r in results) else "fail",
    }


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=False) + "\n"
