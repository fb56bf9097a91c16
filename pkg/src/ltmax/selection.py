"""Seed selection: greedy, lazy greedy and exact optimum under a σ oracle."""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .cascade import live_edge_choices, reach_values, summarize
from .exact import (
    DEFAULT_BUDGET,
    ConfigTable,
    EnumerationBudget,
    PathTable,
    _omega_scaled,
    num_configs,
)
from .graph import Graph

TABLE_LIMIT = 300_000
DEFAULT_CAP = 10**6


class CapExceeded(RuntimeError):
    """Exhaustive search would exceed the configured combination cap."""


# ---------------------------------------------------------------------------
# oracles


class ExactOracle:
    """Exact σ_ω with rational results.

    Two interchangeable backends: ``table`` enumerates live-edge
    configurations (small graphs), ``paths`` enumerates self-avoiding
    reverse walks per target (large sparse graphs).  ``calls`` counts σ and
    marginal-gain evaluations.
    """

    tag = "exact"
    exact = True

    def __init__(self, g: Graph, budget: EnumerationBudget | None = None, backend: str = "auto"):
        self.g = g
        self.budget = budget or DEFAULT_BUDGET
        if backend == "auto":
            small = g.n <= 62 and num_configs(g) <= min(TABLE_LIMIT, self.budget.max_configs)
            backend = "table" if small else "paths"
        if backend not in ("table", "paths"):
            raise ValueError(f"unknown backend {backend!r}")
        self.backend = backend
        self.calls = 0
        self._b, self._wden = _omega_scaled(g)
        if backend == "table":
            self.table = ConfigTable(g, self.budget)
            self.denom = self.table.denom
            self._hist = None
        else:
            self.paths = PathTable(g, self.budget)
            self.denom = self.paths.denom

    # -- raw numerators -----------------------------------------------------

    def numerators(self, s: Iterable[int]) -> list[int]:
        src = self.table if self.backend == "table" else self.paths
        return src.numerators(list(s))

    def probs(self, s: Iterable[int]) -> list[Fraction]:
        return [Fraction(x, self.denom) for x in self.numerators(s)]

    def _total(self, nums: Sequence[int]) -> Fraction:
        return Fraction(sum(b * int(x) for b, x in zip(self._b, nums)), self.denom * self._wden)

    def _histograms(self):
        if self._hist is None:
            hist = []
            for v in range(self.g.n):
                masks = self.table.trace_masks(v)
                _, _, w = self.table.traces(v)
                hist.append((masks, w))
            self._hist = hist
        return self._hist

    # -- public -------------------------------------------------------------

    def sigma(self, s: Iterable[int]) -> Fraction:
        self.calls += 1
        return self._total(self.numerators(s))

    def numerators_many(self, sets: Sequence[Sequence[int]]) -> np.ndarray:
        """(len(sets), n) numerators of Pr(S -> v) over :attr:`denom`."""
        n = self.g.n
        if self.backend != "table" or n > 62:
            rows = [self.numerators(s) for s in sets]
            dtype = np.int64 if self.denom < (1 << 62) else object
            return np.array(rows, dtype=dtype).reshape(len(sets), n)
        hist = self._histograms()
        fl = self.table.exact_float
        dtype = np.int64 if self.denom < (1 << 62) else object
        out = np.zeros((len(sets), n), dtype=dtype)
        for lo in range(0, len(sets), 2048):
            chunk = sets[lo : lo + 2048]
            smask = np.array([sum(1 << int(v) for v in s) for s in chunk], dtype=np.uint64)
            for v, (masks, w) in enumerate(hist):
                hit = (masks[None, :] & smask[:, None]) != 0
                if fl:
                    col = np.rint(hit.astype(np.float64) @ w.astype(np.float64)).astype(np.int64)
                elif w.dtype == object:
                    col = (hit.astype(object) * w[None, :]).sum(axis=1)
                else:
                    col = (hit * w[None, :]).sum(axis=1)
                out[lo : lo + len(chunk), v] = col
        return out

    def sigma_many(self, sets: Sequence[Sequence[int]]) -> list[Fraction]:
        """σ for many seed sets at once (vectorized on the table backend)."""
        if not sets:
            return []
        if self.backend != "table" or self.g.n > 62:
            return [self.sigma(s) for s in sets]
        self.calls += len(sets)
        nums = self.numerators_many(sets)
        den = self.denom * self._wden
        b = self._b
        return [Fraction(sum(bv * int(x) for bv, x in zip(b, row)), den) for row in nums]

    def gains(self, s: Sequence[int], cands: Sequence[int]) -> list[Fraction]:
        s = list(s)
        if self.backend == "paths":
            self.calls += len(cands)
            den = self.denom * self._wden
            return [Fraction(self.paths.gain_numerator(s, c, self._b), den) for c in cands]
        vals = self.sigma_many([s] + [s + [c] for c in cands])
        return [x - vals[0] for x in vals[1:]]


class MonteCarloOracle:
    """σ estimates with common random numbers: every query reuses one sample set."""

    tag = "mc"
    exact = False

    def __init__(self, g: Graph, samples: int = 10_000, master_seed: int = 0):
        if samples < 1:
            raise ValueError("samples must be >= 1")
        self.g = g
        self.samples = samples
        self.master_seed = master_seed
        self.choices = live_edge_choices(g, samples, master_seed)
        self.omega = np.array([float(w) for w in g.vertex_weight])
        self.calls = 0

    def estimate(self, s: Iterable[int]):
        self.calls += 1
        return summarize(reach_values(self.choices, sorted(set(s)), self.omega), "live_edge")

    def sigma(self, s: Iterable[int]) -> float:
        return self.estimate(s).mean

    def sigma_many(self, sets):
        return [self.sigma(s) for s in sets]

    def gains(self, s: Sequence[int], cands: Sequence[int]) -> list[float]:
        base = self.sigma(s)
        return [self.sigma(list(s) + [c]) - base for c in cands]


# ---------------------------------------------------------------------------
# greedy


@dataclass
class GreedyTrace:
    picks: list[tuple[int, object]]
    oracle: str
    calls: int = 0

    @property
    def seeds(self) -> list[int]:
        return [v for v, _ in self.picks]

    @property
    def value(self):
        return sum((gain for _, gain in self.picks), Fraction(0) if self.oracle == "exact" else 0.0)


def _candidates(g: Graph, candidates, k: int) -> list[int]:
    cands = sorted(set(g.candidate_list() if candidates is None else candidates))
    if any(not 0 <= c < g.n for c in cands):
        raise ValueError("candidate out of range")
    if k < 0 or k > len(cands):
        raise ValueError(f"k={k} exceeds the {len(cands)} candidates")
    return cands


def greedy_seeds(g: Graph, k: int, oracle=None, candidates: Iterable[int] | None = None) -> GreedyTrace:
    """k rounds of argmax marginal gain; ties go to the smallest vertex id."""
    oracle = oracle or ExactOracle(g)
    cands = _candidates(g, candidates, k)
    start = oracle.calls
    chosen: list[int] = []
    picks = []
    for _ in range(k):
        rest = [c for c in cands if c not in chosen]
        gains = oracle.gains(chosen, rest)
        best = max(range(len(rest)), key=lambda i: (gains[i], -rest[i]))
        chosen.append(rest[best])
        picks.append((rest[best], gains[best]))
    return GreedyTrace(picks, oracle.tag, oracle.calls - start)


def lazy_greedy_seeds(g: Graph, k: int, oracle=None, candidates: Iterable[int] | None = None) -> GreedyTrace:
    """Lazy (CELF) greedy; same picks as :func:`greedy_seeds` for exact oracles."""
    oracle = oracle or ExactOracle(g)
    if not oracle.exact:
        raise ValueError("lazy greedy needs exact marginals")
    cands = _candidates(g, candidates, k)
    start = oracle.calls
    picks = []
    if k == 0:
        return GreedyTrace(picks, oracle.tag, 0)
    chosen: list[int] = []
    heap = [(-gain, c, 0) for c, gain in zip(cands, oracle.gains([], cands))]
    heapq.heapify(heap)
    while len(chosen) < k:
        neg, c, stamp = heapq.heappop(heap)
        if stamp == len(chosen):
            chosen.append(c)
            picks.append((c, -neg))
            continue
        gain = oracle.gains(chosen, [c])[0]
        heapq.heappush(heap, (-gain, c, len(chosen)))
    return GreedyTrace(picks, oracle.tag, oracle.calls - start)


# ---------------------------------------------------------------------------
# optimum


def optimal_seeds(
    g: Graph,
    k: int,
    oracle=None,
    candidates: Iterable[int] | None = None,
    cap: int = DEFAULT_CAP,
    method: str = "auto",
) -> tuple[tuple[int, ...], object]:
    """Maximum-σ seed set of size k, lexicographically smallest among ties.

    ``method="exhaustive"`` enumerates all subsets and refuses above ``cap``.
    ``"branch_and_bound"`` is exact for exact oracles: a partial set T with
    remaining slots r can reach at most σ(T) plus the r largest singleton
    values still available (submodularity).  ``"auto"`` picks exhaustive
    when the cap allows it.
    """
    oracle = oracle or ExactOracle(g)
    cands = _candidates(g, candidates, k)
    total = math.comb(len(cands), k)
    if method == "auto":
        method = "exhaustive" if total <= cap else "branch_and_bound"
    if method == "exhaustive":
        if total > cap:
            raise CapExceeded(f"C({len(cands)},{k})={total} exceeds cap {cap}")
        return _exhaustive(oracle, cands, k)
    if method != "branch_and_bound":
        raise ValueError(f"unknown method {method!r}")
    if not oracle.exact:
        raise CapExceeded("branch and bound needs an exact oracle; exhaustive search exceeds the cap")
    return _branch_and_bound(g, oracle, cands, k)


def _exhaustive(oracle, cands, k):
    best_set: tuple[int, ...] = ()
    best_val = None
    combos = itertools.combinations(cands, k)
    while True:
        chunk = list(itertools.islice(combos, 4096))
        if not chunk:
            break
        vals = oracle.sigma_many([list(c) for c in chunk])
        for c, v in zip(chunk, vals):
            if best_val is None or v > best_val:
                best_val, best_set = v, c
    return best_set, best_val


def _branch_and_bound(g, oracle, cands, k):
    single = oracle.gains([], cands)
    order = sorted(range(len(cands)), key=lambda i: (-single[i], cands[i]))
    verts = [cands[i] for i in order]
    svals = [single[i] for i in order]
    prefix = [Fraction(0)]
    for x in svals:
        prefix.append(prefix[-1] + x)
    trace = lazy_greedy_seeds(g, k, oracle, cands)
    best = {"val": oracle.sigma(trace.seeds), "set": tuple(sorted(trace.seeds))}

    def rec(T: list[int], start: int, sT):
        r = k - len(T)
        if r == 0:
            key = tuple(sorted(T))
            if sT > best["val"] or (sT == best["val"] and key < best["set"]):
                best["val"], best["set"] = sT, key
            return
        for i in range(start, len(verts) - r + 1):
            if sT + prefix[i + r] - prefix[i] < best["val"]:
                break
            c = verts[i]
            rec(T + [c], i + 1, sT + oracle.gains(T, [c])[0])

    rec([], 0, Fraction(0))
    return best["set"], best["val"]


# ---------------------------------------------------------------------------
# reports


def approximation_base(k: int) -> Fraction:
    """1 - (1 - 1/k)^k, exactly."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return 1 - (1 - Fraction(1, k)) ** k


@dataclass
class ApproximationReport:
    k: int
    sigma_greedy: object
    sigma_opt: object
    ratio: object
    base: Fraction
    surplus: object
    greedy: list[int] = field(default_factory=list)
    optimal: tuple[int, ...] = ()
    exact: bool = True


def approximation_report(
    g: Graph, k: int, oracle=None, candidates: Iterable[int] | None = None, cap: int = DEFAULT_CAP
) -> ApproximationReport:
    oracle = oracle or ExactOracle(g)
    if oracle.exact:
        trace = lazy_greedy_seeds(g, k, oracle, candidates)
    else:
        trace = greedy_seeds(g, k, oracle, candidates)
    sg = oracle.sigma(trace.seeds)
    opt, so = optimal_seeds(g, k, oracle, candidates, cap=cap)
    ratio = sg / so
    base = approximation_base(k)
    surplus = ratio - base if oracle.exact else float(ratio) - float(base)
    return ApproximationReport(k, sg, so, ratio, base, surplus, trace.seeds, tuple(opt), oracle.exact)
