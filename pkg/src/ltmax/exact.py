"""Exact rational oracles for the linear threshold model.

Three independent routes to Pr(S -> v):

* self-avoiding reverse walks (:class:`PathTable`, :func:`exact_infection_prob`),
* enumeration of every live-edge configuration (:class:`ConfigTable`),
* enumeration of every integer threshold assignment (:class:`ThresholdTable`).

All probabilities are carried as integer numerators over one common
denominator per table, so vectorized numpy sums stay exact.  Whenever the
denominator is below 2**53 float64 BLAS products are exact as well and are
used for the heavy pairwise-event computations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .graph import Graph, complete_graph

INT_SAFE = 1 << 62
FLOAT_SAFE = 1 << 53


@dataclass(frozen=True)
class EnumerationBudget:
    max_configs: int = 10**7
    max_walk_nodes: int = 10**7

    def __post_init__(self):
        if self.max_configs < 1 or self.max_walk_nodes < 1:
            raise ValueError("budgets must be positive")


DEFAULT_BUDGET = EnumerationBudget()


class ExactIntractable(RuntimeError):
    """An exact computation would exceed its enumeration budget."""

    def __init__(self, budget_name: str, limit: int, needed: int | None = None):
        self.budget_name = budget_name
        self.limit = limit
        self.needed = needed
        extra = f" (needs {needed})" if needed is not None else ""
        super().__init__(f"exact intractable: {budget_name}={limit} exceeded{extra}")


# ---------------------------------------------------------------------------
# shared helpers


def _vertex_options(g: Graph, v: int) -> tuple[list[int], list[int], int]:
    """Choices of ``v`` (``g.n`` for NONE), integer numerators and their denominator."""
    dist = g.choice_distribution(v)
    den = math.lcm(*(p.denominator for _, p in dist))
    choices = [g.n if u is None else u for u, _ in dist]
    nums = [int(p * den) for _, p in dist]
    return choices, nums, den


def num_configs(g: Graph) -> int:
    return math.prod(len(g.choice_distribution(v)) for v in range(g.n))


def num_threshold_assignments(g: Graph) -> int:
    return math.prod(max(g.deg(v), 1) for v in range(g.n))


def _dtype_for(limit: int):
    return np.int64 if limit < INT_SAFE else object


def _group_sum(inverse: np.ndarray, weights: np.ndarray, size: int) -> np.ndarray:
    """Exact per-group sums of integer weights (int64 or object)."""
    if weights.dtype != object and weights.size and (weights == weights.flat[0]).all():
        return np.bincount(inverse, minlength=size).astype(np.int64) * weights.flat[0]
    order = np.argsort(inverse, kind="stable")
    inv = inverse[order]
    starts = np.flatnonzero(np.r_[True, inv[1:] != inv[:-1]])
    sums = np.add.reduceat(weights[order], starts)
    out = np.zeros(size, dtype=weights.dtype)
    out[inv[starts]] = sums
    return out


def _as_mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << int(v)
    return m


def _omega_scaled(g: Graph) -> tuple[list[int], int]:
    den = math.lcm(*(w.denominator for w in g.vertex_weight)) if g.n else 1
    return [int(w * den) for w in g.vertex_weight], den


def weighted_total(g: Graph, nums: Sequence[int], denom: int) -> Fraction:
    """Σ_v ω(v)·nums[v]/denom as an exact fraction."""
    b, wden = _omega_scaled(g)
    return Fraction(sum(int(x) * y for x, y in zip(b, nums)), denom * wden)


# ---------------------------------------------------------------------------
# self-avoiding walks


def exact_infection_prob(g: Graph, s: Iterable[int], v: int, budget: EnumerationBudget | None = None) -> Fraction:
    """Pr(S -> v) by depth-first expansion of the reverse walk without repetition."""
    budget = budget or DEFAULT_BUDGET
    s = set(s)
    if v in s:
        return Fraction(1)
    opts = [g.choice_distribution(u) for u in range(g.n)]
    nodes = 0
    total = Fraction(0)
    stack: list[tuple[int, Fraction, frozenset]] = [(v, Fraction(1), frozenset([v]))]
    while stack:
        u, p, seen = stack.pop()
        nodes += 1
        if nodes > budget.max_walk_nodes:
            raise ExactIntractable("max_walk_nodes", budget.max_walk_nodes)
        for w, q in opts[u]:
            if w is None or w in seen:
                continue
            if w in s:
                total += p * q
            else:
                stack.append((w, p * q, seen | {w}))
    return total


class PathTable:
    """Every simple reverse path from every target, for fast repeated queries.

    A path ``w = x_0, x_1, ..., x_j`` is stored with its end ``x_j``, its
    prefix ``{x_0..x_{j-1}}`` and probability numerator over ``denom``.
    Pr(S -> w) sums the paths whose end is in S and whose prefix avoids S.
    """

    def __init__(self, g: Graph, budget: EnumerationBudget | None = None, targets: Iterable[int] | None = None):
        budget = budget or DEFAULT_BUDGET
        self.g = g
        n = g.n
        opts = [_vertex_options(g, v) for v in range(n)]
        self.denom = math.prod(o[2] for o in opts)
        dens = [o[2] for o in opts]
        edges = [[(c, a) for c, a in zip(o[0], o[1]) if c != n] for o in opts]
        targets = list(range(n)) if targets is None else sorted(set(targets))
        tgt, end, prefixes, nums = [], [], [], []
        nodes = 0
        L = self.denom
        for w in targets:
            stack = [(w, 1, 1, (w,))]
            while stack:
                x, anum, aden, path = stack.pop()
                nodes += 1
                if nodes > budget.max_walk_nodes:
                    raise ExactIntractable("max_walk_nodes", budget.max_walk_nodes)
                aden2 = aden * dens[x]
                for u, a in edges[x]:
                    if u in path:
                        continue
                    tgt.append(w)
                    end.append(u)
                    prefixes.append(path)
                    nums.append(anum * a * (L // aden2))
                    stack.append((u, anum * a, aden2, path + (u,)))
        self.targets = targets
        self.num_nodes = nodes
        P = len(tgt)
        width = max((len(p) for p in prefixes), default=1)
        pre = np.full((P, width), n, dtype=np.int32)
        for i, p in enumerate(prefixes):
            pre[i, : len(p)] = p
        self.tgt = np.array(tgt, dtype=np.int64)
        self.end = np.array(end, dtype=np.int64)
        self.prefix = pre
        self.num = np.array(nums, dtype=_dtype_for(L)) if P else np.zeros(0, dtype=np.int64)
        order = np.argsort(self.tgt, kind="stable")
        self.tgt, self.end, self.prefix, self.num = self.tgt[order], self.end[order], self.prefix[order], self.num[order]
        self._members = None

    def _ok(self, idx, in_s: np.ndarray) -> np.ndarray:
        return in_s[self.end[idx]] & ~in_s[self.prefix[idx]].any(axis=1)

    def numerators(self, s: Iterable[int]) -> list[int]:
        """Per-vertex numerators of Pr(S -> v) over :attr:`denom`."""
        n = self.g.n
        in_s = np.zeros(n + 1, dtype=bool)
        s = list(s)
        in_s[s] = True
        out = [0] * n
        if len(self.tgt):
            ok = self._ok(slice(None), in_s)
            vals = _group_sum(self.tgt, np.where(ok, self.num, 0).astype(self.num.dtype), n)
            out = [int(x) for x in vals]
        for v in s:
            out[v] = self.denom
        return out

    @cached_property
    def targets_through(self) -> list[np.ndarray]:
        """Per vertex c: indices of paths whose target is influenced by c."""
        n = self.g.n
        touched: list[set[int]] = [set() for _ in range(n)]
        for t, e in zip(self.tgt.tolist(), self.end.tolist()):
            touched[e].add(t)
        starts = np.searchsorted(self.tgt, np.arange(n + 1))
        out = []
        for c in range(n):
            ts = sorted(touched[c] | {c})
            out.append(np.concatenate([np.arange(starts[t], starts[t + 1]) for t in ts]) if ts else np.zeros(0, int))
        return out

    def gain_numerator(self, s: Sequence[int], c: int, omega: Sequence[int]) -> int:
        """Σ_w ω'(w)·(num_w(S+c) - num_w(S)) restricted to targets reachable from c."""
        if c in s:
            return 0
        n = self.g.n
        in_s = np.zeros(n + 1, dtype=bool)
        in_s[list(s)] = True
        in_sc = in_s.copy()
        in_sc[c] = True
        idx = self.targets_through[c]
        total = 0
        if len(idx):
            diff = self._ok(idx, in_sc).astype(np.int64) - self._ok(idx, in_s).astype(np.int64)
            nz = np.flatnonzero(diff)
            if len(nz):
                w = np.array([omega[t] for t in self.tgt[idx[nz]].tolist()], dtype=object)
                total = int((w * self.num[idx[nz]].astype(object) * diff[nz]).sum())
        # c itself jumps to probability 1; its own paths were counted above
        # only through ok(S), which the diff already subtracts.
        total += omega[c] * self.denom
        return total


def exact_infection_probs(g: Graph, s: Iterable[int], budget: EnumerationBudget | None = None) -> list[Fraction]:
    s = list(s)
    s_set = set(s)
    return [exact_infection_prob(g, s_set, v, budget) for v in range(g.n)]


def exact_sigma(g: Graph, s: Iterable[int], budget: EnumerationBudget | None = None) -> Fraction:
    """σ_ω(S) summed over per-target self-avoiding-walk expansions."""
    probs = exact_infection_probs(g, s, budget)
    return sum((w * p for w, p in zip(g.vertex_weight, probs)), Fraction(0))


# ---------------------------------------------------------------------------
# live-edge configuration enumeration


class ConfigTable:
    """All live-edge configurations of ``g`` with exact integer weights.

    ``choice[c, v]`` is the in-neighbor picked by ``v`` in configuration ``c``
    (``n`` for NONE); configuration ``c`` has probability ``weight[c] / denom``.
    """

    def __init__(self, g: Graph, budget: EnumerationBudget | None = None):
        budget = budget or DEFAULT_BUDGET
        n = g.n
        opts = [_vertex_options(g, v) for v in range(n)]
        C = math.prod(len(o[0]) for o in opts)
        if C > budget.max_configs:
            raise ExactIntractable("max_configs", budget.max_configs, C)
        self.g = g
        self.n = n
        self.size = C
        self.denom = math.prod(o[2] for o in opts)
        codes = np.arange(C, dtype=np.int64)
        choice = np.empty((C, n), dtype=np.int32)
        dtype = _dtype_for(self.denom)
        weight = np.ones(C, dtype=dtype)
        stride = 1
        for v, (ch, nums, _den) in enumerate(opts):
            r = len(ch)
            digit = (codes // stride) % r
            stride *= r
            choice[:, v] = np.array(ch, dtype=np.int32)[digit]
            if any(a != 1 for a in nums):
                weight = weight * np.array(nums, dtype=dtype)[digit]
        self.choice = choice
        self.weight = weight
        self.exact_float = self.denom < FLOAT_SAFE
        self._traces: dict[int, tuple] = {}

    # -- reachability -------------------------------------------------------

    def reached(self, s: Iterable[int]) -> np.ndarray:
        """Boolean (C, n): vertex reachable from S along live edges (pointer doubling)."""
        C, n = self.size, self.n
        ptr = np.concatenate([self.choice, np.full((C, 1), n, dtype=np.int32)], axis=1)
        hit = np.zeros((C, n + 1), dtype=bool)
        s = list(s)
        if s:
            hit[:, s] = True
        for _ in range(max(1, math.ceil(math.log2(n + 1))) + 1):
            hit |= np.take_along_axis(hit, ptr, axis=1)
            ptr = np.take_along_axis(ptr, ptr, axis=1)
        hit[:, n] = False
        return hit[:, :n]

    def numerators(self, s: Iterable[int]) -> list[int]:
        hit = self.reached(s)
        if self.weight.dtype == object:
            return [int(x) for x in (hit.astype(object) * self.weight[:, None]).sum(axis=0)]
        if self.exact_float:
            return [int(x) for x in self.weight.astype(np.float64) @ hit]
        return [int(x) for x in (hit * self.weight[:, None]).sum(axis=0)]

    # -- traces -------------------------------------------------------------

    def traces(self, v: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Distinct simple reverse traces from ``v``.

        Returns ``(paths, inverse, weight)``: ``paths`` is (T, n) padded with
        ``n``, ``inverse`` maps each configuration to its trace and ``weight``
        holds per-trace numerators.
        """
        if v in self._traces:
            return self._traces[v]
        C, n = self.size, self.n
        ch = np.concatenate([self.choice, np.full((C, 1), n, dtype=np.int32)], axis=1)
        path = np.full((C, n), n, dtype=np.int32)
        seen = np.zeros((C, n + 1), dtype=bool)
        cur = np.full(C, v, dtype=np.int32)
        rows = np.arange(C)
        for step in range(n):
            live = (cur != n) & ~seen[rows, cur]
            if not live.any():
                break
            cur = np.where(live, cur, n)
            path[:, step] = cur
            seen[rows, cur] = True
            seen[:, n] = False
            cur = ch[rows, cur]
        if (n + 1) ** n < (1 << 63):
            key = np.zeros(C, dtype=np.int64)
            for col in range(n):
                key = key * (n + 1) + path[:, col]
            uniq, first, inverse = np.unique(key, return_index=True, return_inverse=True)
            paths = path[first]
        else:
            paths, inverse = np.unique(path, axis=0, return_inverse=True)
        inverse = inverse.reshape(-1)
        weight = _group_sum(inverse, self.weight, len(paths))
        out = (paths, inverse, weight)
        self._traces[v] = out
        return out

    def positions(self, v: int) -> np.ndarray:
        """(T, n+1) position of each vertex along each trace from ``v`` (n+1 if absent)."""
        paths, _, _ = self.traces(v)
        T, n = paths.shape[0], self.n
        pos = np.full((T, n + 1), n + 1, dtype=np.int32)
        for step in range(n - 1, -1, -1):
            col = paths[:, step]
            pos[np.arange(T), col] = step
        pos[:, n] = n + 1
        return pos

    def trace_masks(self, v: int) -> np.ndarray:
        if self.n > 62:
            raise ValueError("trace masks need n <= 62")
        paths, _, _ = self.traces(v)
        bits = np.concatenate([np.left_shift(np.uint64(1), np.arange(self.n, dtype=np.uint64)), [np.uint64(0)]])
        return np.bitwise_or.reduce(bits[paths], axis=1)

    def event_vector(self, v: int, A: Iterable[int], B: Iterable[int]) -> np.ndarray:
        """Per trace of ``v``: indicator of A ->_B v."""
        A = set(A)
        pos = self.positions(v)
        if v in A:
            return np.ones(pos.shape[0], dtype=bool)
        big = self.n + 1
        pa = pos[:, sorted(A)].min(axis=1) if A else np.full(pos.shape[0], big)
        Bx = sorted(set(B) - {v})
        pb = pos[:, Bx].min(axis=1) if Bx else np.full(pos.shape[0], big)
        return (pa < big) & (pa <= pb)

    def event_numerator(self, A, B, v) -> int:
        _, _, w = self.traces(v)
        e = self.event_vector(v, A, B)
        return int(w[e].sum()) if e.any() else 0

    def pair_weights(self, u: int, v: int) -> np.ndarray:
        """Joint trace weights (T_u, T_v) for the traces from ``u`` and ``v``."""
        _, iu, wu = self.traces(u)
        _, iv, wv = self.traces(v)
        tu, tv = len(wu), len(wv)
        flat = iu.astype(np.int64) * tv + iv
        if self.exact_float:
            w = np.bincount(flat, weights=self.weight.astype(np.float64), minlength=tu * tv)
        else:
            w = _group_sum(flat, self.weight, tu * tv)
        return w.reshape(tu, tv)


def exact_sigma_by_config_enum(g: Graph, s: Iterable[int], budget: EnumerationBudget | None = None) -> Fraction:
    """σ_ω(S) as the probability-weighted sum over every live-edge configuration."""
    t = ConfigTable(g, budget)
    return weighted_total(g, t.numerators(s), t.denom)


def exact_probs_by_config_enum(g: Graph, s: Iterable[int], budget: EnumerationBudget | None = None) -> list[Fraction]:
    t = ConfigTable(g, budget)
    return [Fraction(x, t.denom) for x in t.numerators(s)]


def exact_event_prob(
    g: Graph, A: Iterable[int], B: Iterable[int], v: int, budget: EnumerationBudget | None = None
) -> Fraction:
    """Pr(A ->_B v) by configuration enumeration."""
    A = set(A)
    if v in A:
        return Fraction(1)
    t = ConfigTable(g, budget)
    return Fraction(t.event_numerator(A, B, v), t.denom)


# ---------------------------------------------------------------------------
# threshold enumeration


class ThresholdTable:
    """Every integer threshold assignment (uniform, equally likely)."""

    def __init__(self, g: Graph, budget: EnumerationBudget | None = None):
        budget = budget or DEFAULT_BUDGET
        if g.edge_weight is not None or any(t != 1 for t in g.slackness):
            raise ValueError("threshold enumeration needs an unweighted graph with slackness 1")
        n = g.n
        C = num_threshold_assignments(g)
        if C > budget.max_configs:
            raise ExactIntractable("max_configs", budget.max_configs, C)
        self.g = g
        self.n = n
        self.size = C
        self.denom = C
        codes = np.arange(C, dtype=np.int64)
        theta = np.empty((C, n), dtype=np.float32)
        stride = 1
        for v in range(n):
            d = g.deg(v)
            if d == 0:
                theta[:, v] = n + 1
                continue
            theta[:, v] = (codes // stride) % d + 1
            stride *= d
        self.theta = theta
        adj = np.zeros((n, n), dtype=np.float32)
        for u, v in g.edges():
            adj[u, v] = 1.0
        self.adj = adj

    def infected(self, s: Iterable[int]) -> np.ndarray:
        inf = np.zeros((self.size, self.n), dtype=bool)
        s = list(s)
        if s:
            inf[:, s] = True
        while True:
            cnt = inf.astype(np.float32) @ self.adj
            new = inf | (cnt >= self.theta)
            if np.array_equal(new, inf):
                return inf
            inf = new

    def numerators(self, s: Iterable[int]) -> list[int]:
        return [int(x) for x in self.infected(s).sum(axis=0)]


def exact_sigma_by_threshold_enum(g: Graph, s: Iterable[int], budget: EnumerationBudget | None = None) -> Fraction:
    t = ThresholdTable(g, budget)
    return weighted_total(g, t.numerators(s), t.denom)


def exact_probs_by_threshold_enum(g: Graph, s: Iterable[int], budget: EnumerationBudget | None = None) -> list[Fraction]:
    t = ThresholdTable(g, budget)
    return [Fraction(x, t.denom) for x in t.numerators(s)]


# ---------------------------------------------------------------------------
# cliques


def clique_single_seed_sigma(n: int) -> Fraction:
    """σ of one seed on K_n: 1 + Σ_{t=1}^{m} m(m-1)...(m-t+1) / m^t with m = n-1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    m = n - 1
    if m == 0:
        return Fraction(1)
    total = 0
    falling = 1
    for t in range(1, m + 1):
        falling *= m - t + 1
        total += falling * m ** (m - t)
    return 1 + Fraction(total, m**m)


def clique_bound_holds(n: int) -> bool:
    """σ(K_n, one seed) < 3·sqrt(n), compared exactly as σ² < 9n."""
    s = clique_single_seed_sigma(n)
    return s * s < 9 * n


def clique_graph(n: int) -> Graph:
    return complete_graph(n)
