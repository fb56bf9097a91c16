"""Randomized semantics of the linear threshold model.

Random draws come from Philox-4x64 (numpy).  Monte Carlo sampling is split
into fixed blocks of :data:`BLOCK` samples; block ``b`` is the Philox stream
keyed by the master seed with counter word 1 set to ``b``.  Sample ``i``
therefore depends only on ``(master_seed, i)`` and results do not depend on
how blocks are spread over workers.

Each vertex consumes exactly one uniform ``x`` per sample: ``x >= slack``
means no live edge, otherwise ``x / slack`` picks the in-neighbor (uniformly
or weight-proportionally).  The same rule drives threshold sampling.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .graph import Graph, philox

INFINITE = math.inf
BLOCK = 1024
METHODS = ("forward", "live_edge", "reverse_walk")


@dataclass(frozen=True)
class ThresholdAssignment:
    theta: tuple[float, ...]
    mode: str = "integer"  # "integer" or "continuous"


@dataclass(frozen=True)
class LiveEdgeConfig:
    choice: tuple[int | None, ...]


@dataclass(frozen=True)
class SigmaEstimate:
    mean: float
    std_error: float
    samples: int
    method: str


# ---------------------------------------------------------------------------
# single-sample primitives


def _pick(g: Graph, v: int, x: float) -> int | None:
    """Map one uniform draw to the live-edge choice of ``v``."""
    nbrs = g.in_neighbors[v]
    theta = float(g.slackness[v])
    if not nbrs or x >= theta:
        return None
    y = x / theta
    if g.edge_weight is None:
        return nbrs[min(int(y * len(nbrs)), len(nbrs) - 1)]
    ws = np.array([float(w) for w in g.edge_weight[v]])
    cum = np.cumsum(ws) / ws.sum()
    return nbrs[min(int(np.searchsorted(cum, y, side="right")), len(nbrs) - 1)]


def sample_thresholds(g: Graph, rng: np.random.Generator, mode: str = "integer") -> ThresholdAssignment:
    """Integer mode: uniform on {1..deg(v)}, INFINITE for deg 0 (or with prob 1-slack).

    Continuous mode: uniform on (0, 1], compared against normalized weight mass.
    """
    x = rng.random(g.n)
    if mode == "continuous":
        return ThresholdAssignment(tuple(float(1.0 - xi) for xi in x), "continuous")
    if mode != "integer":
        raise ValueError(f"unknown threshold mode {mode!r}")
    if g.edge_weight is not None:
        raise ValueError("integer thresholds require an unweighted graph; use mode='continuous'")
    theta = []
    for v in range(g.n):
        d = g.deg(v)
        t = float(g.slackness[v])
        if d == 0 or x[v] >= t:
            theta.append(INFINITE)
        else:
            theta.append(min(int(x[v] / t * d), d - 1) + 1)
    return ThresholdAssignment(tuple(theta), "integer")


def _normalized_weights(g: Graph) -> list[dict[int, float]]:
    out = []
    for v in range(g.n):
        dist = g.choice_distribution(v)
        out.append({u: float(p) for u, p in dist if u is not None})
    return out


def run_threshold_cascade(g: Graph, theta: ThresholdAssignment, s: Iterable[int]) -> set[int]:
    """Simultaneous-round cascade to its fixed point."""
    infected = set(s)
    if theta.mode == "continuous":
        wts = _normalized_weights(g)
    while True:
        new = []
        for v in range(g.n):
            if v in infected:
                continue
            if theta.mode == "integer":
                cnt = sum(1 for u in g.in_neighbors[v] if u in infected)
                if cnt >= theta.theta[v]:
                    new.append(v)
            else:
                mass = sum(w for u, w in wts[v].items() if u in infected)
                if mass >= theta.theta[v]:
                    new.append(v)
        if not new:
            return infected
        infected.update(new)


def sample_live_config(g: Graph, rng: np.random.Generator) -> LiveEdgeConfig:
    x = rng.random(g.n)
    return LiveEdgeConfig(tuple(_pick(g, v, float(x[v])) for v in range(g.n)))


def live_reachable(cfg: LiveEdgeConfig, s: Iterable[int]) -> set[int]:
    children: dict[int, list[int]] = {}
    for v, u in enumerate(cfg.choice):
        if u is not None:
            children.setdefault(u, []).append(v)
    seen = set(s)
    stack = list(seen)
    while stack:
        u = stack.pop()
        for v in children.get(u, ()):
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return seen


def trace_reverse_path(cfg: LiveEdgeConfig, v: int) -> list[int]:
    """Follow live choices backwards from ``v``; stops at NONE or before a repeat."""
    path = [v]
    seen = {v}
    cur = cfg.choice[v]
    while cur is not None and cur not in seen:
        path.append(cur)
        seen.add(cur)
        cur = cfg.choice[cur]
    return path


def event_reaches_avoiding(cfg: LiveEdgeConfig, A: Iterable[int], B: Iterable[int], v: int) -> bool:
    """The event A ->_B v: a live path from A to v with internal vertices outside B."""
    A = set(A)
    B = set(B)
    if v in A:
        return True
    path = trace_reverse_path(cfg, v)
    for x in path[1:]:
        if x in A:
            return True
        if x in B:
            return False
    return False


def reverse_walk_once(g: Graph, v: int, s: Iterable[int], rng: np.random.Generator) -> bool:
    s = set(s)
    visited = {v}
    cur = v
    while cur not in s:
        nxt = _pick(g, cur, float(rng.random()))
        if nxt is None or nxt in visited:
            return False
        visited.add(nxt)
        cur = nxt
    return True


# ---------------------------------------------------------------------------
# vectorized Monte Carlo


class _Sampler:
    """Per-graph numpy tables shared by all blocks."""

    def __init__(self, g: Graph):
        self.g = g
        n = g.n
        self.n = n
        self.deg = np.array([g.deg(v) for v in range(n)], dtype=np.int64)
        self.slack = np.array([float(t) for t in g.slackness])
        self.omega = np.array([float(w) for w in g.vertex_weight])
        maxdeg = int(self.deg.max()) if n else 0
        self.nbr = np.full((n, max(maxdeg, 1)), n, dtype=np.int64)
        for v in range(n):
            self.nbr[v, : g.deg(v)] = g.in_neighbors[v]
        self.cum = None
        if g.edge_weight is not None:
            cum = np.full((n, max(maxdeg, 1)), 2.0)
            for v in range(n):
                if g.deg(v):
                    ws = np.array([float(w) for w in g.edge_weight[v]])
                    c = np.cumsum(ws) / ws.sum()
                    c[-1] = 1.0
                    cum[v, : g.deg(v)] = c
            self.cum = cum
        self._adj = None
        self._wadj = None

    def choices(self, x: np.ndarray) -> np.ndarray:
        """(b, n) uniforms -> (b, n) choices with sentinel ``n`` for NONE."""
        n = self.n
        b = x.shape[0]
        alive = (x < self.slack) & (self.deg > 0)
        y = np.where(alive, x / np.where(self.slack > 0, self.slack, 1.0), 0.0)
        if self.cum is None:
            idx = np.minimum((y * self.deg).astype(np.int64), np.maximum(self.deg - 1, 0))
        else:
            idx = (y[:, :, None] >= self.cum[None, :, :]).sum(axis=2)
            idx = np.minimum(idx, np.maximum(self.deg - 1, 0))
        ch = self.nbr[np.arange(n)[None, :], idx] if n else np.zeros((b, 0), dtype=np.int64)
        return np.where(alive, ch, n)

    def seed_mask(self, s: Sequence[int], b: int) -> np.ndarray:
        hit = np.zeros((b, self.n + 1), dtype=bool)
        if len(s):
            hit[:, list(s)] = True
        return hit

    def live_edge_values(self, x: np.ndarray, s: Sequence[int]) -> np.ndarray:
        return reach_values(self.choices(x), s, self.omega)

    def forward_values(self, x: np.ndarray, s: Sequence[int]) -> np.ndarray:
        g = self.g
        n = self.n
        b = x.shape[0]
        infected = self.seed_mask(s, b)[:, :n]
        if g.edge_weight is None:
            if self._adj is None:
                adj = np.zeros((n, n), dtype=np.float64)
                for u, v in g.edges():
                    adj[u, v] = 1.0
                self._adj = adj
            alive = (x < self.slack) & (self.deg > 0)
            y = x / np.where(self.slack > 0, self.slack, 1.0)
            theta = np.where(alive, np.minimum((y * self.deg).astype(np.int64), self.deg - 1) + 1, n + 1)
            mat = self._adj
        else:
            if self._wadj is None:
                wadj = np.zeros((n, n), dtype=np.float64)
                for v, wts in enumerate(_normalized_weights(g)):
                    for u, w in wts.items():
                        wadj[u, v] = w
                self._wadj = wadj
            theta = 1.0 - x
            mat = self._wadj
        while True:
            mass = infected.astype(np.float64) @ mat
            new = infected | (mass >= theta - 1e-12 * (g.edge_weight is not None))
            if (new == infected).all():
                break
            infected = new
        return infected.astype(np.float64) @ self.omega

    def reverse_walk_values(self, rng: np.random.Generator, b: int, s: Sequence[int]) -> np.ndarray:
        out = np.empty(b)
        omega = [float(w) for w in self.g.vertex_weight]
        for i in range(b):
            out[i] = sum(omega[v] for v in range(self.n) if reverse_walk_once(self.g, v, s, rng))
        return out


def reach_values(choices: np.ndarray, s: Sequence[int], omega: np.ndarray) -> np.ndarray:
    """Per-sample infected weight for a (b, n) choice matrix (sentinel ``n`` = NONE)."""
    b, n = choices.shape
    ptr = np.concatenate([choices.astype(np.int64), np.full((b, 1), n)], axis=1)
    hit = np.zeros((b, n + 1), dtype=bool)
    if len(s):
        hit[:, list(s)] = True
    for _ in range(max(1, math.ceil(math.log2(n + 1))) + 1):
        hit |= np.take_along_axis(hit, ptr, axis=1)
        ptr = np.take_along_axis(ptr, ptr, axis=1)
    return hit[:, :n].astype(np.float64) @ omega


def live_edge_choices(g: Graph, samples: int, master_seed: int) -> np.ndarray:
    """The (samples, n) live-edge choices used by ``estimate_sigma(method="live_edge")``."""
    sampler = _Sampler(g)
    parts = []
    for b in range(math.ceil(samples / BLOCK)):
        size = min(BLOCK, samples - b * BLOCK)
        x = philox(master_seed, b).random((size, g.n))
        parts.append(sampler.choices(x).astype(np.int32))
    return np.concatenate(parts) if parts else np.zeros((0, g.n), dtype=np.int32)


def summarize(values: np.ndarray, method: str) -> SigmaEstimate:
    """Mean and standard error of per-sample values."""
    mean = math.fsum(values) / len(values)
    if (values == values[0]).all():
        return SigmaEstimate(mean=float(values[0]), std_error=0.0, samples=len(values), method=method)
    var = math.fsum((values - mean) ** 2) / (len(values) - 1)
    return SigmaEstimate(mean=mean, std_error=math.sqrt(var / len(values)), samples=len(values), method=method)


def _block_values(sampler: _Sampler, s: Sequence[int], method: str, master_seed: int, block: int, size: int):
    rng = philox(master_seed, block)
    if method == "reverse_walk":
        return sampler.reverse_walk_values(rng, size, s)
    x = rng.random((size, sampler.n))
    if method == "live_edge":
        return sampler.live_edge_values(x, s)
    return sampler.forward_values(x, s)


def sample_values(
    g: Graph, s: Iterable[int], samples: int, master_seed: int, method: str = "live_edge", workers: int = 1
) -> np.ndarray:
    """Per-sample infected ω-weight, in sample-index order."""
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    s = sorted(set(s))
    sampler = _Sampler(g)
    sizes = [min(BLOCK, samples - b * BLOCK) for b in range(math.ceil(samples / BLOCK))]
    jobs = [(sampler, s, method, master_seed, b, size) for b, size in enumerate(sizes)]
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda j: _block_values(*j), jobs))
    else:
        parts = [_block_values(*j) for j in jobs]
    return np.concatenate(parts)


def estimate_sigma(
    g: Graph,
    s: Iterable[int],
    samples: int,
    master_seed: int,
    method: str = "live_edge",
    workers: int = 1,
) -> SigmaEstimate:
    values = sample_values(g, s, samples, master_seed, method, workers)
    return summarize(values, method)
