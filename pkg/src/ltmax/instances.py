"""Tight and counterexample instances for greedy seed selection.

Each construction has k "hub" vertices u_1..u_k and a sequence of
"target" vertices v_1..v_{k+ell} with decreasing value (star size or vertex
weight); greedy is lured into the v's while the u's are optimal.  Real
exponents are evaluated with mpmath at 50 digits and values within 1e-30 of
an integer are snapped to it before rounding.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import mpmath

from .graph import Graph, make_graph, validate_graph

KINDS = ("tight_undirected", "tight_directed", "tight_vertex_weighted", "tight_normalized_weighted")
DEFAULT_EPS_W = Fraction(1, 10**12)

mpmath.mp.dps = 50
_SNAP = mpmath.mpf("1e-30")


class NonPositiveBudget(ValueError):
    """The star budget cannot hold even the first star plus slack."""


class InfeasibleInstance(ValueError):
    pass


@dataclass(frozen=True)
class InstanceSpec:
    kind: str
    k: int
    m: int | None = None
    alpha: float = 1.2
    beta: float = 0.8
    gamma: float = 0.2
    c: float = 1.0
    eps_w: Fraction = DEFAULT_EPS_W

    def __post_init__(self):
        kind = self.kind.replace("-", "_")
        if kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}; expected one of {KINDS}")
        object.__setattr__(self, "kind", kind)
        if self.k < 2:
            raise ValueError("k must be >= 2")
        if kind != "tight_undirected":
            if self.m is None or self.m < self.k:
                raise ValueError("m >= k is required for this kind")


@dataclass
class LabeledGraph:
    graph: Graph
    kind: str
    k: int
    u_ids: list[int]
    v_ids: list[int]
    star_sizes: list  # star sizes, or vertex weights for the weighted kind
    ell: int
    clique_ids: list[list[int]] = field(default_factory=list)
    leaf_ids: list[list[int]] = field(default_factory=list)
    params: dict = field(default_factory=dict)

    def sidecar(self) -> dict:
        out = {
            "kind": self.kind,
            "k": self.k,
            "u_ids": self.u_ids,
            "v_ids": self.v_ids,
            "star_sizes": [str(x) for x in self.star_sizes],
            "ell": self.ell,
            "params": {key: str(val) for key, val in self.params.items()},
        }
        return out


# ---------------------------------------------------------------------------
# arithmetic


def _snap(x):
    r = mpmath.nint(x)
    return r if abs(x - r) < _SNAP else x


def real_ceil(x) -> int:
    return int(mpmath.ceil(_snap(mpmath.mpf(x))))


def real_floor(x) -> int:
    return int(mpmath.floor(_snap(mpmath.mpf(x))))


def _power(base, exp):
    return mpmath.power(mpmath.mpf(base), mpmath.mpf(str(exp)))


def _frac_ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def fill_sizes(head: list, tail, total) -> list:
    """Take ``head`` then copies of ``tail`` until the sizes sum to ``total``.

    The last size is truncated (partial) when it would overshoot; if the
    budget runs out inside ``head`` fewer than ``len(head)`` sizes result.
    """
    out = []
    remaining = total
    for s in head:
        if remaining <= 0:
            return out
        take = min(s, remaining)
        out.append(take)
        remaining -= take
    if remaining > 0 and tail <= 0:
        raise InfeasibleInstance("tail size must be positive")
    while remaining > 0:
        take = min(tail, remaining)
        out.append(take)
        remaining -= take
    return out


# ---------------------------------------------------------------------------
# generators


class _Builder:
    def __init__(self):
        self.n = 0
        self.edges: list[tuple[int, int, Fraction]] = []
        self.weights: dict[int, Fraction] = {}

    def add(self, count: int = 1) -> list[int]:
        ids = list(range(self.n, self.n + count))
        self.n += count
        return ids

    def edge(self, u: int, v: int, w=Fraction(1)):
        self.edges.append((u, v, Fraction(w)))

    def build(self, directed: bool, weighted: bool = False) -> Graph:
        nbrs = [[] for _ in range(self.n)]
        ew = [[] for _ in range(self.n)]
        for u, v, w in self.edges:
            nbrs[v].append(u)
            ew[v].append(w)
            if not directed:
                nbrs[u].append(v)
                ew[u].append(w)
        order = [sorted(range(len(nb)), key=lambda i: nb[i]) for nb in nbrs]
        nbrs = [[nb[i] for i in o] for nb, o in zip(nbrs, order)]
        ew = [[w[i] for i in o] for w, o in zip(ew, order)]
        omega = [self.weights.get(v, Fraction(1)) for v in range(self.n)]
        return make_graph(self.n, directed, nbrs, vertex_weight=omega, edge_weight=ew if weighted else None)


def _hub_layout(b: _Builder, k: int, nv: int):
    u = b.add(k)
    v = b.add(nv)
    return u, v


def _cliques(b: _Builder, u_ids: list[int], size: int, w=Fraction(1)) -> list[list[int]]:
    out = []
    for u in u_ids:
        members = [u] + b.add(size - 1)
        for i, x in enumerate(members):
            for y in members[i + 1 :]:
                b.edge(x, y, w)
        out.append(members)
    return out


def _stars(b: _Builder, v_ids: list[int], sizes: list[int], directed: bool, w=Fraction(1)) -> list[list[int]]:
    out = []
    for v, s in zip(v_ids, sizes):
        leaves = b.add(int(s) - 1)
        for x in leaves:
            b.edge(v, x, w)
        out.append(leaves)
    return out


def undirected_budget(spec: InstanceSpec) -> int:
    k = spec.k
    slack = 1 - mpmath.mpf(str(spec.c)) / _power(k, spec.gamma)
    value = slack * _power(k, 1 + spec.beta)
    if value < _power(k, spec.beta) + k:
        raise NonPositiveBudget(
            f"(1 - c/k^gamma) k^(1+beta) = {mpmath.nstr(value, 8)} < k^beta + k for k={k}, c={spec.c}"
        )
    return real_floor(value)


def gen_tight_undirected(spec: InstanceSpec) -> LabeledGraph:
    """Cliques around u_i, stars D_j around v_j, complete u-v bipartite edges."""
    if spec.kind != "tight_undirected":
        raise ValueError(f"expected kind tight_undirected, got {spec.kind}")
    k = spec.k
    total = undirected_budget(spec)
    kb = _power(k, spec.beta)
    shrink = 1 - mpmath.mpf(1) / k
    head = [real_ceil(kb * shrink ** (i - 1)) for i in range(1, k + 1)]
    tail = real_ceil(kb * shrink**k)
    sizes = fill_sizes(head, tail, total)
    q = real_ceil(_power(k, spec.alpha))
    b = _Builder()
    u, v = _hub_layout(b, k, len(sizes))
    cliques = _cliques(b, u, q)
    leaves = _stars(b, v, sizes, directed=False)
    for x in u:
        for y in v:
            b.edge(x, y)
    params = {"alpha": spec.alpha, "beta": spec.beta, "gamma": spec.gamma, "c": spec.c, "budget": total, "clique": q}
    return LabeledGraph(b.build(False), spec.kind, k, u, v, sizes, len(sizes) - k, cliques, leaves, params)


def gen_tight_directed(k: int, m: int) -> LabeledGraph:
    """Hubs u_i with in-degree 0 pointing to every v_j; v_j points to its star leaves."""
    if k < 2 or m < k:
        raise ValueError("need k >= 2 and m >= k")
    shrink = 1 - Fraction(1, k)
    head = [_frac_ceil(m * shrink ** (i - 1)) for i in range(1, k + 1)]
    tail = _frac_ceil(m * shrink**k)
    total = m * k - 2 * k
    if total < head[0]:
        raise InfeasibleInstance(f"budget mk-2k={total} is below the first star size {head[0]}")
    sizes = fill_sizes(head, tail, total)
    b = _Builder()
    u, v = _hub_layout(b, k, len(sizes))
    for x in u:
        for y in v:
            b.edge(x, y)
    leaves = _stars(b, v, sizes, directed=True)
    g = b.build(True)
    return LabeledGraph(g, "tight_directed", k, u, v, sizes, len(sizes) - k, [], leaves, {"m": m})


def gen_tight_vertex_weighted(k: int, m: int) -> LabeledGraph:
    """Cliques of size ceil(m^0.1) around u_i; single heavy vertices v_j."""
    if k < 2 or m < k:
        raise ValueError("need k >= 2 and m >= k")
    q = real_ceil(_power(m, 0.1))
    if q < 2:
        raise InfeasibleInstance("ceil(m^0.1) must be at least 2")
    shrink = 1 - Fraction(1, k)
    head = [m * shrink ** (i - 1) for i in range(1, k + 1)]
    tail = m * shrink**k
    total = Fraction(m * k - q * k)
    if total < head[0]:
        raise InfeasibleInstance("weight budget below the first weight")
    weights = fill_sizes(head, tail, total)
    b = _Builder()
    u, v = _hub_layout(b, k, len(weights))
    cliques = _cliques(b, u, q)
    for x in u:
        for y in v:
            b.edge(x, y)
    for y, w in zip(v, weights):
        b.weights[y] = Fraction(w)
    g = b.build(False)
    return LabeledGraph(g, "tight_vertex_weighted", k, u, v, weights, len(weights) - k, cliques, [], {"m": m, "clique": q})


def normalized_total(k: int, m: int) -> int:
    r = math.isqrt(m)
    if r * r == m:
        return k * m - k * r
    return real_floor(k * m - k * mpmath.sqrt(m))


def gen_tight_normalized_weighted(k: int, m: int, eps_w: Fraction = DEFAULT_EPS_W) -> LabeledGraph:
    """Undirected, edge-weighted: star edges carry ``eps_w``, all other edges weight 1."""
    if k < 2 or m < k:
        raise ValueError("need k >= 2 and m >= k")
    eps_w = Fraction(eps_w)
    if eps_w <= 0:
        raise ValueError("eps_w must be positive")
    q = real_ceil(_power(m, 0.1))
    if q < 2:
        raise InfeasibleInstance("ceil(m^0.1) must be at least 2")
    shrink = 1 - Fraction(1, k)
    head = [_frac_ceil(m * shrink ** (i - 1)) for i in range(1, k + 1)]
    tail = _frac_ceil(m * shrink**k)
    total = normalized_total(k, m)
    if total < head[0]:
        raise InfeasibleInstance("star budget below the first star size")
    sizes = fill_sizes(head, tail, total)
    b = _Builder()
    u, v = _hub_layout(b, k, len(sizes))
    cliques = _cliques(b, u, q)
    leaves = _stars(b, v, sizes, directed=False, w=eps_w)
    for x in u:
        for y in v:
            b.edge(x, y)
    g = b.build(False, weighted=True)
    params = {"m": m, "clique": q, "eps_w": eps_w}
    return LabeledGraph(g, "tight_normalized_weighted", k, u, v, sizes, len(sizes) - k, cliques, leaves, params)


def generate(spec: InstanceSpec) -> LabeledGraph:
    if spec.kind == "tight_undirected":
        return gen_tight_undirected(spec)
    if spec.kind == "tight_directed":
        return gen_tight_directed(spec.k, spec.m)
    if spec.kind == "tight_vertex_weighted":
        return gen_tight_vertex_weighted(spec.k, spec.m)
    return gen_tight_normalized_weighted(spec.k, spec.m, spec.eps_w)


# ---------------------------------------------------------------------------
# structure and predictions


def check_structure(lg: LabeledGraph) -> list[str]:
    """Validation errors plus violations of the construction's structural facts."""
    g = lg.graph
    out = list(validate_graph(g))
    k, u, v = lg.k, lg.u_ids, lg.v_ids
    nv = len(v)
    if lg.ell != nv - k:
        out.append("ell does not match the number of v vertices")
    sizes = list(lg.star_sizes)
    if any(a < b for a, b in zip(sizes, sizes[1:])):
        out.append("star sizes not non-increasing")
    if lg.kind == "tight_directed":
        for x in u:
            if g.deg(x) != 0:
                out.append(f"u {x} has in-degree {g.deg(x)}")
        for y in v:
            if sorted(g.in_neighbors[y]) != sorted(u):
                out.append(f"v {y} in-neighbors differ from the hubs")
        for y, leaves in zip(v, lg.leaf_ids):
            for x in leaves:
                if g.in_neighbors[x] != (y,):
                    out.append(f"leaf {x} in-neighbors {g.in_neighbors[x]}")
        if sum(sizes) != lg.params["m"] * k - 2 * k:
            out.append("star sizes do not sum to mk-2k")
    elif lg.kind == "tight_vertex_weighted":
        m, q = lg.params["m"], lg.params["clique"]
        if sum(sizes) != m * k - q * k:
            out.append("v weights do not sum to mk - ceil(m^0.1) k")
        for y in v:
            if g.deg(y) != k:
                out.append(f"v {y} degree {g.deg(y)} != k")
        for x in u:
            if g.deg(x) != q - 1 + nv:
                out.append(f"u {x} degree {g.deg(x)}")
    else:
        q = len(lg.clique_ids[0]) if lg.clique_ids else 1
        for y, s in zip(v, sizes):
            if g.deg(y) != k + s - 1:
                out.append(f"v {y} degree {g.deg(y)} != k + |D| - 1")
        for x in u:
            if g.deg(x) != q - 1 + nv:
                out.append(f"u {x} degree {g.deg(x)} != clique - 1 + (k + ell)")
        if lg.kind == "tight_undirected" and sum(sizes) != lg.params["budget"]:
            out.append("star sizes do not hit the budget")
        if lg.kind == "tight_normalized_weighted" and sum(sizes) != normalized_total(k, lg.params["m"]):
            out.append("star sizes do not sum to km - k sqrt(m)")
    return out


def predicted_ratio_bounds(spec: InstanceSpec) -> tuple[Fraction, Fraction]:
    """(1 - (1-1/k)^k, predicted greedy/optimal ratio) for the directed and weighted kinds.

    Directed: the greedy value is the sum of the first k star sizes (ceilings
    kept) over the optimum mk - k.  The weighted kinds use the leading-order
    expression with the o(m^0.1) term taken as k * ceil(m^0.1).
    """
    k = spec.k
    shrink = 1 - Fraction(1, k)
    lower = 1 - shrink**k
    if spec.kind == "tight_undirected":
        raise ValueError("no closed-form ratio for the undirected construction")
    m = spec.m
    if spec.kind == "tight_directed":
        head = sum(_frac_ceil(m * shrink ** (i - 1)) for i in range(1, k + 1))
        return lower, Fraction(head, m * k - k)
    q = real_ceil(_power(m, 0.1))
    if spec.kind == "tight_vertex_weighted":
        head = sum(m * shrink ** (i - 1) for i in range(1, k + 1))
        return lower, (head + k * q) / (m * k - q * k)
    head = sum(_frac_ceil(m * shrink ** (i - 1)) for i in range(1, k + 1))
    return lower, Fraction(head + k * q) / normalized_total(k, m)


def normalized_sigma_prediction(lg: LabeledGraph) -> Fraction:
    """σ({v_1..v_k}) on the normalized instance as eps_w -> 0.

    Needs ell = 0 (every v is a seed) and cliques of size 2.  The stars are
    fully covered; a hub is infected iff its live edge points at some v, and
    its clique partner's only edge points at the hub.
    """
    if lg.kind != "tight_normalized_weighted" or lg.ell != 0:
        raise ValueError("prediction implemented for ell = 0 only")
    q = len(lg.clique_ids[0])
    nv = len(lg.v_ids)
    p_hub = Fraction(nv, nv + q - 1)
    covered = sum(lg.star_sizes)
    if q == 2:
        return covered + lg.k * 2 * p_hub
    raise ValueError("prediction implemented for clique size 2 only")


def spec_dict(spec: InstanceSpec) -> dict:
    d = asdict(spec)
    d["eps_w"] = str(spec.eps_w)
    return d
