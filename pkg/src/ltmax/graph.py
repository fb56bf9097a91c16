"""Graph model, text format and random generation.

Vertices are dense integers in ``[0, n)``.  Every graph is stored as
in-adjacency; an undirected edge is stored as two anti-parallel entries.
Vertex weights, slackness and edge weights are exact ``Fraction`` values so
the exact oracles never see floating point.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

ONE = Fraction(1)


class GraphFormatError(ValueError):
    """Raised by :func:`parse_graph` on malformed or invalid input."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class Graph:
    n: int
    directed: bool
    in_neighbors: tuple[tuple[int, ...], ...]
    vertex_weight: tuple[Fraction, ...]
    slackness: tuple[Fraction, ...]
    # aligned with in_neighbors: edge_weight[v][i] is w'(in_neighbors[v][i], v)
    edge_weight: tuple[tuple[Fraction, ...], ...] | None = None
    candidates: tuple[int, ...] | None = None

    def deg(self, v: int) -> int:
        return len(self.in_neighbors[v])

    @cached_property
    def out_neighbors(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.n)]
        for v, nbrs in enumerate(self.in_neighbors):
            for u in nbrs:
                out[u].append(v)
        return tuple(tuple(sorted(o)) for o in out)

    @property
    def num_entries(self) -> int:
        return sum(len(nb) for nb in self.in_neighbors)

    @property
    def uniform(self) -> bool:
        """True when live-edge choice is uniform and never empty (no weights, slackness 1)."""
        return self.edge_weight is None and all(t == 1 for t in self.slackness)

    @property
    def unit_vertex_weights(self) -> bool:
        return all(w == 1 for w in self.vertex_weight)

    def candidate_list(self) -> list[int]:
        return list(self.candidates) if self.candidates is not None else list(range(self.n))

    def edges(self) -> list[tuple[int, int]]:
        """Directed entries (u, v) meaning u is an in-neighbor of v."""
        return [(u, v) for v in range(self.n) for u in self.in_neighbors[v]]

    def undirected_edges(self) -> list[tuple[int, int]]:
        return sorted({(min(u, v), max(u, v)) for u, v in self.edges()})

    def edge_weight_of(self, u: int, v: int) -> Fraction:
        if self.edge_weight is None:
            return ONE
        return self.edge_weight[v][self.in_neighbors[v].index(u)]

    def choice_distribution(self, v: int) -> list[tuple[int | None, Fraction]]:
        """Live-edge choice of ``v``: ``(in-neighbor or None, probability)`` pairs.

        With both edge weights and slackness present the weight-proportional
        choice is thinned by the slackness of ``v``.
        """
        nbrs = self.in_neighbors[v]
        theta = self.slackness[v]
        out: list[tuple[int | None, Fraction]] = []
        if not nbrs:
            return [(None, ONE)]
        if theta < 1:
            out.append((None, 1 - theta))
        if theta == 0:
            return out
        if self.edge_weight is None:
            p = theta / len(nbrs)
            out.extend((u, p) for u in nbrs)
        else:
            ws = self.edge_weight[v]
            total = sum(ws)
            out.extend((u, theta * w / total) for u, w in zip(nbrs, ws))
        return out

    def with_(self, **changes) -> "Graph":
        """Copy with some fields replaced (normalized through :func:`make_graph`)."""
        fields = dict(
            n=self.n,
            directed=self.directed,
            in_neighbors=self.in_neighbors,
            vertex_weight=self.vertex_weight,
            slackness=self.slackness,
            edge_weight=self.edge_weight,
            candidates=self.candidates,
        )
        fields.update(changes)
        return make_graph(**fields)


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x) if not isinstance(x, float) else Fraction(str(x))


def make_graph(
    n: int,
    directed: bool,
    in_neighbors: Sequence[Iterable[int]],
    vertex_weight: Sequence | None = None,
    slackness: Sequence | None = None,
    edge_weight: Sequence[Sequence] | None = None,
    candidates: Iterable[int] | None = None,
) -> Graph:
    """Build a :class:`Graph` with normalized field types (sorted adjacency, Fractions)."""
    nbrs = [list(nb) for nb in in_neighbors]
    if len(nbrs) != n:
        raise ValueError(f"in_neighbors has {len(nbrs)} rows for n={n}")
    ews = None
    if edge_weight is not None:
        ews = []
        for v in range(n):
            row = list(edge_weight[v])
            if len(row) != len(nbrs[v]):
                raise ValueError(f"edge_weight row {v} misaligned with in_neighbors")
            pairs = sorted(zip(nbrs[v], (_frac(w) for w in row)))
            nbrs[v] = [u for u, _ in pairs]
            ews.append(tuple(w for _, w in pairs))
        if all(not row for row in ews):
            ews = None
        else:
            ews = tuple(ews)
    else:
        nbrs = [sorted(nb) for nb in nbrs]
    return Graph(
        n=n,
        directed=bool(directed),
        in_neighbors=tuple(tuple(nb) for nb in nbrs),
        vertex_weight=tuple(_frac(w) for w in vertex_weight) if vertex_weight is not None else (ONE,) * n,
        slackness=tuple(_frac(t) for t in slackness) if slackness is not None else (ONE,) * n,
        edge_weight=ews,
        candidates=tuple(candidates) if candidates is not None else None,
    )


def from_edges(
    n: int,
    edges: Iterable[tuple[int, int]],
    directed: bool = False,
    edge_weights: dict[tuple[int, int], object] | None = None,
    **kwargs,
) -> Graph:
    """Graph from an edge list; for undirected graphs each pair is listed once."""
    nbrs: list[list[int]] = [[] for _ in range(n)]
    ews: list[list[Fraction]] | None = [[] for _ in range(n)] if edge_weights is not None else None
    for u, v in edges:
        pairs = [(u, v)] if directed else [(u, v), (v, u)]
        for a, b in pairs:
            nbrs[b].append(a)
            if ews is not None:
                w = edge_weights.get((u, v), edge_weights.get((v, u), 1))
                ews[b].append(_frac(w))
    return make_graph(n, directed, nbrs, edge_weight=ews, **kwargs)


def path_graph(n: int) -> Graph:
    return from_edges(n, [(i, i + 1) for i in range(n - 1)])


def star_graph(n: int) -> Graph:
    """Star on ``n`` vertices with center 0."""
    return from_edges(n, [(0, i) for i in range(1, n)])


def complete_graph(n: int) -> Graph:
    return from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def edgeless_graph(n: int, directed: bool = False) -> Graph:
    return from_edges(n, [], directed=directed)


# ---------------------------------------------------------------------------
# validation


def validate_graph(g: Graph) -> list[str]:
    """Return human-readable invariant violations; empty iff ``g`` is valid."""
    out: list[str] = []
    n = g.n
    if len(g.in_neighbors) != n:
        return [f"in_neighbors has {len(g.in_neighbors)} rows, expected {n}"]
    entries: set[tuple[int, int]] = set()
    for v, nbrs in enumerate(g.in_neighbors):
        seen = set()
        for u in nbrs:
            if not (0 <= u < n):
                out.append(f"out-of-range id {u} in in_neighbors({v})")
                continue
            if u == v:
                out.append(f"self-loop at {v}")
            if u in seen:
                out.append(f"duplicate edge ({u},{v})")
            seen.add(u)
            entries.add((u, v))
        if list(nbrs) != sorted(nbrs):
            out.append(f"in_neighbors({v}) not sorted")
    if not g.directed:
        for u, v in sorted(entries):
            if (v, u) not in entries:
                out.append(f"asymmetry at ({u},{v})")
    if g.edge_weight is not None:
        if len(g.edge_weight) != n:
            out.append("edge_weight row count mismatch")
        else:
            for v in range(n):
                if len(g.edge_weight[v]) != len(g.in_neighbors[v]):
                    out.append(f"edge_weight row {v} misaligned")
                    continue
                for u, w in zip(g.in_neighbors[v], g.edge_weight[v]):
                    if w <= 0:
                        out.append(f"nonpositive edge weight at ({u},{v})")
                    if not g.directed and (v, u) in entries and 0 <= u < n:
                        nb_u = g.in_neighbors[u]
                        if v in nb_u and len(g.edge_weight[u]) == len(nb_u):
                            if g.edge_weight[u][nb_u.index(v)] != w:
                                out.append(f"asymmetric edge weight at ({u},{v})")
    if len(g.vertex_weight) != n:
        out.append("vertex_weight length mismatch")
    else:
        for v, w in enumerate(g.vertex_weight):
            if w <= 0:
                out.append(f"nonpositive weight at {v}")
    if len(g.slackness) != n:
        out.append("slackness length mismatch")
    else:
        for v, t in enumerate(g.slackness):
            if not (0 <= t <= 1):
                out.append(f"slackness out of [0,1] at {v}")
    if g.candidates is not None:
        if len(set(g.candidates)) != len(g.candidates):
            out.append("duplicate candidates")
        for c in g.candidates:
            if not (0 <= c < n):
                out.append(f"candidate {c} out of range")
    return out


# ---------------------------------------------------------------------------
# text format


def format_number(x: Fraction) -> str:
    """Exact decimal when ``x`` terminates, else ``p/q``."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    d = x.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{x.numerator}/{x.denominator}"
    digits = max(twos, fives)
    scaled = x * 10**digits
    sign = "-" if scaled < 0 else ""
    s = str(abs(scaled.numerator)).rjust(digits + 1, "0")
    return f"{sign}{s[:-digits]}.{s[-digits:]}"


def _parse_number(tok: str, line: int) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise GraphFormatError(f"bad number {tok!r}", line) from None


def _parse_id(tok: str, n: int, line: int) -> int:
    try:
        i = int(tok)
    except ValueError:
        raise GraphFormatError(f"bad vertex id {tok!r}", line) from None
    if not (0 <= i < n):
        raise GraphFormatError(f"vertex id {i} out of range [0,{n})", line)
    return i


def _options(tokens: list[str], allowed: set[str], line: int) -> dict[str, Fraction]:
    opts = {}
    for tok in tokens:
        key, eq, val = tok.partition("=")
        if not eq or key not in allowed:
            raise GraphFormatError(f"unexpected token {tok!r}", line)
        if key in opts:
            raise GraphFormatError(f"repeated option {key!r}", line)
        opts[key] = _parse_number(val, line)
    return opts


def parse_graph(text: str | bytes) -> Graph:
    """Parse the line-oriented graph format (see README)."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    header = None
    n = 0
    weights: dict[int, Fraction] = {}
    slack: dict[int, Fraction] = {}
    seen_v: set[int] = set()
    edges: dict[tuple[int, int], Fraction | None] = {}
    any_weighted = False
    candidates = None
    for lineno, raw in enumerate(io.StringIO(text), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if header is None:
            if tok[0] != "graph" or len(tok) != 3 or tok[2] not in ("directed", "undirected"):
                raise GraphFormatError("expected 'graph <n> <directed|undirected>'", lineno)
            try:
                n = int(tok[1])
            except ValueError:
                raise GraphFormatError(f"bad vertex count {tok[1]!r}", lineno) from None
            if n < 0:
                raise GraphFormatError("negative vertex count", lineno)
            header = tok[2] == "directed"
            continue
        kind = tok[0]
        if kind == "v":
            if len(tok) < 2:
                raise GraphFormatError("expected 'v <id> [weight=..] [slack=..]'", lineno)
            v = _parse_id(tok[1], n, lineno)
            if v in seen_v:
                raise GraphFormatError(f"vertex {v} declared twice", lineno)
            seen_v.add(v)
            opts = _options(tok[2:], {"weight", "slack"}, lineno)
            if "weight" in opts:
                if opts["weight"] <= 0:
                    raise GraphFormatError(f"nonpositive weight at {v}", lineno)
                weights[v] = opts["weight"]
            if "slack" in opts:
                if not (0 <= opts["slack"] <= 1):
                    raise GraphFormatError(f"slack out of [0,1] at {v}", lineno)
                slack[v] = opts["slack"]
        elif kind == "e":
            if len(tok) < 3:
                raise GraphFormatError("expected 'e <u> <v> [weight=..]'", lineno)
            u = _parse_id(tok[1], n, lineno)
            v = _parse_id(tok[2], n, lineno)
            if u == v:
                raise GraphFormatError(f"self-loop at {u}", lineno)
            opts = _options(tok[3:], {"weight"}, lineno)
            w = opts.get("weight")
            if w is not None:
                if w <= 0:
                    raise GraphFormatError(f"nonpositive edge weight on ({u},{v})", lineno)
                any_weighted = True
            key = (u, v) if header else (min(u, v), max(u, v))
            if key in edges:
                if not header and edges[key] != w:
                    raise GraphFormatError(f"asymmetric undirected edge ({u},{v})", lineno)
                raise GraphFormatError(f"duplicate edge ({u},{v})", lineno)
            edges[key] = w
        elif kind == "candidates":
            if candidates is not None:
                raise GraphFormatError("candidates given twice", lineno)
            candidates = [_parse_id(t, n, lineno) for t in tok[1:]]
            if len(set(candidates)) != len(candidates):
                raise GraphFormatError("duplicate candidate", lineno)
        else:
            raise GraphFormatError(f"unknown record {kind!r}", lineno)
    if header is None:
        raise GraphFormatError("missing 'graph' header", 1)
    ew = {key: (w if w is not None else ONE) for key, w in edges.items()} if any_weighted else None
    return from_edges(
        n,
        edges.keys(),
        directed=header,
        edge_weights=ew,
        vertex_weight=[weights.get(v, ONE) for v in range(n)],
        slackness=[slack.get(v, ONE) for v in range(n)],
        candidates=candidates,
    )


def serialize_graph(g: Graph) -> str:
    lines = [f"graph {g.n} {'directed' if g.directed else 'undirected'}"]
    for v in range(g.n):
        opts = []
        if g.vertex_weight[v] != 1:
            opts.append(f"weight={format_number(g.vertex_weight[v])}")
        if g.slackness[v] != 1:
            opts.append(f"slack={format_number(g.slackness[v])}")
        if opts:
            lines.append(f"v {v} " + " ".join(opts))
    pairs = sorted(g.edges()) if g.directed else g.undirected_edges()
    for u, v in pairs:
        if g.edge_weight is not None:
            lines.append(f"e {u} {v} weight={format_number(g.edge_weight_of(u, v))}")
        else:
            lines.append(f"e {u} {v}")
    if g.candidates is not None:
        lines.append("candidates" + "".join(f" {c}" for c in g.candidates))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# random graphs


def philox(seed: int, *counter: int) -> np.random.Generator:
    """Philox-4x64 generator keyed by a 64-bit seed; ``counter`` selects a substream."""
    ctr = [0, 0, 0, 0]
    for i, c in enumerate(counter[:3]):
        ctr[i + 1] = int(c) & 0xFFFFFFFFFFFFFFFF
    return np.random.Generator(np.random.Philox(key=int(seed) & 0xFFFFFFFFFFFFFFFF, counter=ctr))


def generate_random_graph(n: int, p: float, seed: int, directed: bool = False) -> Graph:
    """Erdős–Rényi G(n, p); a pure function of its arguments."""
    if n < 1 or not (0 <= p <= 1):
        raise ValueError("need n >= 1 and 0 <= p <= 1")
    rng = philox(seed)
    if directed:
        pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    else:
        pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    draws = rng.random(len(pairs))
    return from_edges(n, [e for e, x in zip(pairs, draws) if x < p], directed=directed)
