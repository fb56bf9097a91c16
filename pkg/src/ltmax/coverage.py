"""Weighted Max-k-Coverage and the reduction from influence maximization.

Elements are (vertex, configuration) pairs weighted by ω(vertex)·Pr(config);
the subset of vertex u holds the pairs (w, g) where u reaches w under g.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .exact import ConfigTable, EnumerationBudget, _omega_scaled
from .graph import Graph


@dataclass
class CoverageInstance:
    """Elements with weights ``weight_num[e] / denom``; ``member[j, e]`` marks subset j."""

    weight_num: np.ndarray
    denom: int
    member: np.ndarray
    k: int

    @classmethod
    def from_sets(cls, weights: Sequence, subsets: Sequence[Iterable[int]], k: int) -> "CoverageInstance":
        weights = [Fraction(w) for w in weights]
        if any(w <= 0 for w in weights):
            raise ValueError("element weights must be positive")
        denom = math.lcm(*(w.denominator for w in weights)) if weights else 1
        nums = [int(w * denom) for w in weights]
        dtype = np.int64 if sum(nums) < (1 << 62) else object
        member = np.zeros((len(subsets), len(weights)), dtype=bool)
        for j, s in enumerate(subsets):
            for e in s:
                if not 0 <= e < len(weights):
                    raise ValueError(f"subset {j} has invalid element {e}")
                member[j, e] = True
        return cls(np.array(nums, dtype=dtype), denom, member, k)

    @property
    def num_elements(self) -> int:
        return self.member.shape[1]

    @property
    def num_subsets(self) -> int:
        return self.member.shape[0]

    @property
    def elements(self) -> list[tuple[int, Fraction]]:
        return [(i, Fraction(int(x), self.denom)) for i, x in enumerate(self.weight_num)]

    @property
    def subsets(self) -> list[list[int]]:
        return [np.flatnonzero(row).tolist() for row in self.member]

    def mass(self, mask: np.ndarray) -> int:
        """Numerator of the total weight of the elements in ``mask``."""
        if self.weight_num.dtype == object:
            return int(self.weight_num[mask].sum()) if mask.any() else 0
        return int(self.weight_num[mask].sum())

    def to_json(self) -> str:
        return json.dumps(
            {
                "k": self.k,
                "elements": [[i, str(w)] for i, w in self.elements],
                "subsets": self.subsets,
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "CoverageInstance":
        d = json.loads(text)
        return cls.from_sets([Fraction(w) for _, w in d["elements"]], d["subsets"], d["k"])


def build_coverage_instance(
    g: Graph, budget: EnumerationBudget | None = None, k: int = 1
) -> tuple[CoverageInstance, dict[int, int]]:
    """The reduction: one element per (vertex, configuration), one subset per vertex."""
    t = ConfigTable(g, budget)
    b, wden = _omega_scaled(g)
    n, C = g.n, t.size
    w = t.weight.astype(object) if t.weight.dtype == object else t.weight
    # element index = vertex * C + configuration
    dtype = np.int64 if t.denom * max(b, default=1) < (1 << 62) else object
    nums = np.concatenate([np.asarray(w, dtype=dtype) * b[v] for v in range(n)]) if n else np.zeros(0, dtype)
    member = np.zeros((n, n * C), dtype=bool)
    for u in range(n):
        member[u] = t.reached([u]).T.reshape(-1)
    return CoverageInstance(nums, t.denom * wden, member, k), {v: v for v in range(n)}


def coverage_value(inst: CoverageInstance, chosen: Iterable[int]) -> Fraction:
    chosen = list(chosen)
    if not chosen:
        return Fraction(0)
    return Fraction(inst.mass(inst.member[chosen].any(axis=0)), inst.denom)


def coverage_greedy(inst: CoverageInstance, k: int | None = None) -> list[int]:
    """Greedy picks by marginal weight, smallest index on ties."""
    k = inst.k if k is None else k
    if k > inst.num_subsets:
        raise ValueError("k exceeds the number of subsets")
    covered = np.zeros(inst.num_elements, dtype=bool)
    picks: list[int] = []
    for _ in range(k):
        best, best_gain = None, -1
        for j in range(inst.num_subsets):
            if j in picks:
                continue
            gain = inst.mass(inst.member[j] & ~covered)
            if gain > best_gain:
                best, best_gain = j, gain
        picks.append(best)
        covered |= inst.member[best]
    return picks


def coverage_optimal(inst: CoverageInstance, k: int | None = None, cap: int = 10**6) -> tuple[tuple[int, ...], Fraction]:
    """Exhaustive optimum, lexicographically smallest on ties."""
    k = inst.k if k is None else k
    M = inst.num_subsets
    if math.comb(M, k) > cap:
        raise ValueError(f"C({M},{k}) exceeds cap {cap}")
    best, best_val = (), -1
    for combo in itertools.combinations(range(M), k):
        val = inst.mass(inst.member[list(combo)].any(axis=0)) if combo else 0
        if val > best_val:
            best, best_val = combo, val
    return best, Fraction(best_val, inst.denom)


# ---------------------------------------------------------------------------
# lemma checks


@dataclass
class LemmaCheck:
    lemma: str
    epsilon: Fraction | None
    applicable: bool
    holds: bool
    lhs: Fraction
    rhs: Fraction | None

    def as_dict(self) -> dict:
        return {
            "lemma": self.lemma,
            "epsilon": None if self.epsilon is None else str(self.epsilon),
            "applicable": self.applicable,
            "holds": self.holds,
            "lhs": str(self.lhs),
            "rhs": None if self.rhs is None else str(self.rhs),
        }


def check_coverage_lemmas(
    inst: CoverageInstance,
    greedy: Sequence[int] | None = None,
    optimal: Sequence[int] | None = None,
    exhaustive_limit: int = 8,
) -> list[LemmaCheck]:
    """Evaluate the greedy Max-k-Coverage lemmas on one instance.

    Every conditional lemma "if H(eps) then val(greedy) >= (base + f(eps)) val*"
    is checked at the supremum eps0 of the eps making H true; the conclusion
    is monotone in eps, so holding at eps0 covers every admissible eps.  They
    are only asserted for k >= 2 (at k = 1 greedy is optimal and the base is
    already 1).  The unconditional bound against every l-collection is
    enumerated when the instance has at most ``exhaustive_limit`` subsets.
    """
    k = inst.k
    greedy = list(coverage_greedy(inst) if greedy is None else greedy)
    optimal = list(coverage_optimal(inst)[0] if optimal is None else optimal)
    val_g = coverage_value(inst, greedy)
    val_o = coverage_value(inst, optimal)
    out: list[LemmaCheck] = []
    if k == 0 or val_o == 0:
        return out
    base = 1 - (1 - Fraction(1, k)) ** k
    ratio = val_g / val_o
    d = inst.denom

    def add(name, eps, bonus):
        if eps is None or eps <= 0:
            out.append(LemmaCheck(name, eps, False, True, ratio, None))
            return
        rhs = base + bonus(eps)
        out.append(LemmaCheck(name, eps, True, ratio >= rhs, ratio, rhs))

    if k >= 2:
        s1 = inst.member[greedy[0]]
        union = inst.member[optimal].any(axis=0)
        in_opt = any(np.array_equal(s1, inst.member[j]) for j in optimal)
        if in_opt:
            rhs = base + Fraction(1, 4 * k * k)
            out.append(LemmaCheck("first_in_optimal", None, True, ratio >= rhs, ratio, rhs))
        else:
            out.append(LemmaCheck("first_in_optimal", None, False, True, ratio, None))
        x = Fraction(inst.mass(s1 & union), d) / val_o
        add("first_intersection", abs(x - Fraction(1, k)), lambda e: e / 4)
        sizes = [Fraction(inst.mass(inst.member[j]), d) for j in optimal]
        add("disjointness", sum(sizes) / val_o - 1, lambda e: e / (8 * k))
        add("outside_mass", Fraction(inst.mass(s1 & ~union), d) / val_o, lambda e: e / 16)
        add("balance", Fraction(1, k) - min(sizes) / val_o, lambda e: e / (8 * k))
        add("first_set", Fraction(inst.mass(s1), d) / val_o - Fraction(1, k), lambda e: e / 8)

    M = inst.num_subsets
    if M <= exhaustive_limit:
        worst = None
        for ell in range(1, M + 1):
            factor = 1 - (1 - Fraction(1, ell)) ** k
            for combo in itertools.combinations(range(M), ell):
                other = coverage_value(inst, combo)
                rhs = factor * other
                if worst is None or val_g - rhs < worst[0]:
                    worst = (val_g - rhs, ell, rhs)
        out.append(LemmaCheck("k_vs_ell_collection", None, True, worst[0] >= 0, val_g, worst[2]))
    return out


def random_coverage_instance(rng: np.random.Generator, max_elements: int = 12, max_subsets: int = 8, max_k: int = 4):
    N = int(rng.integers(1, max_elements + 1))
    M = int(rng.integers(1, max_subsets + 1))
    k = int(rng.integers(1, min(max_k, M) + 1))
    weights = [Fraction(int(x)) for x in rng.integers(1, 10, size=N)]
    subsets = []
    for _ in range(M):
        p = rng.random()
        subsets.append([e for e in range(N) if rng.random() < p])
    return CoverageInstance.from_sets(weights, subsets, k)


# ---------------------------------------------------------------------------
# C1 / C2 / C3


@dataclass(frozen=True)
class IntersectionDecomposition:
    c1: Fraction
    c2: Fraction
    c3: Fraction
    total: Fraction

    @property
    def identity_holds(self) -> bool:
        return self.c1 + self.c2 + self.c3 == self.total


def intersection_decomposition(
    g: Graph, v1: int, s_star: Iterable[int], budget: EnumerationBudget | None = None
) -> IntersectionDecomposition:
    """Split Σ_w ω(w)·Pr(v1 -> w and S* -> w) by the reverse trace from w.

    C1: v1 precedes every S* vertex; C2: exactly one S* vertex precedes v1;
    C3: two or more do.  ``total`` is computed separately from forward
    reachability of {v1} and S*.
    """
    s_star = sorted(set(s_star))
    if v1 in s_star:
        raise ValueError("v1 must not belong to S*")
    if not g.uniform:
        raise ValueError("decomposition needs an unweighted graph with slackness 1")
    t = ConfigTable(g, budget)
    b, wden = _omega_scaled(g)
    den = t.denom * wden
    big = g.n + 1
    acc = [0, 0, 0]
    for w in range(g.n):
        _, _, weight = t.traces(w)
        pos = t.positions(w)
        p1 = pos[:, v1]
        ps = pos[:, s_star] if s_star else np.full((pos.shape[0], 1), big)
        both = (p1 < big) & (ps < big).any(axis=1)
        before = (ps < p1[:, None]).sum(axis=1)
        for cls, mask in enumerate((both & (before == 0), both & (before == 1), both & (before >= 2))):
            if mask.any():
                acc[cls] += b[w] * int(weight[mask].sum())
    joint = t.reached([v1]) & t.reached(s_star)
    tw = t.weight.astype(object)
    total = sum(b[w] * int((tw[joint[:, w]]).sum()) for w in range(g.n) if joint[:, w].any())
    return IntersectionDecomposition(*(Fraction(a, den) for a in acc), Fraction(total, den))
