"""Branch-and-reduce search for a 3-path vertex cover of size at most k.

Each search node re-indexes the residual graph; a ``labels`` list maps residual
ids back to input ids so certificates are always reported in input numbering.
Steps are tried strictly in order, and every step re-checks its preconditions
before emitting branches.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from typing import Any

from .graph import (
    Graph,
    connected_components,
    is_dominated,
    is_p3_free,
    neighborhood,
    satellites_of,
)
from .oracle import path_cycle_cover_size


class InvariantViolation(AssertionError):
    """A structural claim the algorithm depends on did not hold."""


class Rule(str, enum.Enum):
    TRIVIAL = "trivial"
    TAIL = "tail"
    DOMINATED = "dominated"
    SATELLITE_DEG4 = "satellite_deg4"
    NORMAL_DEG4 = "normal_deg4"
    CHAIN = "chain"
    TRIANGLE_NEIGHBOR = "triangle_neighbor"
    DEG2_WITH_DEG3 = "deg2_with_deg3"
    BIPARTITE_23 = "bipartite_23"
    REGULAR3 = "regular3"


STEP_OF_RULE = {rule: i for i, rule in enumerate(Rule, start=1)}
REDUCTIONS = frozenset({Rule.TRIVIAL, Rule.TAIL, Rule.BIPARTITE_23})


@dataclass(frozen=True)
class BranchStep:
    rule: Rule
    deleted: frozenset[int]
    added_to_cover: frozenset[int]
    k_decrement: int

    @classmethod
    def make(cls, rule: Rule, deleted, cover) -> BranchStep:
        cover = frozenset(cover)
        deleted = frozenset(deleted) | cover
        return cls(rule, deleted, cover, len(cover))


@dataclass(frozen=True)
class Dispatch:
    step: int
    rule: Rule
    feature: Any


@dataclass
class SolveStats:
    nodes_total: int = 0
    nodes_per_rule: Counter = field(default_factory=Counter)
    max_depth: int = 0

    def as_dict(self) -> dict:
        return {
            "nodes": self.nodes_total,
            "per_rule": {r.value: self.nodes_per_rule[r] for r in Rule if self.nodes_per_rule[r]},
            "max_depth": self.max_depth,
        }


@dataclass
class SolveOutcome:
    answer: bool
    cover: list[int] | None
    stats: SolveStats


# ---------------------------------------------------------------- dispatch


def _pick_max_degree(g: Graph, candidates) -> int | None:
    best = None
    for v in candidates:
        if best is None or g.degree(v) > g.degree(best):
            best = v
    return best


def _small_components(g: Graph) -> list[list[int]]:
    return [c for c in connected_components(g) if max(g.degree(v) for v in c) <= 2]


def _find_tail(g: Graph):
    for v in g.vertices():
        if g.degree(v) == 1:
            (u,) = g.adj[v]
            if g.degree(u) == 2:
                (w,) = g.adj[u] - {v}
                return v, u, w
    return None


def _dominator(g: Graph, v: int) -> int | None:
    for u in g.neighbors(v):
        if is_dominated(g, v, u):
            return u
    return None


def _find_chain(g: Graph):
    for u1 in g.vertices():
        if g.degree(u1) != 2:
            continue
        for u0 in g.neighbors(u1):
            if g.degree(u0) < 3:
                continue
            (u2,) = g.adj[u1] - {u0}
            if g.degree(u2) == 2:
                (u3,) = g.adj[u2] - {u1}
                if u3 == u0:
                    raise InvariantViolation(f"chain closes on itself at {u0}")
                return u0, u1, u2, u3
    return None


def _find_triangle_neighbor(g: Graph):
    for v in g.vertices():
        if g.degree(v) != 2:
            continue
        for u in g.neighbors(v):
            (w,) = g.adj[v] - {u}
            others = [x for x in g.neighbors(u) if x != v]
            for i, u1 in enumerate(others):
                for u2 in others[i + 1 :]:
                    if g.has_edge(u1, u2):
                        return v, u, w, u1, u2
    return None


def _find_deg2_with_deg3(g: Graph):
    for v in g.vertices():
        if g.degree(v) != 2:
            continue
        for u in g.neighbors(v):
            for u1 in g.neighbors(u):
                if u1 != v and g.degree(u1) == 3:
                    (w,) = g.adj[v] - {u}
                    return v, u, w, u1
    return None


def bipartite_23_sides(g: Graph, comp: list[int]) -> tuple[list[int], list[int]] | None:
    """Sides (degree-2 side, degree-3 side) if ``comp`` is such a bipartite graph."""
    v1 = [v for v in comp if g.degree(v) == 2]
    v2 = [v for v in comp if g.degree(v) == 3]
    if not v1 or not v2 or len(v1) + len(v2) != len(comp):
        return None
    side2 = set(v1)
    for v in v1:
        if any(u in side2 for u in g.adj[v]):
            return None
    return v1, v2


def step_dispatch(g: Graph) -> Dispatch | None:
    """First applicable step on a non-empty graph, or None for the empty graph."""
    if g.n == 0:
        return None
    small = _small_components(g)
    if small:
        return Dispatch(1, Rule.TRIVIAL, small)
    tail = _find_tail(g)
    if tail:
        return Dispatch(2, Rule.TAIL, tail)
    v = _pick_max_degree(g, (x for x in g.vertices() if g.degree(x) >= 3 and _dominator(g, x) is not None))
    if v is not None:
        return Dispatch(3, Rule.DOMINATED, (v, _dominator(g, v)))
    if g.max_degree() >= 4:
        v = _pick_max_degree(
            g, (x for x in g.vertices() if g.degree(x) >= 4 and next(satellites_of(g, x), None))
        )
        if v is not None:
            return Dispatch(4, Rule.SATELLITE_DEG4, v)
        v = _pick_max_degree(g, (x for x in g.vertices() if g.degree(x) >= 4))
        return Dispatch(5, Rule.NORMAL_DEG4, v)
    chain = _find_chain(g)
    if chain:
        return Dispatch(6, Rule.CHAIN, chain)
    tri = _find_triangle_neighbor(g)
    if tri:
        return Dispatch(7, Rule.TRIANGLE_NEIGHBOR, tri)
    found = _find_deg2_with_deg3(g)
    if found:
        return Dispatch(8, Rule.DEG2_WITH_DEG3, found)
    # only 3-regular components and bipartite (2,3) components may remain
    comps = connected_components(g)
    for comp in comps:
        sides = bipartite_23_sides(g, comp)
        if sides is not None:
            return Dispatch(9, Rule.BIPARTITE_23, sides)
        if any(g.degree(v) != 3 for v in comp):
            raise InvariantViolation(f"component {comp} is neither 3-regular nor bipartite (2,3)")
    return Dispatch(10, Rule.REGULAR3, 0)


# --------------------------------------------------------------- branching


def _walk(g: Graph, comp: list[int]) -> list[int]:
    """Vertices of a path or cycle component in traversal order."""
    start = min(comp, key=lambda v: (g.degree(v), v))
    order = [start]
    prev, cur = None, start
    while True:
        nxt = [u for u in g.neighbors(cur) if u != prev and u != start]
        if not nxt:
            return order
        prev, cur = cur, nxt[0]
        order.append(cur)


def cover_small_component(g: Graph, comp: list[int]) -> list[int]:
    """Minimum cover of a component with maximum degree at most 2."""
    if len(comp) <= 2:
        return []
    order = _walk(g, comp)
    kind = "cycle" if all(g.degree(v) == 2 for v in comp) else "path"
    _, positions = path_cycle_cover_size(kind, len(order))
    return [order[i] for i in positions]


def b1_branches(g: Graph, v: int, rule: Rule) -> list[BranchStep]:
    branches = [
        BranchStep.make(rule, {v}, {v}),
        BranchStep.make(rule, neighborhood(g, [v], closed=True), g.adj[v]),
    ]
    branches += b3_branches(g, v, rule)[1:]
    return branches


def b2_branches(g: Graph, v: int, u: int, rule: Rule) -> list[BranchStep]:
    return [
        BranchStep.make(rule, {v}, {v}),
        BranchStep.make(rule, neighborhood(g, [v, u], closed=True), neighborhood(g, [v, u])),
    ]


def b3_branches(g: Graph, v: int, rule: Rule) -> list[BranchStep]:
    branches = [BranchStep.make(rule, {v}, {v})]
    for u in g.neighbors(v):
        branches.append(
            BranchStep.make(rule, neighborhood(g, [v, u], closed=True), neighborhood(g, [v, u]))
        )
    return branches


def b4_branches(g: Graph, v: int, u1: int, u2: int, u3: int, rule: Rule) -> list[BranchStep]:
    return [
        BranchStep.make(rule, neighborhood(g, [u1, v], closed=True), {u2, u3}),
        BranchStep.make(
            rule, neighborhood(g, [u2, u3], closed=True) | {u1}, neighborhood(g, [u2, u3])
        ),
    ]


def _require(cond: bool, what: str) -> None:
    if not cond:
        raise InvariantViolation(what)


def expand_branches(
    g: Graph, dispatch: Dispatch, paper_literal_step9: bool = False
) -> list[BranchStep]:
    """Branches of one step, with the decrement lower bounds asserted."""
    rule, f = dispatch.rule, dispatch.feature
    N = lambda *xs: neighborhood(g, xs)  # noqa: E731
    NN = lambda *xs: neighborhood(g, xs, closed=True)  # noqa: E731

    if rule is Rule.TRIVIAL:
        _require(all(max(g.degree(v) for v in c) <= 2 for c in f), "step 1 precondition")
        deleted = {v for c in f for v in c}
        cover = {v for c in f for v in cover_small_component(g, c)}
        return [BranchStep.make(rule, deleted, cover)]

    if rule is Rule.TAIL:
        v, u, w = f
        _require(g.degree(v) == 1 and g.degree(u) == 2 and g.has_edge(u, w), "tail precondition")
        return [BranchStep.make(rule, NN(v, u), {w})]

    if rule is Rule.DOMINATED:
        v, u = f
        d = g.degree(v)
        _require(d >= 3 and is_dominated(g, v, u), "step 3 precondition")
        out = b2_branches(g, v, u, rule)
        _require(out[1].k_decrement == d - 1, "step 3: |N({v,u})| = d(v) - 1")
        return out

    if rule is Rule.SATELLITE_DEG4:
        v = f
        d = g.degree(v)
        _require(d >= 4 and next(satellites_of(g, v), None) is not None, "step 4 precondition")
        out = b3_branches(g, v, rule)
        _require(all(b.k_decrement >= d for b in out[1:]), "step 4: |N({v,u})| >= d(v)")
        return out

    if rule is Rule.NORMAL_DEG4:
        v = f
        d = g.degree(v)
        _require(d >= 4, "step 5 precondition")
        out = b1_branches(g, v, rule)
        _require(out[1].k_decrement == d, "step 5: |N(v)| = d(v)")
        _require(all(b.k_decrement >= d + 1 for b in out[2:]), "step 5: |N({v,u})| >= d(v) + 1")
        return out

    if rule is Rule.CHAIN:
        u0, u1, u2, u3 = f
        _require(
            g.degree(u0) >= 3 and g.degree(u1) == 2 and g.degree(u2) == 2 and u0 != u3,
            "step 6 precondition",
        )
        out = [BranchStep.make(rule, NN(u1, u2), N(u1, u2))]
        _require(out[0].k_decrement == 2, "step 6: first branch removes 2")
        out += b3_branches(g, u0, rule)[1:]
        _require(all(b.k_decrement >= g.degree(u0) for b in out[1:]), "step 6: |N({u0,u})| >= d(u0)")
        return out

    if rule is Rule.TRIANGLE_NEIGHBOR:
        v, u, w, u1, u2 = f
        _require(
            g.degree(v) == 2 and g.has_edge(u, u1) and g.has_edge(u, u2) and g.has_edge(u1, u2),
            "step 7 precondition",
        )
        out = [
            BranchStep.make(rule, NN(u, v), N(u, v)),
            BranchStep.make(rule, NN(u1, u2) | {u, w}, N(u1, u2) | {w}),
        ]
        out += b3_branches(g, w, rule)[1:]
        _require(out[0].k_decrement >= 3 and out[1].k_decrement >= 3, "step 7: first two >= 3")
        _require(all(b.k_decrement >= g.degree(w) for b in out[2:]), "step 7: |N({w,u'})| >= d(w)")
        return out

    if rule is Rule.DEG2_WITH_DEG3:
        v, u, w, u1 = f
        _require(
            g.degree(v) == 2 and g.has_edge(v, u) and g.has_edge(v, w) and g.degree(u1) == 3,
            "step 8 precondition",
        )
        out = [
            BranchStep.make(rule, {u, v, w}, {u, w}),
            BranchStep.make(rule, NN(w, v), N(w, v)),
        ]
        out += b3_branches(g, u, rule)[1:]
        _require(all(b.k_decrement >= 3 for b in out[1:]), "step 8: later branches >= 3")
        via_u1 = [b for b in out[2:] if u1 in b.deleted - b.added_to_cover]
        _require(bool(via_u1) and via_u1[0].k_decrement >= 4, "step 8: |N({u,u1})| >= 4")
        return out

    if rule is Rule.BIPARTITE_23:
        v1, v2 = f
        _require(2 * len(v1) == 3 * len(v2), "step 9: edge count of (2,3) bipartite component")
        cover = v1 if paper_literal_step9 else v2
        return [BranchStep.make(rule, set(v1) | set(v2), cover)]

    if rule is Rule.REGULAR3:
        v = f
        _require(all(g.degree(x) == 3 for x in g.vertices()), "step 10 precondition")
        return b1_branches(g, v, rule)

    raise InvariantViolation(f"unknown rule {rule}")


def solve_bipartite_23(g: Graph) -> list[int]:
    """Degree-3 side of each (2,3) bipartite component; raises on any other component."""
    cover: list[int] = []
    for comp in connected_components(g):
        sides = bipartite_23_sides(g, comp)
        if sides is None:
            raise InvariantViolation(f"component {comp} is not a (2,3) bipartite graph")
        cover.extend(sides[1])
    return sorted(cover)


def is_safe_branch(g: Graph, branch: BranchStep) -> bool:
    """Deleted-but-uncovered vertices induce max degree <= 1 and have no live neighbors."""
    loose = branch.deleted - branch.added_to_cover
    for x in loose:
        if not g.adj[x] <= branch.deleted:
            return False
        if len(g.adj[x] & loose) > 1:
            return False
    return branch.k_decrement == len(branch.added_to_cover)


def verify_cover(g: Graph, cover) -> bool:
    return is_p3_free(g, cover)


# ------------------------------------------------------------------ search


class _Search:
    def __init__(self, paper_literal_step9: bool) -> None:
        self.stats = SolveStats()
        self.literal = paper_literal_step9

    def run(self, g: Graph, labels: list[int], k: int, depth: int) -> list[int] | None:
        self.stats.nodes_total += 1
        self.stats.max_depth = max(self.stats.max_depth, depth)
        taken: list[int] = []
        while True:
            if k < 0:
                return None
            if is_p3_free(g):
                return taken
            if k == 0:
                return None
            d = step_dispatch(g)
            assert d is not None
            branches = expand_branches(g, d, self.literal)
            self.stats.nodes_per_rule[d.rule] += 1
            if d.rule in REDUCTIONS:
                (b,) = branches
                taken.extend(labels[x] for x in b.added_to_cover)
                g, sub = g.delete(b.deleted)
                labels = [labels[x] for x in sub]
                k -= b.k_decrement
                continue
            for b in branches:
                if k - b.k_decrement < 0:
                    continue
                child, sub = g.delete(b.deleted)
                found = self.run(child, [labels[x] for x in sub], k - b.k_decrement, depth + 1)
                if found is not None:
                    return taken + [labels[x] for x in b.added_to_cover] + found
            return None


def solve(g: Graph, k: int, paper_literal_step9: bool = False) -> SolveOutcome:
    """Decide whether ``g`` has a 3-path vertex cover of size at most ``k``."""
    search = _Search(paper_literal_step9)
    found = search.run(g, list(range(g.n)), k, 0)
    if found is None:
        return SolveOutcome(False, None, search.stats)
    cover = sorted(found)
    if not paper_literal_step9 and (len(cover) > k or not verify_cover(g, cover)):
        raise InvariantViolation("certificate failed verification")
    return SolveOutcome(True, cover, search.stats)


def minimum_cover(g: Graph, start: int = 0) -> SolveOutcome:
    """Smallest k accepted by :func:`solve`, scanning upward from ``start``."""
    k = start
    while True:
        out = solve(g, k)
        if out.answer:
            return out
        k += 1
