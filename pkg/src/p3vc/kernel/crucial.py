"""Crucial partitions (A, B, Z), the three reduction rules on them, and the size audit.

A is a set inducing maximum degree 1, B the vertex set of a 3-path packing,
and Z a set carrying a witness packing with |Z| <= 5 * |witness|. The
partition is built by a repair loop: start from a maximal packing and fix the
first violated extended condition, either by replacing the offending paths with
a strictly larger packing of their neighborhood or by moving that neighborhood
into Z when the witness budget allows. Gaps in that repertoire end in a
fallback signal, never in an unchecked partition.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field

from ..graph import (
    Graph,
    Path3,
    connected_components,
    is_packing,
    maximal_p3_packing,
    packing_vertices,
)
from ..oracle import max_p3_packing_oracle
from .decomposition import (
    ASideView,
    GoodDecomposition,
    a_side_view,
    find_good_decomposition,
)

P0, P1_CARET, PM, PL, P2, P3 = "P0", "P1^", "PM", "PL", "P2", "P3"
COUNTERS = ("x1", "x2", "y0", "y1", "y2", "z1", "z2", "w1", "w2")
EXACT_PACKING_LIMIT = 14
RESTARTS = 6


@dataclass
class PackingClassification:
    labels: list[str]
    attached: list[frozenset[int]]  # path vertices adjacent to A
    a_of: list[frozenset[int]]  # A(L): A-vertices in components adjacent to L
    free: list[frozenset[int]]
    pl_free_owner: dict[int, int]  # free vertex of a PL path -> path index
    touch: dict[int, frozenset[int]]  # path index -> its vertices adjacent to PL-free vertices
    owners: dict[int, frozenset[int]]  # path index -> PL paths whose free vertices it touches
    bad_p0: frozenset[int]
    bad_pl: frozenset[int]
    counters: dict[str, int]

    def of(self, label: str) -> list[int]:
        return [i for i, lab in enumerate(self.labels) if lab == label]

    @property
    def k1(self) -> int:
        return len(self.labels)


def classify_packing(g: Graph, A, Z, packing: list[Path3]) -> PackingClassification:
    A = frozenset(A)
    comp_of = {}
    for comp in connected_components(g, A):
        for v in comp:
            comp_of[v] = frozenset(comp)
    labels, attached, a_of, free = [], [], [], []
    for path in packing:
        att = frozenset(v for v in path if g.adj[v] & A)
        a_l = frozenset(x for v in path for a in g.adj[v] & A for x in comp_of[a])
        if len(a_l) == 1:
            lab = P1_CARET
        elif not att:
            lab = P0
        elif len(att) == 1:
            lab = PM if path.middle in att else PL
        else:
            lab = P2 if len(att) == 2 else P3
        labels.append(lab)
        attached.append(att)
        a_of.append(a_l)
        free.append(frozenset(path) - att)

    pl_free_owner = {v: i for i, lab in enumerate(labels) if lab == PL for v in free[i]}
    touch, owners = {}, {}
    for i, path in enumerate(packing):
        if labels[i] == PL:
            continue
        hits = {v: {pl_free_owner[u] for u in g.adj[v] if u in pl_free_owner} for v in path}
        touch[i] = frozenset(v for v, o in hits.items() if o)
        owners[i] = frozenset(x for o in hits.values() for x in o)
    bad_p0 = frozenset(i for i, lab in enumerate(labels) if lab == P0 and len(touch[i]) >= 2)
    bad_pl = frozenset(
        i
        for i, lab in enumerate(labels)
        if lab == PL and any(owners[q] and i in owners[q] for q in bad_p0)
    )

    a0 = frozenset(v for v in A if not g.adj[v] & A)
    counters = dict.fromkeys(COUNTERS, 0)
    for i, lab in enumerate(labels):
        if lab == PL:
            counters["x2" if i in bad_pl else "x1"] += 1
        elif lab == P0:
            counters[f"y{min(len(touch[i]), 2)}"] += 1
        elif lab == PM:
            nbrs = {a for v in packing[i] for a in g.adj[v] & A}
            if nbrs <= a0:
                counters["z1"] += 1
            elif not nbrs & a0:
                counters["z2"] += 1
        elif lab == P1_CARET:
            counters["w1" if touch[i] else "w2"] += 1
    return PackingClassification(
        labels, attached, a_of, free, pl_free_owner, touch, owners, bad_p0, bad_pl, counters
    )


@dataclass
class CrucialPartition:
    A: frozenset[int]
    B: frozenset[int]
    Z: frozenset[int]
    packing: list[Path3]
    z_witness: list[Path3]
    classification: PackingClassification = field(repr=False)

    def __post_init__(self) -> None:
        self._view: ASideView | None = None

    def a_side(self, g: Graph) -> ASideView:
        if self._view is None:
            self._view = a_side_view(g, self.A)
        return self._view

    def b_star(self) -> frozenset[int]:
        """Free vertices of good PL paths."""
        c = self.classification
        return frozenset(v for i in c.of(PL) if i not in c.bad_pl for v in c.free[i])

    def a_star(self, g: Graph) -> frozenset[int]:
        """A0-vertices adjacent to paths whose A(L) is a single vertex."""
        c = self.classification
        return frozenset(x for i in c.of(P1_CARET) for x in c.a_of[i])

    def a_prime(self, g: Graph) -> frozenset[int]:
        return (self.A | self.b_star()) - self.a_star(g)


class Fallback(Exception):
    """Signals that the repair loop could not produce a crucial partition."""


# ------------------------------------------------------------- predicates


def _extended_violations(g: Graph, A, Z, packing, c: PackingClassification):
    """Yield (condition, offending path indices) in priority order."""
    A = frozenset(A)
    a0 = frozenset(v for v in A if not g.adj[v] & A)
    for i, lab in enumerate(c.labels):
        if lab in (P2, P3):
            yield "E1", [i]
    for i in c.of(PM):
        nbrs = {a for v in packing[i] for a in g.adj[v] & A}
        if nbrs & a0 and nbrs - a0:
            yield "E2", [i]
    pm_free = {v: i for i in c.of(PM) for v in c.free[i]}
    for v, i in c.pl_free_owner.items():
        for u in g.adj[v]:
            j = c.pl_free_owner.get(u)
            if j is not None and j != i:
                yield "E3", sorted({i, j})
            if u in pm_free:
                yield "E4", [i, pm_free[u]]
    for i in c.of(P1_CARET):
        if len(c.touch[i]) >= 2:
            yield "E5", [i, *sorted(c.owners[i])]
    for i in c.bad_p0:
        if len(c.owners[i]) >= 2:
            yield "E6", [i, *sorted(c.owners[i])]
    for v, i in c.pl_free_owner.items():
        if g.adj[v] & Z:
            yield "E7", [i]
    # the y1 and w1 paths must reach a good PL path, else N'2(A') loses them
    for i in c.of(P0) + c.of(P1_CARET):
        if len(c.touch[i]) == 1 and c.owners[i] <= c.bad_pl:
            yield "T1", [i, *sorted(c.owners[i])]


def partition_violations(g: Graph, p: CrucialPartition, exact_gamma: bool = False) -> list[str]:
    """All basic and extended conditions that ``p`` fails (empty list when valid)."""
    bad = []
    V = frozenset(g.vertices())
    if p.A | p.B | p.Z != V or len(p.A) + len(p.B) + len(p.Z) != g.n:
        bad.append("(A, B, Z) is not a partition of V")
    if any(len(g.adj[v] & p.A) > 1 for v in p.A):
        bad.append("B1: G[A] has a vertex of degree > 1")
    if not is_packing(g, p.packing) or packing_vertices(p.packing) != p.B:
        bad.append("B2: B is not the vertex set of the packing")
    if any(g.adj[v] & p.Z for v in p.A):
        bad.append("B3: edge between A and Z")
    if not is_packing(g, p.z_witness, within=set(p.Z)) or len(p.Z) > 5 * len(p.z_witness):
        bad.append("B4: |Z| > 5 * |witness packing in G[Z]|")
    if exact_gamma:
        from ..oracle import min_p3vc_oracle

        gz, _ = g.induced_subgraph(p.Z)
        gamma, _ = min_p3vc_oracle(gz)
        if len(p.Z) > 5 * gamma:
            bad.append("B4: |Z| > 5 * gamma(G[Z])")
    fresh = classify_packing(g, p.A, p.Z, p.packing)
    if fresh.labels != p.classification.labels or fresh.counters != p.classification.counters:
        bad.append("stale classification")
    seen = set()
    for cond, paths in _extended_violations(g, p.A, p.Z, p.packing, fresh):
        if cond not in seen:
            seen.add(cond)
            bad.append(f"{cond}: violated at paths {paths}")
    return bad


# ----------------------------------------------------------- construction


def _best_packing(g: Graph, verts: set[int], seed: list[Path3]) -> list[Path3]:
    """A large packing of G[verts]: exact when small, else seed extended greedily."""
    if len(verts) <= EXACT_PACKING_LIMIT:
        sub, labels = g.induced_subgraph(verts)
        _, best = max_p3_packing_oracle(sub, limit=EXACT_PACKING_LIMIT)
        exact = [Path3(labels[a], labels[b], labels[c]) for a, b, c in best]
        if len(exact) >= len(seed):
            return exact
    used = packing_vertices(seed)
    sub, labels = g.induced_subgraph(verts)
    extra = maximal_p3_packing(sub, removed=[i for i, v in enumerate(labels) if v in used])
    return list(seed) + [Path3(labels[a], labels[b], labels[c]) for a, b, c in extra]


def _initial_packing(g: Graph, attempt: int) -> list[Path3]:
    """Maximal packing; attempt 0 is the canonical greedy one, later attempts scan a
    seeded permutation of the vertices."""
    if attempt == 0:
        return maximal_p3_packing(g)
    order = list(g.vertices())
    random.Random(attempt).shuffle(order)
    rank = {v: i for i, v in enumerate(order)}
    dead: set[int] = set()
    packing = []
    for v in order:
        if v in dead:
            continue
        ends = sorted((u for u in g.adj[v] if u not in dead), key=rank.__getitem__)
        if len(ends) >= 2:
            packing.append(Path3(ends[0], v, ends[1]))
            dead.update((ends[0], v, ends[1]))
    return packing


class _Builder:
    def __init__(self, g: Graph, budget: int, attempt: int = 0) -> None:
        self.g = g
        self.budget = budget
        self.packing: list[Path3] = _initial_packing(g, attempt)
        self.clusters: list[tuple[frozenset[int], list[Path3]]] = []
        self.steps = Counter()
        self.visited: set[tuple] = set()
        self.iterations = 0

    @property
    def Z(self) -> frozenset[int]:
        return frozenset(v for verts, _ in self.clusters for v in verts)

    @property
    def witness(self) -> list[Path3]:
        return [p for _, w in self.clusters for p in w]

    @property
    def A(self) -> frozenset[int]:
        return frozenset(self.g.vertices()) - packing_vertices(self.packing) - self.Z

    def classify(self) -> PackingClassification:
        return classify_packing(self.g, self.A, self.Z, self.packing)

    # repairs ---------------------------------------------------------

    def _restore_a(self) -> None:
        """Extend the packing inside A until G[A] is 3-path free."""
        A = self.A
        sub, labels = self.g.induced_subgraph(A)
        for a, b, c in maximal_p3_packing(sub):
            self.packing.append(Path3(labels[a], labels[b], labels[c]))

    def augment(self, paths: list[int], region: set[int]) -> bool:
        """Replace ``paths`` by a strictly larger packing inside ``region``."""
        q = _best_packing(self.g, region, [self.packing[i] for i in paths])
        if len(q) <= len(paths):
            return False
        keep = [p for i, p in enumerate(self.packing) if i not in set(paths)]
        self.packing = keep + q
        self._restore_a()
        self.steps["augment"] += 1
        return True

    def absorb(self, paths: list[int], region: set[int]) -> bool:
        """Move ``region`` (with the Z clusters it touches) into Z if the budget allows."""
        g = self.g
        touching = [
            idx
            for idx, (verts, _) in enumerate(self.clusters)
            if verts & region or any(g.adj[v] & verts for v in region)
        ]
        merged = set(region).union(*(self.clusters[i][0] for i in touching))
        seed = [p for i, p in enumerate(self.packing) if i in set(paths)]
        seed += [p for i in touching for p in self.clusters[i][1]]
        witness = _best_packing(g, merged, seed)
        old_z = len(self.Z)
        old_w = len(self.witness)
        new_z = old_z - sum(len(self.clusters[i][0]) for i in touching) + len(merged)
        new_w = old_w - sum(len(self.clusters[i][1]) for i in touching) + len(witness)
        if new_z > 5 * new_w:
            return False
        self.clusters = [c for i, c in enumerate(self.clusters) if i not in set(touching)]
        self.clusters.append((frozenset(merged), witness))
        self.packing = [p for p in self.packing if not set(p) & merged]
        self.steps["absorb"] += 1
        return True

    def violation_count(self) -> int:
        c = self.classify()
        return sum(1 for _ in _extended_violations(self.g, self.A, self.Z, self.packing, c))

    def state_key(self) -> tuple:
        return frozenset(frozenset(p) for p in self.packing), self.Z

    def reselect(self, paths: list[int], region: set[int]) -> bool:
        """Swap ``paths`` for another packing of equal size in ``region``, reaching an
        unvisited state with no more violations than now."""
        g = self.g
        sub, labels = g.induced_subgraph(region)
        candidates = [
            Path3(labels[a], labels[b], labels[c])
            for b in sub.vertices()
            for i, a in enumerate(sub.neighbors(b))
            for c in sub.neighbors(b)[i + 1 :]
        ]
        for a, b in sub.edges():
            for x, y in ((a, b), (b, a)):
                for c in sub.neighbors(y):
                    if c != x and not sub.has_edge(x, c):
                        candidates.append(Path3(labels[x], labels[y], labels[c]))
        if len(paths) == 1:
            options = [[p] for p in candidates]
        elif len(paths) == 2 and len(candidates) <= 60:
            options = [
                [p, q] for i, p in enumerate(candidates) for q in candidates[i + 1 :] if not set(p) & set(q)
            ]
        else:
            return False
        before = self.violation_count()
        current = self.packing
        keep = [p for i, p in enumerate(current) if i not in set(paths)]
        old = {frozenset(self.packing[i]) for i in paths}
        best, best_count = None, before + 1
        Z = self.Z
        for opt in options:
            if {frozenset(p) for p in opt} == old:
                continue
            self.packing = keep + opt
            A = self.A
            near = {u for v in region for u in g.adj[v]} | region
            if any(len(g.adj[v] & A) > 1 for v in near & A):
                continue
            if any(g.adj[v] & Z for v in region & A):
                continue
            if self.state_key() in self.visited:
                continue
            count = self.violation_count()
            if count < best_count:
                best, best_count = opt, count
        self.packing = current
        if best is None:
            return False
        self.packing = keep + best
        self.steps["reselect"] += 1
        return True

    def region(self, paths: list[int], c: PackingClassification) -> set[int]:
        out: set[int] = set()
        for i in paths:
            out.update(self.packing[i])
            out.update(c.a_of[i])
        return out

    def repair_b3(self) -> bool:
        """Pull A-components that touch Z into Z. Returns False if nothing to do."""
        g, A, Z = self.g, self.A, self.Z
        for comp in connected_components(g, A):
            if any(g.adj[v] & Z for v in comp):
                if not self.absorb([], set(comp)):
                    raise Fallback("B3 repair exceeds the Z budget")
                return True
        return False

    def run(self) -> CrucialPartition:
        self._improve_initial()
        while self.iterations < self.budget:
            self.iterations += 1
            self.visited.add(self.state_key())
            if self.repair_b3():
                continue
            c = self.classify()
            violation = next(_extended_violations(self.g, self.A, self.Z, self.packing, c), None)
            if violation is None:
                return self.result(c)
            cond, paths = violation
            region = self.region(paths, c)
            self.steps[cond] += 1
            if self.augment(paths, region):
                continue
            if self.reselect(paths, region):
                continue
            if self.absorb(paths, region):
                continue
            raise Fallback(f"no repair for {cond} at paths {paths}")
        raise Fallback("iteration budget exhausted")

    def _improve_initial(self) -> None:
        changed = True
        while changed:
            changed = False
            c = self.classify()
            for i in range(len(self.packing)):
                if len(c.a_of[i]) >= 2 and self.augment([i], self.region([i], c)):
                    changed = True
                    break

    def result(self, c: PackingClassification) -> CrucialPartition:
        return CrucialPartition(
            A=self.A,
            B=frozenset(packing_vertices(self.packing)),
            Z=self.Z,
            packing=list(self.packing),
            z_witness=self.witness,
            classification=c,
        )


def build_crucial_partition(
    g: Graph, budget: int | None = None, attempts: int = RESTARTS
) -> CrucialPartition | None:
    """A crucial partition of ``g``, or None when the repair loop falls back.

    The iteration budget (default 10 n^2) is shared by up to ``attempts`` runs of
    the repair loop from different initial packings.
    """
    if budget is None:
        budget = 10 * max(g.n, 1) ** 2
    part = None
    for attempt in range(attempts):
        builder = _Builder(g, budget, attempt)
        try:
            part = builder.run()
            break
        except Fallback:
            budget -= builder.iterations
            if budget <= 0:
                break
    if part is None:
        return None
    problems = partition_violations(g, part)
    if problems:
        raise AssertionError(f"repair loop produced an invalid partition: {problems}")
    return part


# -------------------------------------------------------------- reductions


@dataclass
class RuleOutcome:
    kind: str  # "halt", "reduce" or "fixed"
    rule: int | None = None
    decomposition: GoodDecomposition | None = None


def apply_reduction_rules(g: Graph, k: int, p: CrucialPartition) -> RuleOutcome:
    """First applicable reduction rule for partition ``p``; all arithmetic in integers."""
    k1 = len(p.packing)
    if 5 * k1 > 5 * k - len(p.Z):
        return RuleOutcome("halt", 1)
    view = p.a_side(g)
    if view.corollary_condition():
        d = find_good_decomposition(g, p.A, mode="edges_only")
        if d is None:
            raise AssertionError("corollary condition holds but no decomposition was found")
        return RuleOutcome("reduce", 2, d)
    a_prime = p.a_prime(g)
    view_p = a_side_view(g, a_prime)  # raises if the degree-1 lemma fails
    if view_p.lemma_condition():
        d = find_good_decomposition(g, a_prime, mode="general")
        if d is None:
            raise AssertionError("lemma condition holds but no decomposition was found")
        return RuleOutcome("reduce", 3, d)
    return RuleOutcome("fixed")


# ------------------------------------------------------------------- audit


@dataclass
class AuditEntry:
    name: str
    lhs: int
    rhs: int
    ok: bool


@dataclass
class AuditReport:
    entries: list[AuditEntry]
    counters: dict[str, int]

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)

    def failures(self) -> list[AuditEntry]:
        return [e for e in self.entries if not e.ok]


def audit_bound(g: Graph, p: CrucialPartition, k: int) -> AuditReport:
    """Recompute the counters and check every inequality of the 5k size argument."""
    c = classify_packing(g, p.A, p.Z, p.packing)
    x1, x2, y0, y1, y2, z1, z2, w1, w2 = (c.counters[n] for n in COUNTERS)
    k1 = len(p.packing)
    view = a_side_view(g, p.A)
    view_p = a_side_view(g, p.a_prime(g))
    n_z = len(p.Z)
    rows = [
        ("5*k1 <= 5*k - |Z|", 5 * k1, 5 * k - n_z, "<="),
        ("k1 = sum of counters", k1, sum(c.counters.values()), "=="),
        ("|N2(A)| <= x1+x2+z2", len(view.N2_of_A), x1 + x2 + z2, "<="),
        ("x2 <= y2", x2, y2, "<="),
        ("Comp(A') >= Comp(A)+x1-(w1+w2)", view_p.comp, view.comp + x1 - (w1 + w2), ">="),
        ("|N(A')| <= x1+x2+y0+y1+z1+z2+w1", len(view_p.N_of_A), x1 + x2 + y0 + y1 + z1 + z2 + w1, "<="),
        ("|N'2(A')| >= y1+z2+w1", len(view_p.N2prime_of_A), y1 + z2 + w1, ">="),
        ("Comp(A) <= 2(x2+y0+z1+w1)+x1+y1+z2+w2", view.comp, 2 * (x2 + y0 + z1 + w1) + x1 + y1 + z2 + w2, "<="),
        ("Comp2(A) <= x1+x2+z2", view.comp2, x1 + x2 + z2, "<="),
        ("|V| <= 5k", g.n, 5 * k, "<="),
        ("rule 2 fixed: Comp2(A) <= |N2(A)|", view.comp2, len(view.N2_of_A), "<="),
        ("rule 3 fixed: Comp(A') <= 2|N(A')|-|N'2(A')|", view_p.comp, 2 * len(view_p.N_of_A) - len(view_p.N2prime_of_A), "<="),
        ("|A| <= 2*k1", len(p.A), 2 * k1, "<="),
        ("|B| = 3*k1", len(p.B), 3 * k1, "=="),
        ("|V| <= 5*k1 + |Z|", g.n, 5 * k1 + n_z, "<="),
    ]
    ops = {"<=": int.__le__, ">=": int.__ge__, "==": int.__eq__}
    entries = [AuditEntry(name, lhs, rhs, ops[op](lhs, rhs)) for name, lhs, rhs, op in rows]
    return AuditReport(entries, dict(c.counters))
