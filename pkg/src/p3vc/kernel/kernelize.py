"""Kernelization driver: simple mode (at most 12k vertices) and crucial mode (at most 5k)."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..graph import Graph, maximal_p3_packing, packing_vertices
from .crucial import AuditReport, CrucialPartition, apply_reduction_rules, audit_bound, build_crucial_partition
from .decomposition import GoodDecomposition, a_side_view, find_good_decomposition


@dataclass
class KernelResult:
    reduced_graph: Graph
    labels: list[int]  # reduced id -> input id
    reduced_k: int
    forced_cover: frozenset[int]  # input ids committed to the cover
    mode: str  # mode whose guarantee applies at the end: "simple" or "crucial"
    size_bound_claim: int  # 12 or 5
    halted: bool = False  # decided no-instance
    trace: list[str] = field(default_factory=list)
    audit: AuditReport | None = None
    decompositions: list[tuple[Graph, GoodDecomposition]] = field(default_factory=list, repr=False)
    partitions: list[tuple[Graph, CrucialPartition]] = field(default_factory=list, repr=False)
    crucial_fallbacks: int = 0

    @property
    def bound(self) -> int:
        return self.size_bound_claim * max(self.reduced_k, 0)

    @property
    def within_bound(self) -> bool:
        return self.halted or self.reduced_graph.n <= self.bound


class _State:
    def __init__(self, g: Graph, k: int, keep_history: bool) -> None:
        self.g = g
        self.labels = list(range(g.n))
        self.k = k
        self.forced: set[int] = set()
        self.trace: list[str] = []
        self.keep = keep_history
        self.decompositions: list[tuple[Graph, GoodDecomposition]] = []
        self.partitions: list[tuple[Graph, CrucialPartition]] = []

    def reduce(self, d: GoodDecomposition, tag: str) -> None:
        if self.keep:
            self.decompositions.append((self.g, d))
        self.forced.update(self.labels[c] for c in d.C)
        sub, keep = self.g.induced_subgraph(d.R)
        self.labels = [self.labels[x] for x in keep]
        self.g = sub
        self.k -= len(d.C)
        self.trace.append(f"{tag}: |I|={len(d.I)} |C|={len(d.C)}")

    def result(self, mode: str, bound: int, halted: bool = False, **extra) -> KernelResult:
        return KernelResult(
            reduced_graph=self.g,
            labels=self.labels,
            reduced_k=self.k,
            forced_cover=frozenset(self.forced),
            mode=mode,
            size_bound_claim=bound,
            halted=halted,
            trace=self.trace,
            decompositions=self.decompositions,
            partitions=self.partitions,
            **extra,
        )


def _simple_step(s: _State) -> str:
    """One round of simple mode: returns "halt", "reduce" or "fixed"."""
    if s.k < 0:
        return "halt"
    packing = maximal_p3_packing(s.g)
    if len(packing) > s.k:
        s.trace.append(f"halt: maximal packing of size {len(packing)} > k={s.k}")
        return "halt"
    A = set(s.g.vertices()) - packing_vertices(packing)
    view = a_side_view(s.g, A)
    for mode in ("general", "edges_only"):
        d = find_good_decomposition(s.g, A, mode)
        if d is not None:
            s.reduce(d, f"simple/{mode}")
            return "reduce" if s.k >= 0 else "halt"
    if len(A) > 9 * s.k:
        raise AssertionError("|A| > 9k yet neither decomposition condition fired")
    assert not (view.lemma_condition() or view.corollary_condition())
    return "fixed"


def kernelize(g: Graph, k: int, mode: str = "crucial", keep_history: bool = False) -> KernelResult:
    """Shrink ``(g, k)`` to an equivalent instance, committing forced vertices to the cover."""
    if mode not in ("simple", "crucial"):
        raise ValueError(f"unknown mode {mode!r}")
    if k < 0:
        raise ValueError("k must be non-negative")
    s = _State(g, k, keep_history)

    if mode == "simple":
        while True:
            step = _simple_step(s)
            if step == "halt":
                return s.result("simple", 12, halted=True)
            if step == "fixed":
                res = s.result("simple", 12)
                assert res.reduced_graph.n <= 12 * res.reduced_k
                return res

    fallbacks = 0
    while True:
        if s.k < 0:
            return s.result("crucial", 5, halted=True, crucial_fallbacks=fallbacks)
        part = build_crucial_partition(s.g)
        if part is None:
            fallbacks += 1
            s.trace.append("crucial partition fell back; simple round")
            step = _simple_step(s)
            if step == "halt":
                return s.result("simple", 12, halted=True, crucial_fallbacks=fallbacks)
            if step == "fixed":
                return s.result("simple", 12, crucial_fallbacks=fallbacks)
            continue
        if s.keep:
            s.partitions.append((s.g, part))
        out = apply_reduction_rules(s.g, s.k, part)
        if out.kind == "halt":
            s.trace.append(f"rule 1: k1={len(part.packing)} |Z|={len(part.Z)} k={s.k}")
            return s.result("crucial", 5, halted=True, crucial_fallbacks=fallbacks)
        if out.kind == "reduce":
            s.reduce(out.decomposition, f"rule {out.rule}")
            continue
        audit = audit_bound(s.g, part, s.k)
        return s.result("crucial", 5, audit=audit, crucial_fallbacks=fallbacks)
