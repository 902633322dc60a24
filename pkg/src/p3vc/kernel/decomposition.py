"""Good decompositions (I, C, R) found as crowns of an auxiliary bipartite graph.

Left nodes are the components of G[A] (isolated vertices and A-edges); right
nodes are copies of the vertices of N(A): two copies for a vertex adjacent to
some isolated A-vertex, one copy otherwise. A crown in this graph (a left set
whose whole neighborhood is matched into it) yields C = the crown head, with
one witness 3-path per head vertex built from the components matched to it.
"""

from __future__ import annotations

from dataclasses import dataclass

import networkx as nx
from networkx.algorithms.bipartite import hopcroft_karp_matching

from ..graph import Graph, Path3, connected_components, is_packing


class ContractError(ValueError):
    pass


@dataclass(frozen=True)
class ASideView:
    A: frozenset[int]
    A0: frozenset[int]
    A1: frozenset[int]
    components: tuple[tuple[int, ...], ...]
    N_of_A: frozenset[int]
    N1_of_A: frozenset[int]
    N2_of_A: frozenset[int]
    N2prime_of_A: frozenset[int]

    @property
    def comp(self) -> int:
        return len(self.components)

    @property
    def comp1(self) -> int:
        return sum(1 for c in self.components if len(c) == 1)

    @property
    def comp2(self) -> int:
        return sum(1 for c in self.components if len(c) == 2)

    def lemma_condition(self) -> bool:
        """Comp(G[A]) > 2|N(A)| - |N'2(A)|."""
        return self.comp > 2 * len(self.N_of_A) - len(self.N2prime_of_A)

    def corollary_condition(self) -> bool:
        """Comp2(G[A]) > |N2(A)|."""
        return self.comp2 > len(self.N2_of_A)


def a_side_view(g: Graph, A) -> ASideView:
    A = frozenset(A)
    for v in A:
        if len(g.adj[v] & A) > 1:
            raise ContractError(f"G[A] has degree > 1 at vertex {v}")
    comps = tuple(tuple(c) for c in connected_components(g, A))
    a0 = frozenset(v for v in A if not g.adj[v] & A)
    n1: set[int] = set()
    n2: set[int] = set()
    for c in comps:
        target = n1 if len(c) == 1 else n2
        for v in c:
            target.update(g.adj[v] - A)
    return ASideView(
        A=A,
        A0=a0,
        A1=A - a0,
        components=comps,
        N_of_A=frozenset(n1 | n2),
        N1_of_A=frozenset(n1),
        N2_of_A=frozenset(n2),
        N2prime_of_A=frozenset(n2 - n1),
    )


@dataclass(frozen=True)
class GoodDecomposition:
    I: frozenset[int]
    C: frozenset[int]
    R: frozenset[int]
    witness: tuple[Path3, ...]


def decomposition_violations(g: Graph, d: GoodDecomposition) -> list[str]:
    """Every defining property of a good decomposition that ``d`` fails."""
    bad = []
    if d.I | d.C | d.R != frozenset(g.vertices()) or len(d.I) + len(d.C) + len(d.R) != g.n:
        bad.append("(I, C, R) is not a partition of V")
    if any(len(g.adj[v] & d.I) > 1 for v in d.I):
        bad.append("G[I] has a vertex of degree > 1")
    if len(d.witness) != len(d.C) or not is_packing(g, d.witness, within=set(d.I | d.C)):
        bad.append("witness is not a packing of size |C| inside G[I u C]")
    if any(g.adj[v] & d.R for v in d.I):
        bad.append("edge between I and R")
    return bad


def find_good_decomposition(g: Graph, A, mode: str = "general") -> GoodDecomposition | None:
    """Crown-based good decomposition with nonempty I inside A and C inside N(A).

    Guaranteed to succeed when Comp(G[A]) > 2|N(A)| - |N'2(A)| (``general``) or
    Comp2(G[A]) > |N2(A)| (``edges_only``, which restricts A to its A-edges).
    May also succeed when the inequality fails. Returns None otherwise.
    """
    if mode not in ("general", "edges_only"):
        raise ValueError(f"unknown mode {mode!r}")
    view = a_side_view(g, A)
    comps = [c for c in view.components if mode == "general" or len(c) == 2]
    if not comps:
        return None
    used = {v for c in comps for v in c}
    near_single = {u for c in comps if len(c) == 1 for u in g.adj[c[0]]}

    aux = nx.Graph()
    left = [("L", i) for i in range(len(comps))]
    aux.add_nodes_from(left)
    for i, c in enumerate(comps):
        for u in {u for v in c for u in g.adj[v]} - used:
            slots = 2 if u in near_single else 1
            for s in range(slots):
                aux.add_edge(("L", i), ("R", u, s))
    matching = hopcroft_karp_matching(aux, top_nodes=left)

    crown = {x for x in left if x not in matching}
    if not crown:
        return None
    head: set = set()
    frontier = set(crown)
    while frontier:
        new_head = {y for x in frontier for y in aux[x]} - head
        head |= new_head
        frontier = set()
        for y in new_head:
            if y not in matching:
                raise AssertionError("crown head vertex left unmatched; matching not maximum")
            x = matching[y]
            if x not in crown:
                crown.add(x)
                frontier.add(x)

    C = {y[1] for y in head}
    witness = []
    for c in sorted(C):
        partners = [comps[matching[y][1]] for y in sorted(head) if y[1] == c]
        edge = next((p for p in partners if len(p) == 2), None)
        if edge is not None:
            x, y = edge if g.has_edge(c, edge[0]) else edge[::-1]
            witness.append(Path3(c, x, y))
        else:
            (a,), (b,) = partners
            witness.append(Path3(a, c, b))
    I = frozenset(v for x in crown for v in comps[x[1]])
    C = frozenset(C)
    decomposition = GoodDecomposition(
        I=I, C=C, R=frozenset(g.vertices()) - I - C, witness=tuple(witness)
    )
    problems = decomposition_violations(g, decomposition)
    if problems:
        raise AssertionError(f"constructed decomposition is invalid: {problems}")
    return decomposition


def reduce_by_decomposition(
    g: Graph, k: int, d: GoodDecomposition
) -> tuple[Graph, list[int], int, frozenset[int]]:
    """Delete I and C, commit C to the cover: returns (G[R], labels, k - |C|, C)."""
    reduced, labels = g.induced_subgraph(d.R)
    return reduced, labels, k - len(d.C), d.C
