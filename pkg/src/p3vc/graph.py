"""Immutable simple graphs and the structural queries used by the solver and kernelizer.

Vertices are dense integer ids ``0..n-1``. Deleting vertices returns a new graph
together with the list mapping each new id back to its id in the parent graph.
Every "find any" style query scans vertices in ascending id order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple


class GraphParseError(ValueError):
    """Raised for malformed DIMACS edge documents."""

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Graph:
    adj: tuple[frozenset[int], ...]
    _sorted: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        n = len(self.adj)
        for v, nbrs in enumerate(self.adj):
            if v in nbrs:
                raise ValueError(f"self-loop at vertex {v}")
            for u in nbrs:
                if not 0 <= u < n:
                    raise ValueError(f"neighbor {u} of {v} out of range")
                if v not in self.adj[u]:
                    raise ValueError(f"asymmetric adjacency between {v} and {u}")
        object.__setattr__(self, "_sorted", tuple(tuple(sorted(a)) for a in self.adj))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            adj[u].add(v)
            adj[v].add(u)
        return cls(tuple(frozenset(a) for a in adj))

    @classmethod
    def empty(cls, n: int = 0) -> Graph:
        return cls(tuple(frozenset() for _ in range(n)))

    @property
    def n(self) -> int:
        return len(self.adj)

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def vertices(self) -> range:
        return range(len(self.adj))

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def neighbors(self, v: int) -> tuple[int, ...]:
        """Neighbors of ``v`` in ascending order."""
        return self._sorted[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            for v in self._sorted[u]:
                if u < v:
                    yield u, v

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def induced_subgraph(self, keep: Iterable[int]) -> tuple[Graph, list[int]]:
        """Subgraph induced by ``keep``; returns it with the new-to-old id map."""
        labels = sorted(set(keep))
        index = {old: new for new, old in enumerate(labels)}
        adj = tuple(
            frozenset(index[u] for u in self.adj[old] if u in index) for old in labels
        )
        return Graph(adj), labels

    def delete(self, removed: Iterable[int]) -> tuple[Graph, list[int]]:
        gone = set(removed)
        return self.induced_subgraph(v for v in range(self.n) if v not in gone)


class Path3(NamedTuple):
    """A 3-vertex path ``end1 - middle - end2``."""

    end1: int
    middle: int
    end2: int

    @property
    def vertices(self) -> tuple[int, int, int]:
        return (self.end1, self.middle, self.end2)

    def is_valid(self, g: Graph) -> bool:
        a, b, c = self
        return (
            len({a, b, c}) == 3
            and all(0 <= x < g.n for x in self)
            and g.has_edge(a, b)
            and g.has_edge(b, c)
        )


Packing = list[Path3]


def packing_vertices(packing: Iterable[Path3]) -> set[int]:
    return {v for path in packing for v in path}


def is_packing(g: Graph, packing: Iterable[Path3], within: set[int] | None = None) -> bool:
    """Paths valid in ``g``, pairwise vertex-disjoint, optionally confined to ``within``."""
    seen: set[int] = set()
    for path in packing:
        if not path.is_valid(g):
            return False
        for v in path:
            if v in seen or (within is not None and v not in within):
                return False
            seen.add(v)
    return True


# ---------------------------------------------------------------- DIMACS I/O


def parse_graph(text: str) -> Graph:
    """Parse a DIMACS-style edge document (1-indexed) into a :class:`Graph`."""
    n: int | None = None
    declared_m = 0
    edges: set[tuple[int, int]] = set()
    edge_lines = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line == "c" or line.startswith("c "):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise GraphParseError("duplicate header", lineno)
            if len(parts) != 4 or parts[1] != "edge":
                raise GraphParseError("malformed header, expected 'p edge <n> <m>'", lineno)
            try:
                n, declared_m = int(parts[2]), int(parts[3])
            except ValueError:
                raise GraphParseError("non-integer header field", lineno) from None
            if n < 0 or declared_m < 0:
                raise GraphParseError("negative header field", lineno)
        elif parts[0] == "e":
            if n is None:
                raise GraphParseError("edge line before header", lineno)
            if len(parts) != 3:
                raise GraphParseError("malformed edge line, expected 'e <u> <v>'", lineno)
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise GraphParseError("non-integer vertex index", lineno) from None
            if not (1 <= u <= n and 1 <= v <= n):
                raise GraphParseError(f"vertex index out of range 1..{n}", lineno)
            if u == v:
                raise GraphParseError(f"self-loop at vertex {u}", lineno)
            edges.add((min(u, v) - 1, max(u, v) - 1))
            edge_lines += 1
        else:
            raise GraphParseError(f"unrecognized line type {parts[0]!r}", lineno)
    if n is None:
        raise GraphParseError("missing 'p edge' header")
    if edge_lines != declared_m:
        raise GraphParseError(f"header declares {declared_m} edges, found {edge_lines}")
    return Graph.from_edges(n, edges)


def serialize_graph(g: Graph, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"c {c}" for c in comment.splitlines())
    edges = sorted(g.edges())
    lines.append(f"p edge {g.n} {len(edges)}")
    lines.extend(f"e {u + 1} {v + 1}" for u, v in edges)
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------ neighborhoods


def neighborhood(g: Graph, xs: Iterable[int], closed: bool = False) -> set[int]:
    """N(X), or N[X] when ``closed``."""
    members = set(xs)
    out = {u for v in members for u in g.adj[v]}
    if closed:
        return out | members
    return out - members


def second_neighborhood(g: Graph, v: int) -> set[int]:
    """Vertices at distance exactly two from ``v``."""
    first = g.adj[v]
    return {w for u in first for w in g.adj[u]} - first - {v}


class ComponentsProfile(NamedTuple):
    count: int
    by_size: dict[int, int]
    components: list[list[int]]


def connected_components(g: Graph, within: Iterable[int] | None = None) -> list[list[int]]:
    """Components of ``g`` (or of ``g[within]``), each sorted, ordered by smallest member."""
    allowed = set(range(g.n)) if within is None else set(within)
    seen: set[int] = set()
    comps = []
    for s in sorted(allowed):
        if s in seen:
            continue
        seen.add(s)
        stack = [s]
        comp = []
        while stack:
            v = stack.pop()
            comp.append(v)
            for u in g.adj[v]:
                if u in allowed and u not in seen:
                    seen.add(u)
                    stack.append(u)
        comps.append(sorted(comp))
    return comps


def components_profile(g: Graph) -> ComponentsProfile:
    comps = connected_components(g)
    sizes: dict[int, int] = {}
    for c in comps:
        sizes[len(c)] = sizes.get(len(c), 0) + 1
    return ComponentsProfile(len(comps), sizes, comps)


# ------------------------------------------------------------------ 3-paths


def find_p3(g: Graph, removed: set[int] | frozenset[int] = frozenset()) -> Path3 | None:
    """Some 3-path of ``g - removed`` (smallest middle, then smallest ends), or None."""
    for v in range(g.n):
        if v in removed:
            continue
        ends = [u for u in g.neighbors(v) if u not in removed]
        if len(ends) >= 2:
            return Path3(ends[0], v, ends[1])
    return None


def is_p3_free(g: Graph, removed: Iterable[int] = ()) -> bool:
    return find_p3(g, set(removed)) is None


def maximal_p3_packing(g: Graph, removed: Iterable[int] = ()) -> Packing:
    """Greedy maximal packing: scan middles ascending, take the two smallest live neighbors."""
    dead = set(removed)
    packing: Packing = []
    for v in range(g.n):
        if v in dead:
            continue
        ends = [u for u in g.neighbors(v) if u not in dead]
        if len(ends) >= 2:
            path = Path3(ends[0], v, ends[1])
            packing.append(path)
            dead.update(path)
    return packing


# -------------------------------------------------------- local structures


class Tail(NamedTuple):
    v: int  # degree-1 vertex
    u: int  # its degree-2 neighbor
    w: int  # other neighbor of u


class Satellite(NamedTuple):
    v: int
    parent: int
    satellite: int


class Chain(NamedTuple):
    u0: int
    u1: int
    u2: int
    u3: int


class TrianglePendant(NamedTuple):
    v: int  # degree 3
    u1: int  # degree-1 neighbor
    u2: int
    u3: int  # u2, u3 adjacent


def is_dominated(g: Graph, v: int, u: int) -> bool:
    """True if ``v`` is dominated by its neighbor ``u``, i.e. N[u] is contained in N[v]."""
    return u in g.adj[v] and g.adj[u] - {v} <= g.adj[v]


def tails(g: Graph) -> Iterator[Tail]:
    for v in range(g.n):
        if g.degree(v) == 1:
            (u,) = g.adj[v]
            if g.degree(u) == 2:
                (w,) = g.adj[u] - {v}
                yield Tail(v, u, w)


def dominated_pairs(g: Graph) -> Iterator[tuple[int, int]]:
    """Pairs ``(v, u)`` where ``v`` is dominated by neighbor ``u``."""
    for v in range(g.n):
        for u in g.neighbors(v):
            if is_dominated(g, v, u):
                yield v, u


def satellites_of(g: Graph, v: int) -> Iterator[Satellite]:
    closed = g.adj[v] | {v}
    for p in g.neighbors(v):
        rest = g.adj[p] - closed
        if len(rest) == 1:
            (s,) = rest
            yield Satellite(v, p, s)


def satellites(g: Graph) -> Iterator[Satellite]:
    for v in range(g.n):
        yield from satellites_of(g, v)


def chains(g: Graph) -> Iterator[Chain]:
    """Paths u0 u1 u2 u3 with d(u0) >= 3, d(u1) = d(u2) = 2 and u0 != u3."""
    for u1 in range(g.n):
        if g.degree(u1) != 2:
            continue
        for u0 in g.neighbors(u1):
            if g.degree(u0) < 3:
                continue
            (u2,) = g.adj[u1] - {u0}
            if g.degree(u2) != 2:
                continue
            (u3,) = g.adj[u2] - {u1}
            if u3 != u0:
                yield Chain(u0, u1, u2, u3)


def triangle_pendants(g: Graph) -> Iterator[TrianglePendant]:
    for v in range(g.n):
        if g.degree(v) != 3:
            continue
        for u1 in g.neighbors(v):
            if g.degree(u1) != 1:
                continue
            u2, u3 = sorted(g.adj[v] - {u1})
            if g.has_edge(u2, u3):
                yield TrianglePendant(v, u1, u2, u3)


@dataclass
class StructureReport:
    tails: list[Tail]
    dominated_pairs: list[tuple[int, int]]
    satellites: list[Satellite]
    chains: list[Chain]
    triangle_pendants: list[TrianglePendant]


def detect_structures(g: Graph) -> StructureReport:
    return StructureReport(
        tails=list(tails(g)),
        dominated_pairs=list(dominated_pairs(g)),
        satellites=list(satellites(g)),
        chains=list(chains(g)),
        triangle_pendants=list(triangle_pendants(g)),
    )
