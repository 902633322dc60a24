"""Exact exponential solvers for small graphs, used as ground truth in tests.

These deliberately share nothing with the branching rules of the solver: the
cover oracle branches on the three vertices of an arbitrary 3-path, the packing
oracle enumerates every 3-path through the lowest live vertex.
"""

from __future__ import annotations

from functools import lru_cache

from .graph import Graph, Path3

DEFAULT_COVER_LIMIT = 20
DEFAULT_PACKING_LIMIT = 16


class InstanceTooLarge(ValueError):
    pass


def _masks(g: Graph) -> list[int]:
    return [sum(1 << u for u in g.adj[v]) for v in range(g.n)]


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _p3_in(adj: list[int], alive: int) -> tuple[int, int, int] | None:
    """A 3-path in the live subgraph, centered on a live vertex of maximum live degree."""
    best = None
    best_deg = 1
    for v in _bits(alive):
        live = adj[v] & alive
        deg = live.bit_count()
        if deg > best_deg:
            best, best_deg = (v, live), deg
    if best is None:
        return None
    v, live = best
    a, b = _bits(live)[:2]
    return a, v, b


def min_p3vc_oracle(g: Graph, limit: int = DEFAULT_COVER_LIMIT) -> tuple[int, list[int]]:
    """Minimum 3-path vertex cover by iterative deepening over 3-way branching."""
    if g.n > limit:
        raise InstanceTooLarge(f"oracle refuses n={g.n} > {limit}")
    adj = _masks(g)
    failed: dict[int, int] = {}  # alive mask -> largest budget known to fail

    def search(alive: int, budget: int) -> list[int] | None:
        path = _p3_in(adj, alive)
        if path is None:
            return []
        if budget == 0 or failed.get(alive, -1) >= budget:
            return None
        for v in path:
            sub = search(alive & ~(1 << v), budget - 1)
            if sub is not None:
                return [v, *sub]
        failed[alive] = budget
        return None

    full = (1 << g.n) - 1
    budget = 0
    while True:
        cover = search(full, budget)
        if cover is not None:
            return len(cover), sorted(cover)
        budget += 1


def max_p3_packing_oracle(g: Graph, limit: int = DEFAULT_PACKING_LIMIT) -> tuple[int, list[Path3]]:
    """Maximum 3-path packing by exhaustive search with memoization on the live set."""
    if g.n > limit:
        raise InstanceTooLarge(f"oracle refuses n={g.n} > {limit}")
    adj = _masks(g)

    @lru_cache(maxsize=None)
    def best(alive: int) -> tuple[Path3, ...]:
        if not alive:
            return ()
        v = (alive & -alive).bit_length() - 1
        rest = alive & ~(1 << v)
        result = best(rest)
        for path in _paths_through(adj, alive, v):
            sub = best(rest & ~(1 << path.end1) & ~(1 << path.middle) & ~(1 << path.end2))
            if len(sub) + 1 > len(result):
                result = (path, *sub)
        return result

    packing = list(best((1 << g.n) - 1))
    return len(packing), packing


def _paths_through(adj: list[int], alive: int, v: int) -> list[Path3]:
    nbrs = _bits(adj[v] & alive)
    paths = []
    for i, a in enumerate(nbrs):
        for b in nbrs[i + 1 :]:
            paths.append(Path3(a, v, b))
    for u in nbrs:
        for w in _bits(adj[u] & alive & ~(1 << v)):
            paths.append(Path3(v, u, w))
    return paths


def path_cycle_cover_size(kind: str, n: int) -> tuple[int, list[int]]:
    """Closed-form minimum cover of a path or cycle on ``n`` vertices.

    Vertices are numbered along the path (or around the cycle) from 0; the
    returned witness lists positions in that numbering.
    """
    if kind == "path":
        if n < 1:
            raise ValueError("path needs n >= 1")
        witness = [i for i in range(n) if i % 3 == 2]
        assert len(witness) == n // 3
    elif kind == "cycle":
        if n < 3:
            raise ValueError("cycle needs n >= 3")
        witness = [i for i in range(n) if i % 3 == 0]
        assert len(witness) == -(-n // 3)
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return len(witness), witness


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])
