"""Seeded random graph generators."""

from __future__ import annotations

import itertools
import random

from .graph import Graph

MODELS = ("gnp",)


def gen_random_graph(model: str, n: int, p: float, seed: int) -> Graph:
    """G(n, p) driven by ``random.Random(seed)``; pairs are drawn in lexicographic order."""
    if model not in MODELS:
        raise ValueError(f"unknown model {model!r}")
    if n < 0:
        raise ValueError("n must be non-negative")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    rng = random.Random(seed)
    return Graph.from_edges(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < p])
