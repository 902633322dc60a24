"""Branching factors of linear recurrences T(k) <= sum_i T(k - c_i)."""

from __future__ import annotations

from typing import Sequence

# (step, title, decrement vector at the worst case) for every analyzed branching step
STEP_VECTORS: list[tuple[int, str, tuple[int, ...]]] = [
    (3, "dominated vertex, d(v)=3", (1, 2)),
    (4, "satellite, d(v)=4", (1, 4, 4, 4, 4)),
    (5, "normal vertex, d(v)=4", (1, 4, 5, 5, 5, 5)),
    (6, "chain, d(u0)=3", (2, 3, 3, 3)),
    (7, "degree-2 next to triangle", (3, 3, 3, 3, 3)),
    (8, "degree-2 with degree-3 at distance 2", (2, 3, 3, 3, 4)),
]


def characteristic(decrements: Sequence[int], x: float) -> float:
    return 1.0 - sum(x ** (-c) for c in decrements)


def branching_factor(decrements: Sequence[int], tol: float = 1e-9) -> float:
    """Largest root of ``1 - sum(x**-c)``, by bisection on ``[1, len(decrements) + 1]``.

    The function is strictly increasing for ``x > 0``, non-positive at 1 and
    positive at ``l + 1``, so bisection always converges.
    """
    if not decrements:
        raise ValueError("need at least one branch")
    if any(c < 1 for c in decrements):
        raise ValueError("decrements must be positive integers")
    if tol <= 0:
        raise ValueError("tol must be positive")
    lo, hi = 1.0, float(len(decrements) + 1)
    if characteristic(decrements, lo) >= 0:
        return lo
    while True:
        mid = (lo + hi) / 2
        val = characteristic(decrements, mid)
        if abs(val) < tol and hi - lo < tol:
            return mid
        if val < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-15:
            return (lo + hi) / 2


def factor_table() -> list[tuple[int, str, tuple[int, ...], float]]:
    return [(step, title, vec, branching_factor(vec)) for step, title, vec in STEP_VECTORS]
