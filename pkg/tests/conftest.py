"""Shared test helpers: independent oracles and random generators.

The oracles here deliberately avoid the library's optimized code paths:
blocking is decided by a full pairwise scan, and the reference sampler
drives the continuous-time chain directly from the applicable-move set.
"""

from __future__ import annotations

import numpy as np

from turnfold.grid import DISPLACEMENTS, rotate_direction
from turnfold.machine import (
    Configuration,
    FINAL,
    PERMANENTLY_BLOCKED,
    applicable_moves,
    apply_move,
)
from turnfold.shapes import Shape


def naive_move_status(c: Configuration, i: int) -> str:
    """O(n^2) pairwise reimplementation of the rule applicability test."""
    n = c.n
    if c.states[i] == 0:
        return "zero_state"
    if i == n - 1:
        return "applicable"
    d = c.direction(i)
    dp = rotate_direction(d, 2 if c.states[i] > 0 else -2)
    dx, dy = DISPLACEMENTS[dp]
    for j in range(i + 1, n):
        tx, ty = c.positions[j][0] + dx, c.positions[j][1] + dy
        for k in range(i + 1):
            if c.positions[k] == (tx, ty):
                return "blocked"
    return "applicable"


def naive_sample_trajectory(tm, rng: np.random.Generator, max_steps: int = 10**6):
    """Direct CTMC simulation: Exp(k) holding time, uniform applicable move.

    Returns (outcome, total_time, steps).
    """
    c = Configuration(tm, tm.states, tm.path)
    t = 0.0
    steps = 0
    while steps < max_steps:
        moves = applicable_moves(c)
        k = len(moves)
        if k == 0:
            if all(s == 0 for s in c.states):
                return FINAL, t, steps
            return PERMANENTLY_BLOCKED, t, steps
        t += rng.exponential(1.0 / k)
        c = apply_move(c, moves[rng.integers(k)])
        steps += 1
    raise AssertionError("runaway trajectory")


def random_y_monotone_shape(rng: np.random.Generator, max_points: int = 40) -> Shape:
    """Connected y-monotone shape: rows of random extent, adjacent rows touching.

    Row r+1 = [c, d] is adjacent to row r = [a, b] iff c <= b and d >= a - 1
    (a shared column or a single +w step suffices on this grid).
    """
    height = int(rng.integers(1, 7))
    a = int(rng.integers(-3, 4))
    b = a + int(rng.integers(0, 6))
    rows = [(a, b)]
    total = b - a + 1
    for _ in range(height - 1):
        a_prev, b_prev = rows[-1]
        lo = a_prev - int(rng.integers(0, 4)) - 1
        c = int(rng.integers(lo, b_prev + 1))
        d = c + int(rng.integers(0, 6))
        if d < a_prev - 1:
            d = a_prev - 1
        width = d - c + 1
        if total + width > max_points:
            break
        rows.append((c, d))
        total += width
    pts = {(x, y) for y, (lo, hi) in enumerate(rows) for x in range(lo, hi + 1)}
    return Shape(frozenset(pts))


def random_separator_shape(rng: np.random.Generator, max_points: int = 12) -> Shape:
    """xy-connected y-monotone shape admitting a yw-separator (retry loop)."""
    from turnfold.shapes import analyze, yw_separator

    while True:
        s = random_y_monotone_shape(rng, max_points)
        if len(s) > max_points:
            continue
        a = analyze(s)
        if not a.xy_connected:
            continue
        if yw_separator(s) is None:
            continue
        return s


def has_hamiltonian_path(points: frozenset) -> bool:
    """Brute-force Hamiltonian path search over the induced grid graph."""
    pts = sorted(points)
    n = len(pts)
    index = {p: i for i, p in enumerate(pts)}
    adj = [
        [index[q] for q in
         ((p[0] + dx, p[1] + dy) for dx, dy in DISPLACEMENTS) if q in index]
        for p in pts
    ]

    def extend(v: int, visited: int, count: int) -> bool:
        if count == n:
            return True
        for w in adj[v]:
            if not visited & (1 << w) and extend(w, visited | (1 << w), count + 1):
                return True
        return False

    return any(extend(v, 1 << v, 1) for v in range(n))
