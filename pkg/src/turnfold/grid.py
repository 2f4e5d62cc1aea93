"""Triangular-grid primitives: directions, rotations, integer lattice points.

Points are integer ``(x, y)`` pairs.  The third axis ``w`` runs through
``(-1, 1)`` and is derived, never stored.  The six unit directions are
indexed 0..5 in anticlockwise order: ``+x, +y, +w, -x, -y, -w``.  All
geometry is exact integer arithmetic; the Euclidean embedding exists only
for rendering.
"""

from __future__ import annotations

import math

Point = tuple[int, int]

DISPLACEMENTS: tuple[Point, ...] = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))
DIRECTION_NAMES: tuple[str, ...] = ("+x", "+y", "+w", "-x", "-y", "-w")

_DIRECTION_OF_STEP = {d: i for i, d in enumerate(DISPLACEMENTS)}


def rotate_direction(d: int, k: int) -> int:
    """Rotate direction index ``d`` by ``k`` sixths of a turn (anticlockwise)."""
    return (d + k) % 6


def displacement(d: int) -> Point:
    """Unit lattice step of direction ``d``."""
    return DISPLACEMENTS[d]


def step(p: Point, d: int) -> Point:
    dx, dy = DISPLACEMENTS[d]
    return (p[0] + dx, p[1] + dy)


def direction_between(a: Point, b: Point) -> int:
    """Direction index of the unit step from ``a`` to ``b``.

    Raises ValueError if the two points are not grid neighbours.
    """
    d = _DIRECTION_OF_STEP.get((b[0] - a[0], b[1] - a[1]))
    if d is None:
        raise ValueError(f"{a} -> {b} is not a unit grid step")
    return d


def turn_units(d_in: int, d_out: int) -> int:
    """Signed turn from direction ``d_in`` to ``d_out`` in pi/3 units.

    Positive is a left (anticlockwise) turn.  The result lies in
    {-2, -1, 0, 1, 2}; a half-turn reversal is rejected because it cannot
    occur on a simple chain.
    """
    t = (d_out - d_in) % 6
    if t == 3:
        raise ValueError("reversal (turn of pi) has no signed representative")
    return t if t <= 2 else t - 6


def neighbors(p: Point) -> tuple[Point, ...]:
    x, y = p
    return tuple((x + dx, y + dy) for dx, dy in DISPLACEMENTS)


def embed(p: Point) -> tuple[float, float]:
    """Euclidean embedding (rendering only): (x + y/2, y*sqrt(3)/2)."""
    return (p[0] + p[1] / 2.0, p[1] * math.sqrt(3.0) / 2.0)
