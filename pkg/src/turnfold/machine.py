"""Exact Turning Machine semantics.

A machine is a simple chain of monomers anchored at the origin, each
carrying an integer state.  The single rule moves a state one step toward
zero while rotating the monomer's outgoing bond by pi/3 (anticlockwise for
positive states, clockwise for negative); every later monomer in the chain
is dragged through the same unit translation.  A move is blocked when the
translated head would collide with the tail, and configurations must stay
self-avoiding at all times.

Reachable configurations are canonically identified by their state vector:
given the initial path, each monomer's direction is its initial direction
rotated by the number of moves it has made, so positions are a function of
the states and can be rebuilt with :func:`reconstruct_positions`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from .grid import (
    Point,
    direction_between,
    displacement,
    rotate_direction,
    turn_units,
)

FINAL = "final"
PERMANENTLY_BLOCKED = "permanently_blocked"
ACTIVE = "active"


class MachineError(ValueError):
    """Invalid machine, configuration or move."""


class SelfIntersectingError(MachineError):
    """A state vector whose rebuilt chain is not self-avoiding."""


class NotApplicableError(MachineError):
    """Attempt to apply a move that is not applicable."""

    def __init__(self, monomer: int, status: "MoveStatus"):
        super().__init__(f"move on monomer {monomer} not applicable: {status.kind}")
        self.monomer = monomer
        self.status = status


@dataclass(frozen=True)
class MoveStatus:
    """Applicability of the rule at one monomer.

    ``kind`` is one of ``"applicable"``, ``"zero_state"``, ``"blocked"``.
    For a blocked move, ``tail``/``head`` hold the lexicographically
    smallest witness pair ``(k, j)`` with ``k <= i < j`` such that the
    translated position of head monomer ``j`` coincides with the position
    of tail monomer ``k``.
    """

    kind: str
    tail: int | None = None
    head: int | None = None


APPLICABLE = MoveStatus("applicable")
ZERO_STATE = MoveStatus("zero_state")


@dataclass(frozen=True)
class TurningMachine:
    """An instance: initial states plus the initial simple path."""

    states: tuple[int, ...]
    path: tuple[Point, ...]

    def __post_init__(self):
        if len(self.states) == 0:
            raise MachineError("machine must have at least one monomer")
        if len(self.states) != len(self.path):
            raise MachineError("states and path must have equal length")
        if self.path[0] != (0, 0):
            raise MachineError("initial path must start at the origin")
        for a, b in zip(self.path, self.path[1:]):
            try:
                direction_between(a, b)
            except ValueError as e:
                raise MachineError(str(e)) from None
        if len(set(self.path)) != len(self.path):
            raise MachineError("initial path must be simple")

    @property
    def n(self) -> int:
        return len(self.states)

    @property
    def initial_directions(self) -> tuple[int, ...]:
        """Direction index of each monomer but the last in the initial path."""
        return tuple(direction_between(a, b) for a, b in zip(self.path, self.path[1:]))

    @property
    def state_set(self) -> range:
        """The contiguous state set spanned by the initial states and 0."""
        lo = min(min(self.states), 0)
        hi = max(max(self.states), 0)
        return range(lo, hi + 1)


def line_machine(states: Sequence[int]) -> TurningMachine:
    """Machine whose initial path is the east-pointing line (i, 0)."""
    states = tuple(int(s) for s in states)
    if not states:
        raise MachineError("empty state sequence")
    return TurningMachine(states, tuple((i, 0) for i in range(len(states))))


def line_rotation_machine(sigma: int, n: int) -> TurningMachine:
    """The n-monomer line rotator: n-1 monomers in state ``sigma``, last 0."""
    if n < 1:
        raise MachineError("need at least one monomer")
    if sigma == 0 and n > 1:
        raise MachineError("rotation state must be nonzero")
    return line_machine([sigma] * (n - 1) + [0])


@dataclass(frozen=True)
class Configuration:
    """A reachable snapshot: current states plus current positions."""

    machine: TurningMachine
    states: tuple[int, ...]
    positions: tuple[Point, ...]

    @property
    def n(self) -> int:
        return len(self.states)

    def direction(self, i: int) -> int:
        """Direction index of monomer ``i`` (undefined for the last one)."""
        return direction_between(self.positions[i], self.positions[i + 1])

    def delta_s(self, i: int) -> int:
        """Number of rule applications monomer ``i`` has undergone."""
        return abs(self.machine.states[i]) - abs(self.states[i])

    def net_rotation(self, i: int) -> int:
        """Signed total rotation of monomer ``i`` in pi/3 units."""
        return self.machine.states[i] - self.states[i]

    def validate(self) -> None:
        """Check the configuration invariants; raises MachineError."""
        if len(self.states) != self.machine.n or len(self.positions) != self.machine.n:
            raise MachineError("length mismatch")
        if self.positions[0] != (0, 0):
            raise MachineError("chain must start at the origin")
        for a, b in zip(self.positions, self.positions[1:]):
            direction_between(a, b)
        if len(set(self.positions)) != len(self.positions):
            raise SelfIntersectingError("positions are not pairwise distinct")
        for s0, s in zip(self.machine.states, self.states):
            if s0 >= 0 and not (0 <= s <= s0):
                raise MachineError(f"state {s} outside [0, {s0}]")
            if s0 < 0 and not (s0 <= s <= 0):
                raise MachineError(f"state {s} outside [{s0}, 0]")


def initial_configuration(tm: TurningMachine) -> Configuration:
    return Configuration(tm, tm.states, tm.path)


def reconstruct_positions(tm: TurningMachine, states: Sequence[int]) -> Configuration:
    """Rebuild the configuration determined by a state vector.

    Each monomer's direction is its initial direction rotated by its net
    rotation (initial state minus current state, anticlockwise positive).
    Raises SelfIntersectingError if the rebuilt chain is not simple, which
    happens exactly when the state vector is unreachable geometry.
    """
    states = tuple(int(s) for s in states)
    if len(states) != tm.n:
        raise MachineError("state vector length mismatch")
    for i, (s0, s) in enumerate(zip(tm.states, states)):
        lo, hi = (0, s0) if s0 >= 0 else (s0, 0)
        if not (lo <= s <= hi):
            raise MachineError(f"state {s} of monomer {i} outside [{lo}, {hi}]")
    dirs = tm.initial_directions
    positions = [(0, 0)]
    seen = {(0, 0)}
    for i in range(tm.n - 1):
        d = rotate_direction(dirs[i], tm.states[i] - states[i])
        p = positions[-1]
        dx, dy = displacement(d)
        q = (p[0] + dx, p[1] + dy)
        if q in seen:
            raise SelfIntersectingError(
                f"state vector {states} rebuilds a self-intersecting chain at monomer {i + 1}"
            )
        seen.add(q)
        positions.append(q)
    return Configuration(tm, states, tuple(positions))


def _move_translation(c: Configuration, i: int) -> Point:
    """Displacement applied to head(m_i) when monomer i moves."""
    d = c.direction(i)
    rotated = rotate_direction(d, 2 if c.states[i] > 0 else -2)
    return displacement(rotated)


def move_status(c: Configuration, i: int) -> MoveStatus:
    """Applicability of the rule at monomer ``i``.

    The blocking test intersects the tail positions with the translated
    head positions via a hash map; the returned witness is the smallest
    ``(tail, head)`` pair in lexicographic order.
    """
    n = c.n
    if not (0 <= i < n):
        raise IndexError(f"monomer index {i} out of range")
    if c.states[i] == 0:
        return ZERO_STATE
    if i == n - 1:
        # No outgoing bond: nothing translates, the state just decrements.
        return APPLICABLE
    dx, dy = _move_translation(c, i)
    translated: dict[Point, int] = {}
    for j in range(n - 1, i, -1):  # descending so the smallest j wins
        x, y = c.positions[j]
        translated[(x + dx, y + dy)] = j
    for k in range(i + 1):
        hit = translated.get(c.positions[k])
        if hit is not None:
            return MoveStatus("blocked", tail=k, head=hit)
    return APPLICABLE


def apply_move(c: Configuration, i: int) -> Configuration:
    """Apply the rule at monomer ``i``; raises NotApplicableError otherwise."""
    status = move_status(c, i)
    if status.kind != "applicable":
        raise NotApplicableError(i, status)
    s = c.states[i]
    new_states = list(c.states)
    new_states[i] = s - 1 if s > 0 else s + 1
    if i == c.n - 1:
        return Configuration(c.machine, tuple(new_states), c.positions)
    dx, dy = _move_translation(c, i)
    new_positions = list(c.positions)
    for j in range(i + 1, c.n):
        x, y = new_positions[j]
        new_positions[j] = (x + dx, y + dy)
    return Configuration(c.machine, tuple(new_states), tuple(new_positions))


def applicable_moves(c: Configuration) -> list[int]:
    """Indices with an applicable rule, ascending."""
    return [i for i in range(c.n) if move_status(c, i).kind == "applicable"]


def classify(c: Configuration) -> str:
    """FINAL (all states zero), PERMANENTLY_BLOCKED, or ACTIVE."""
    if all(s == 0 for s in c.states):
        return FINAL
    if not applicable_moves(c):
        return PERMANENTLY_BLOCKED
    return ACTIVE


def turn_angle(c: Configuration, i: int) -> int:
    """Turn angle at monomer ``i`` in pi/3 units, positive to the left."""
    if not (1 <= i <= c.n - 2):
        raise IndexError(f"turn angle undefined at monomer {i}")
    return turn_units(c.direction(i - 1), c.direction(i))


def count_blocked(c: Configuration) -> int:
    """Number of nonzero-state monomers whose move is blocked."""
    return sum(
        1
        for i in range(c.n)
        if c.states[i] != 0 and move_status(c, i).kind == "blocked"
    )


def machine_to_json(tm: TurningMachine) -> str:
    """Serialize; the path is omitted when it is the east-pointing line."""
    doc: dict = {"states": list(tm.states)}
    east = tuple((i, 0) for i in range(tm.n))
    if tm.path != east:
        doc["path"] = [list(p) for p in tm.path]
    return json.dumps(doc)


def machine_from_json(text: str) -> TurningMachine:
    doc = json.loads(text)
    states = [int(s) for s in doc["states"]]
    if "path" in doc:
        path = tuple((int(x), int(y)) for x, y in doc["path"])
        return TurningMachine(tuple(states), path)
    return line_machine(states)
