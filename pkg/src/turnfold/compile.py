"""Compilers from target geometry to initial state sequences.

A monomer that must finish pointing in direction d (measured from east in
pi/3 units, mod 6) is given an initial state congruent to d mod 6; the
exact representative is pinned by the anchor of the first monomer and the
fact that adjacent turning numbers differ by the turn angle between the
two segments.  A machine built from such states reproduces the target
path exactly whenever it reaches the all-zero configuration.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .grid import turn_units
from .machine import TurningMachine, line_machine
from .shapes import Path, PartitionResult, row_segments, scaled_traversal, zigzag_sign

PROVENANCES = ("zigzag", "general", "spiral_in_to_out", "spiral_out_to_in", "scaled_fold")


class CompileError(ValueError):
    pass


class NotZigZagError(CompileError):
    def __init__(self, step_index: int, direction: int):
        super().__init__(
            f"step {step_index} (direction {direction}) breaks the zig-zag alphabet"
        )
        self.step_index = step_index


@dataclass(frozen=True)
class StateProgram:
    states: tuple[int, ...]
    provenance: str

    def machine(self) -> TurningMachine:
        return line_machine(self.states)


# direction-to-state maps for the two zig-zag alphabets
_POSITIVE_ZZ = {0: 0, 1: 1, 2: 2, 3: 3}
_NEGATIVE_ZZ = {0: 0, 4: -1, 5: -2, 3: -3}


def zigzag_states(p: Path) -> StateProgram:
    """States folding a positive or negative zig-zag path, terminal 0."""
    sign = 0
    for i, d in enumerate(p.directions):
        if d in (1, 2):
            if sign < 0:
                raise NotZigZagError(i, d)
            sign = 1
        elif d in (4, 5):
            if sign > 0:
                raise NotZigZagError(i, d)
            sign = -1
    table = _NEGATIVE_ZZ if sign < 0 else _POSITIVE_ZZ
    states = tuple(table[d] for d in p.directions) + (0,)
    assert zigzag_sign(p) is not None
    return StateProgram(states, "zigzag")


def states_from_path(p: Path, anchor: int, terminal: str = "zero") -> StateProgram:
    """Turning numbers read along an arbitrary simple path.

    ``anchor`` fixes the representative of the first monomer's state; it
    must be congruent mod 6 to the first segment's direction.  The last
    monomer has no segment; ``terminal`` selects its conventional state:
    ``"zero"`` appends 0 (the line-machine convention), ``"repeat"``
    repeats the previous turning number (the noted value does not change
    at the final point).
    """
    if terminal not in ("zero", "repeat"):
        raise CompileError(f"unknown terminal convention {terminal!r}")
    dirs = p.directions
    if not dirs:
        if anchor % 6 != 0:
            raise CompileError("single-point path requires an anchor divisible by 6")
        return StateProgram((0,), "general")
    if anchor % 6 != dirs[0]:
        raise CompileError(
            f"anchor {anchor} is not congruent to the first direction {dirs[0]} mod 6"
        )
    states = [anchor]
    for a, b in zip(dirs, dirs[1:]):
        states.append(states[-1] + turn_units(a, b))
    states.append(0 if terminal == "zero" else states[-1])
    return StateProgram(tuple(states), "general")


def spiral_states(k: int, t0: int, direction: str) -> StateProgram:
    """Turning-number sequence for the k-turn 1-gap spiral.

    Inside-to-outside runs have lengths 1, 2, ..., 4k+1 with increments
    +1/+2 alternating (odd/even run index); outside-to-inside runs have
    lengths 4k+1, ..., 2, 1 with decrements -2/-1.  The final monomer
    repeats the last turning number, giving 8k^2 + 6k + 2 states overall.
    """
    if k < 1:
        raise CompileError("spiral needs at least one turn")
    if direction == "in_to_out":
        if t0 % 6 != 0:
            raise CompileError("inside-to-outside anchor must be 0 mod 6")
        values = [t0]
        for i in range(1, 4 * k + 1):
            values.append(values[-1] + (2 if i % 2 == 0 else 1))
        states: list[int] = []
        for i, v in enumerate(values):
            states.extend([v] * (i + 1))
        states.append(values[-1])
        return StateProgram(tuple(states), "spiral_in_to_out")
    if direction == "out_to_in":
        if t0 % 6 != 3:
            raise CompileError("outside-to-inside anchor must be 3 mod 6")
        values = [t0]
        for i in range(1, 4 * k + 1):
            values.append(values[-1] - (1 if i % 2 == 0 else 2))
        states = []
        for i, v in enumerate(values):
            states.extend([v] * (4 * k + 1 - i))
        states.append(values[-1])
        return StateProgram(tuple(states), "spiral_out_to_in")
    raise CompileError(f"unknown spiral direction {direction!r}")


def scaled_fold_states(p: PartitionResult, flip_offseam_sign: bool = False) -> StateProgram:
    """Initial states for the factor-2 fold along a yw-separator.

    The first monomer sits on the topmost point of the left seam; the
    chain descends the left piece (negative states), crosses in the
    bottommost row, and ascends the right piece (positive states).  Left
    piece: bottom-of-pair rows carry 0 except the seam point, which turns
    down by -2 (seam segment parallel to y) or -1 (parallel to w);
    top-of-pair rows carry -2 at their leftmost point and -3 elsewhere.
    Right piece: bottom-of-pair rows carry 1 at their rightmost point and
    0 elsewhere; top-of-pair rows carry 0 at the last monomer, 1 or 2 on
    the seam (segment parallel to y or w), and 3 elsewhere.

    ``flip_offseam_sign`` flips that last 3 to -3, an alternative sign
    convention kept for comparison.  The -3 variant cannot fold: its
    final configuration would put adjacent turning numbers 4 apart,
    which no reachable configuration allows.
    """
    trav = scaled_traversal(p)
    lsegs = row_segments(p.left.points)
    rsegs = row_segments(p.right.points)
    assert lsegs is not None and rsegs is not None
    lcut = {y: x for x, y in p.left_seam}
    rcut = {y: x for x, y in p.right_seam}
    y0 = p.left_seam[0][1]
    y_top = p.left_seam[-1][1]
    n = len(trav.points)
    states: list[int] = []
    for t, (x, y) in enumerate(trav.points):
        bottom_of_pair = (y - y0) % 2 == 0
        if (x, y) in p.left:
            if bottom_of_pair:
                if x == lcut[y] and y != y0:
                    dx = lcut[y] - lcut[y - 1]  # seam segment below this point
                    states.append(-2 if dx == 0 else -1)
                else:
                    states.append(0)
            else:
                states.append(-2 if x == lsegs[y][0] else -3)
        else:
            if bottom_of_pair:
                states.append(1 if x == rsegs[y][1] else 0)
            else:
                if t == n - 1:
                    states.append(0)
                elif x == rcut[y] and y != y_top:
                    dx = rcut[y + 1] - rcut[y]  # seam segment above this point
                    states.append(1 if dx == 0 else 2)
                else:
                    states.append(-3 if flip_offseam_sign else 3)
    return StateProgram(tuple(states), "scaled_fold")


@dataclass(frozen=True)
class ValidationReport:
    """Static necessary conditions for a program against its target path.

    (a) adjacent states (terminal pair excluded) differ by at most 2,
    (b) each state is congruent mod 6 to its target segment direction,
    (c) the terminal state is 0 or repeats its predecessor (the last
        monomer has no outgoing bond, so only convention constrains it).
    All three are necessary, not sufficient: foldability is dynamic.
    """

    adjacent_violations: tuple[tuple[int, int], ...] = field(default=())
    direction_violations: tuple[tuple[int, int, int], ...] = field(default=())
    terminal_ok: bool = True

    @property
    def ok(self) -> bool:
        return not self.adjacent_violations and not self.direction_violations and self.terminal_ok


def validate_states(sp: StateProgram, target: Path) -> ValidationReport:
    states = sp.states
    if len(states) != len(target.points):
        raise CompileError(
            f"program length {len(states)} != target length {len(target.points)}"
        )
    n = len(states)
    adjacent = tuple(
        (i, abs(states[i + 1] - states[i]))
        for i in range(n - 2)
        if abs(states[i + 1] - states[i]) > 2
    )
    dirs = target.directions
    direction = tuple(
        (i, states[i] % 6, dirs[i]) for i in range(n - 1) if states[i] % 6 != dirs[i]
    )
    return ValidationReport(
        adjacent_violations=adjacent,
        direction_violations=direction,
        terminal_ok=(states[-1] == 0 or (n >= 2 and states[-1] == states[-2])),
    )


def target_path_of(sp: StateProgram, start: tuple[int, int] = (0, 0)) -> Path:
    """The path the program folds: walk the per-monomer directions mod 6."""
    from .grid import displacement

    pts = [start]
    for s in sp.states[:-1]:
        dx, dy = displacement(s % 6)
        pts.append((pts[-1][0] + dx, pts[-1][1] + dy))
    return Path(tuple(pts))


def program_to_json(sp: StateProgram) -> str:
    return json.dumps({"states": list(sp.states), "provenance": sp.provenance})


def program_from_json(text: str) -> StateProgram:
    doc = json.loads(text)
    prov = doc.get("provenance", "general")
    if prov not in PROVENANCES:
        raise CompileError(f"unknown provenance {prov!r}")
    return StateProgram(tuple(int(s) for s in doc["states"]), prov)
