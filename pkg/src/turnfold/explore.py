"""Exhaustive reachability over state vectors.

The state vector determines the geometry of a reachable configuration, so
breadth-first search over state vectors (deduplicating on them) visits
every reachable configuration exactly once.  Every maximal trajectory is
finite (the total absolute state strictly decreases), hence a machine
folds iff no permanently blocked configuration is reachable, and the
all-zero vector pins the unique target geometry.

The search expands moves in ascending monomer order from a FIFO queue, so
the recorded parent chain of any state is the lexicographically smallest
among its minimum-length move sequences; witnesses are therefore canonical
and schedule-independent.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass

from .machine import (
    Configuration,
    MachineError,
    MoveStatus,
    TurningMachine,
    apply_move,
    count_blocked,
    move_status,
    reconstruct_positions,
    turn_angle,
)

DEFAULT_CAP = 10_000_000

_DIR_OF_STEP = {(1, 0): 0, (0, 1): 1, (-1, 1): 2, (-1, 0): 3, (0, -1): 4, (1, -1): 5}


class ReplayError(MachineError):
    def __init__(self, step: int, monomer: int, status: MoveStatus):
        super().__init__(
            f"move {step} (monomer {monomer}) not applicable: {status.kind}"
        )
        self.step = step
        self.monomer = monomer
        self.status = status


@dataclass(frozen=True)
class ReachReport:
    reachable_count: int
    blocked_configs: tuple[tuple[int, ...], ...]
    final_reached: bool
    truncated: bool


@dataclass(frozen=True)
class Verdict:
    kind: str  # "folds" | "unfoldable" | "inconclusive"
    witness: tuple[int, ...] | None = None


def _successors(states, positions, n):
    """(move, new_states, new_positions) for applicable moves, ascending."""
    pos_index = {p: i for i, p in enumerate(positions)}
    out = []
    for i in range(n):
        s = states[i]
        if s == 0:
            continue
        if i == n - 1:
            ns = states[:i] + (s - 1 if s > 0 else s + 1,)
            out.append((i, ns, positions))
            continue
        a, b = positions[i], positions[i + 1]
        d = _DIR_OF_STEP[(b[0] - a[0], b[1] - a[1])]
        dp = (d + 2) % 6 if s > 0 else (d + 4) % 6
        dx, dy = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))[dp]
        blocked = False
        if i + 1 <= n - 1 - i:
            for k in range(i + 1):
                x, y = positions[k]
                hit = pos_index.get((x - dx, y - dy))
                if hit is not None and hit > i:
                    blocked = True
                    break
        else:
            for j in range(i + 1, n):
                x, y = positions[j]
                hit = pos_index.get((x + dx, y + dy))
                if hit is not None and hit <= i:
                    blocked = True
                    break
        if blocked:
            continue
        ns = states[:i] + (s - 1 if s > 0 else s + 1,) + states[i + 1 :]
        np_ = positions[: i + 1] + tuple(
            (x + dx, y + dy) for x, y in positions[i + 1 :]
        )
        out.append((i, ns, np_))
    return out


def _search(tm: TurningMachine, cap: int, stop_on_blocked: bool):
    """BFS closure; returns (parents, blocked, final_reached, truncated).

    parents maps each visited state vector to (parent vector, move).
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    n = tm.n
    start = tm.states
    parents: dict[tuple[int, ...], tuple[tuple[int, ...] | None, int | None]] = {
        start: (None, None)
    }
    blocked: list[tuple[int, ...]] = []
    final_reached = False
    truncated = False
    queue = deque([(start, tm.path)])
    while queue:
        states, positions = queue.popleft()
        if all(s == 0 for s in states):
            final_reached = True
            continue
        succs = _successors(states, positions, n)
        if not succs:
            blocked.append(states)
            if stop_on_blocked:
                return parents, blocked, final_reached, truncated
            continue
        for i, ns, np_ in succs:
            if ns in parents:
                continue
            if len(parents) >= cap:
                truncated = True
                return parents, blocked, final_reached, truncated
            parents[ns] = (states, i)
            queue.append((ns, np_))
    return parents, blocked, final_reached, truncated


def reachable(tm: TurningMachine, cap: int = DEFAULT_CAP) -> ReachReport:
    """Breadth-first closure of the reachable state vectors."""
    parents, blocked, final_reached, truncated = _search(tm, cap, stop_on_blocked=False)
    return ReachReport(
        reachable_count=len(parents),
        blocked_configs=tuple(blocked),
        final_reached=final_reached,
        truncated=truncated,
    )


def _witness_moves(parents, state) -> tuple[int, ...]:
    moves = []
    cur = state
    while True:
        parent, move = parents[cur]
        if parent is None:
            break
        moves.append(move)
        cur = parent
    return tuple(reversed(moves))


def decide_folds(tm: TurningMachine, cap: int = DEFAULT_CAP) -> Verdict:
    """Folds iff no permanently blocked configuration is reachable.

    An unfoldable verdict carries the canonical shortest witness move
    sequence leading to the first blocked configuration found.
    """
    parents, blocked, _, truncated = _search(tm, cap, stop_on_blocked=True)
    if blocked:
        return Verdict("unfoldable", _witness_moves(parents, blocked[0]))
    if truncated:
        return Verdict("inconclusive")
    return Verdict("folds")


def replay(tm: TurningMachine, moves) -> Configuration:
    """Apply a scripted move sequence, erroring on the first bad move."""
    c = Configuration(tm, tm.states, tm.path)
    for t, i in enumerate(moves):
        status = move_status(c, i)
        if status.kind != "applicable":
            raise ReplayError(t, i, status)
        c = apply_move(c, i)
    return c


# ---------------------------------------------------------------------------
# invariant suite


@dataclass(frozen=True)
class InvariantViolation:
    invariant: str
    states: tuple[int, ...]
    detail: str


@dataclass(frozen=True)
class InvariantReport:
    checks_run: tuple[str, ...]
    configurations_checked: int
    truncated: bool
    violations: tuple[InvariantViolation, ...]

    @property
    def passed(self) -> bool:
        return not self.violations


def _machine_traits(tm: TurningMachine) -> dict[str, bool]:
    # each invariant holds for a class of machines: the state-difference
    # arguments need one shared initial direction, the half-plane and
    # blocked-fraction facts additionally need the east-pointing line
    dirs = set(tm.initial_directions)
    states = tm.states
    same_direction = len(dirs) <= 1
    east_line = dirs <= {0}
    nonneg5 = all(0 <= s <= 5 for s in states)
    return {
        "same_direction": same_direction,
        "states_in_0_5": nonneg5 and same_direction,
        "states_in_0_3_line": east_line and all(0 <= s <= 3 for s in states),
        "l3_line": east_line
        and tm.n >= 2
        and states[-1] == 0
        and all(s == 3 for s in states[:-1]),
        "states_in_0_5_line": nonneg5 and east_line,
    }


def configuration_violations(c: Configuration, checks=None) -> list[InvariantViolation]:
    """Evaluate the per-configuration invariants; empty list means pass.

    ``checks`` restricts the set (names as in ``invariant_checks``); by
    default every check whose machine-level precondition holds runs.
    """
    tm = c.machine
    traits = _machine_traits(tm)
    if checks is None:
        checks = [name for name, trait in _CHECK_TRAITS.items() if traits.get(trait, True)]
    out: list[InvariantViolation] = []
    for name in checks:
        out.extend(_CHECKS[name](c))
    return out


def _check_simple(c: Configuration):
    if len(set(c.positions)) != len(c.positions):
        return [InvariantViolation("simple_chain", c.states, "positions repeat")]
    return []


def _check_roundtrip(c: Configuration):
    try:
        rebuilt = reconstruct_positions(c.machine, c.states)
    except MachineError as e:
        return [InvariantViolation("state_vector_roundtrip", c.states, str(e))]
    if rebuilt.positions != c.positions:
        return [
            InvariantViolation(
                "state_vector_roundtrip", c.states, "rebuilt positions differ"
            )
        ]
    return []


def _check_delta_diff(c: Configuration):
    # adjacent move counts differ by <= 2 (signed net rotation; the pair
    # containing the terminal monomer has no geometric constraint)
    out = []
    for i in range(c.n - 2):
        d = abs(c.net_rotation(i) - c.net_rotation(i + 1))
        if d > 2:
            out.append(
                InvariantViolation(
                    "delta_s_difference_le_2", c.states, f"pair ({i},{i + 1}) differs by {d}"
                )
            )
    return out


def _check_turn_chain(c: Configuration):
    # turn angle at monomer k equals the difference of net rotations,
    # which telescopes into the full chain identity
    out = []
    for k in range(1, c.n - 1):
        try:
            alpha = turn_angle(c, k)
        except ValueError:
            out.append(
                InvariantViolation("turn_angle_chain", c.states, f"reversal at {k}")
            )
            continue
        if alpha != c.net_rotation(k) - c.net_rotation(k - 1):
            out.append(
                InvariantViolation(
                    "turn_angle_chain",
                    c.states,
                    f"alpha_{k}={alpha} != net delta {c.net_rotation(k) - c.net_rotation(k - 1)}",
                )
            )
    return out


def _check_unblocked_low_delta(c: Configuration):
    out = []
    for i in range(c.n):
        if c.states[i] != 0 and c.delta_s(i) <= 1:
            if move_status(c, i).kind == "blocked":
                out.append(
                    InvariantViolation(
                        "low_delta_never_blocked",
                        c.states,
                        f"monomer {i} blocked with delta {c.delta_s(i)}",
                    )
                )
    return out


def _check_head_tail_line(c: Configuration):
    # tail on or below the mover's horizontal line, head on or above
    ys = [p[1] for p in c.positions]
    prefix_max = []
    m = ys[0]
    for y in ys:
        m = max(m, y)
        prefix_max.append(m)
    suffix_min = [0] * len(ys)
    m = ys[-1]
    for i in range(len(ys) - 1, -1, -1):
        m = min(m, ys[i])
        suffix_min[i] = m
    out = []
    for i, y in enumerate(ys):
        if prefix_max[i] > y or suffix_min[i] < y:
            out.append(
                InvariantViolation(
                    "head_above_tail_below", c.states, f"monomer {i} line crossed"
                )
            )
    return out


def _check_l3_blocking(c: Configuration):
    out = []
    for i in range(c.n):
        if c.states[i] != 0 and move_status(c, i).kind == "blocked":
            neighbor3 = (i > 0 and c.states[i - 1] == 3) or (
                i < c.n - 1 and c.states[i + 1] == 3
            )
            if c.states[i] != 1 or not neighbor3:
                out.append(
                    InvariantViolation(
                        "l3_blocked_is_state1_next_to_state3",
                        c.states,
                        f"monomer {i} in state {c.states[i]}",
                    )
                )
    return out


def _check_blocked_fraction(c: Configuration):
    limit = 3 * c.n / 4
    b = count_blocked(c)
    if b > limit:
        return [
            InvariantViolation(
                "blocked_at_most_3n_over_4", c.states, f"{b} blocked > {limit}"
            )
        ]
    return []


_CHECKS = {
    "simple_chain": _check_simple,
    "state_vector_roundtrip": _check_roundtrip,
    "delta_s_difference_le_2": _check_delta_diff,
    "turn_angle_chain": _check_turn_chain,
    "low_delta_never_blocked": _check_unblocked_low_delta,
    "head_above_tail_below": _check_head_tail_line,
    "l3_blocked_is_state1_next_to_state3": _check_l3_blocking,
    "blocked_at_most_3n_over_4": _check_blocked_fraction,
}

# machine-level precondition (trait name) guarding each check
_CHECK_TRAITS = {
    "simple_chain": "always",
    "state_vector_roundtrip": "always",
    "delta_s_difference_le_2": "same_direction",
    "turn_angle_chain": "same_direction",
    "low_delta_never_blocked": "states_in_0_5",
    "head_above_tail_below": "states_in_0_3_line",
    "l3_blocked_is_state1_next_to_state3": "l3_line",
    "blocked_at_most_3n_over_4": "states_in_0_5_line",
}


def check_invariants(
    tm: TurningMachine, max_configs: int = DEFAULT_CAP, max_violations: int = 20
) -> InvariantReport:
    """Evaluate every applicable invariant over the reachable set."""
    traits = _machine_traits(tm)
    names = [n for n, t in _CHECK_TRAITS.items() if traits.get(t, True)]
    parents, _, _, truncated = _search(tm, max_configs, stop_on_blocked=False)
    violations: list[InvariantViolation] = []
    checked = 0
    for states in parents:
        c = reconstruct_positions(tm, states)
        checked += 1
        violations.extend(configuration_violations(c, names))
        if len(violations) >= max_violations:
            break
    return InvariantReport(
        checks_run=tuple(names),
        configurations_checked=checked,
        truncated=truncated,
        violations=tuple(violations[:max_violations]),
    )


# ---------------------------------------------------------------------------
# serialization


def verdict_to_json(v: Verdict) -> str:
    return json.dumps(
        {"verdict": v.kind, "witness": list(v.witness) if v.witness is not None else None}
    )


def verdict_from_json(text: str) -> Verdict:
    doc = json.loads(text)
    w = doc.get("witness")
    return Verdict(doc["verdict"], tuple(w) if w is not None else None)


def reach_report_to_json(r: ReachReport) -> str:
    return json.dumps(
        {
            "reachable_count": r.reachable_count,
            "blocked_configs": [list(s) for s in r.blocked_configs],
            "final_reached": r.final_reached,
            "truncated": r.truncated,
        }
    )
