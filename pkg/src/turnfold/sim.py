"""Continuous-time Markov chain scheduler for Turning Machines.

Every applicable rule fires at rate 1: a configuration with k applicable
moves holds for an Exp(k) time and then applies one of them uniformly at
random.  The compiled sampler (see _kernels) realizes this law exactly by
thinning, so trajectories are bit-reproducible for a given 64-bit seed.

Seed splitting is frozen as follows: trial i of a batch uses the i-th
64-bit word of ``numpy.random.SeedSequence(master_seed).generate_state``;
a scaling experiment derives the per-size master from
``SeedSequence((master_seed, n))``.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .machine import FINAL, PERMANENTLY_BLOCKED, TurningMachine, line_rotation_machine

Event = tuple[float, int, int]  # (time, monomer, state after the move)


@dataclass(frozen=True)
class TrajectoryLog:
    events: tuple[Event, ...]
    outcome: str
    total_time: float
    step_count: int
    seed: int


@dataclass(frozen=True)
class TrialStats:
    trials: int
    mean_time: float
    std_time: float
    blocked_fraction: float
    mean_steps: float


@dataclass(frozen=True)
class ScalingRow:
    n: int
    trials: int
    mean_time: float
    std_time: float
    blocked_fraction: float
    mean_steps: float


@dataclass(frozen=True)
class ScalingResult:
    rows: tuple[ScalingRow, ...]
    intercept: float | None  # a in  mean_time ~ a + b ln n
    slope: float | None
    r_squared: float | None


def machine_arrays(tm: TurningMachine) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    st = np.array(tm.states, dtype=np.int64)
    px = np.array([p[0] for p in tm.path], dtype=np.int64)
    py = np.array([p[1] for p in tm.path], dtype=np.int64)
    return st, px, py


def trial_seeds(master_seed: int, trials: int) -> np.ndarray:
    return np.random.SeedSequence(master_seed).generate_state(trials, np.uint64)


def sample_trajectory(tm: TurningMachine, seed: int) -> TrajectoryLog:
    """One trajectory from the initial configuration under the given seed."""
    st, px, py = machine_arrays(tm)
    cap = int(np.abs(st).sum())
    moves = np.empty(cap, np.int64)
    times = np.empty(cap, np.float64)
    safter = np.empty(cap, np.int64)
    code, total, steps = _kernels.run_logged(st, px, py, np.uint64(seed), moves, times, safter)
    events = tuple(
        (float(times[i]), int(moves[i]), int(safter[i])) for i in range(steps)
    )
    outcome = FINAL if code == _kernels.OUTCOME_FINAL else PERMANENTLY_BLOCKED
    return TrajectoryLog(events, outcome, float(total), int(steps), seed)


def sample_moves(tm: TurningMachine, seed: int) -> tuple[str, np.ndarray]:
    """(outcome, applied move indices) of one trajectory; no event times."""
    st, px, py = machine_arrays(tm)
    cap = int(np.abs(st).sum())
    moves = np.empty(cap, np.int64)
    times = np.empty(cap, np.float64)
    safter = np.empty(cap, np.int64)
    code, _, steps = _kernels.run_logged(st, px, py, np.uint64(seed), moves, times, safter)
    outcome = FINAL if code == _kernels.OUTCOME_FINAL else PERMANENTLY_BLOCKED
    return outcome, moves[:steps]


def _worker_count() -> int:
    raw = os.environ.get("TURNFOLD_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def run_raw_trials(
    tm: TurningMachine, trials: int, seed: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(times, steps, outcome codes) for independent trials, in trial order.

    Trials split across TURNFOLD_THREADS workers when set; results are
    identical regardless of the thread count since every trial owns its
    stream and writes its own slot.
    """
    st, px, py = machine_arrays(tm)
    seeds = trial_seeds(seed, trials)
    out_t = np.empty(trials, np.float64)
    out_s = np.empty(trials, np.int64)
    out_o = np.empty(trials, np.int64)
    workers = min(_worker_count(), trials) or 1
    if workers == 1:
        _kernels.run_trials(st, px, py, seeds, out_t, out_s, out_o)
    else:
        bounds = np.linspace(0, trials, workers + 1).astype(int)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(
                    _kernels.run_trials,
                    st,
                    px,
                    py,
                    seeds[a:b],
                    out_t[a:b],
                    out_s[a:b],
                    out_o[a:b],
                )
                for a, b in zip(bounds, bounds[1:])
                if b > a
            ]
            for f in futures:
                f.result()
    return out_t, out_s, out_o


def trial_stats(tm: TurningMachine, trials: int, seed: int) -> TrialStats:
    """Aggregate independent trajectories (compensated, order-independent sums)."""
    if trials < 1:
        raise ValueError("need at least one trial")
    times, steps, outcomes = run_raw_trials(tm, trials, seed)
    mean = math.fsum(times) / trials
    if trials > 1:
        var = math.fsum((t - mean) ** 2 for t in times) / (trials - 1)
    else:
        var = 0.0
    blocked = int(np.count_nonzero(outcomes == _kernels.OUTCOME_BLOCKED))
    return TrialStats(
        trials=trials,
        mean_time=mean,
        std_time=math.sqrt(var),
        blocked_fraction=blocked / trials,
        mean_steps=math.fsum(steps) / trials,
    )


def scaling_experiment(
    s: int, sizes: list[int], trials: int, seed: int
) -> ScalingResult:
    """Mean completion times of line rotators across sizes, with a log fit."""
    if list(sizes) != sorted(sizes):
        raise ValueError("sizes must be ascending")
    rows = []
    for n in sizes:
        sub_seed = int(np.random.SeedSequence((seed, n)).generate_state(1, np.uint64)[0])
        st = trial_stats(line_rotation_machine(s, n), trials, sub_seed)
        rows.append(
            ScalingRow(n, trials, st.mean_time, st.std_time, st.blocked_fraction, st.mean_steps)
        )
    if len(rows) >= 2:
        x = np.log([r.n for r in rows])
        y = np.array([r.mean_time for r in rows])
        slope, intercept = np.polyfit(x, y, 1)
        resid = y - (intercept + slope * x)
        ss_tot = float(np.sum((y - y.mean()) ** 2))
        r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
        return ScalingResult(tuple(rows), float(intercept), float(slope), r2)
    return ScalingResult(tuple(rows), None, None, None)


def fence_check(
    tm: TurningMachine,
    moves,
    anchor: int,
    anchor_target: tuple[int, int],
    fence_bottom_y: int,
    fence_columns,
) -> int:
    """Replay logged moves, checking monomers >= anchor stay east of a fence.

    The fence lists, per row from ``fence_bottom_y`` upward, the leftmost
    allowed column, extended to infinity along y at both ends; positions
    are taken in the frame pinning monomer ``anchor`` to ``anchor_target``.
    Returns the number of moves applied when the first violation appears,
    or -1 if none does.
    """
    st, px, py = machine_arrays(tm)
    mv = np.asarray(list(moves), dtype=np.int64)
    fx = np.asarray(list(fence_columns), dtype=np.int64)
    return int(
        _kernels.replay_fence(
            st,
            px,
            py,
            mv,
            anchor,
            anchor_target[0],
            anchor_target[1],
            fence_bottom_y,
            fx,
        )
    )


CSV_HEADER = "n,trials,mean_time,std_time,blocked_fraction,mean_steps"


def scaling_csv(result: ScalingResult) -> str:
    lines = [CSV_HEADER]
    for r in result.rows:
        lines.append(
            f"{r.n},{r.trials},{r.mean_time!r},{r.std_time!r},"
            f"{r.blocked_fraction!r},{r.mean_steps!r}"
        )
    return "\n".join(lines) + "\n"


def events_to_jsonl(events: tuple[Event, ...]) -> str:
    return "".join(
        json.dumps({"t": t, "i": i, "s": s}) + "\n" for t, i, s in events
    )


def events_from_jsonl(text: str) -> tuple[Event, ...]:
    out = []
    for line in text.splitlines():
        if not line.strip():
            continue
        doc = json.loads(line)
        out.append((float(doc["t"]), int(doc["i"]), int(doc["s"])))
    return tuple(out)
