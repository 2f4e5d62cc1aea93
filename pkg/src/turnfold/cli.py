"""Command-line surface: simulation, checking, compilation, folding, rendering.

Exit codes: 0 success, 1 the checked machine is unfoldable, 2 usage or
input/output error.  All outputs are deterministic given files, flags and
seeds.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import compile as compilers
from . import explore, shapes, sim
from .grid import embed
from .machine import (
    Configuration,
    MachineError,
    TurningMachine,
    apply_move,
    initial_configuration,
    machine_from_json,
    move_status,
    reconstruct_positions,
)
from .shapes import ShapeError


@dataclass(frozen=True)
class RenderSpec:
    scale: float = 24.0
    show_states: bool = False
    highlight_blocked: bool = True
    frame_stride: int = 1

    def __post_init__(self):
        if self.scale <= 0:
            raise ValueError("scale must be positive")
        if self.frame_stride < 1:
            raise ValueError("frame stride must be >= 1")


_PALETTE = (
    "#ffd92f", "#66c2a5", "#fc8d62", "#8da0cb", "#e78ac3",
    "#a6d854", "#b3b3b3", "#e5c494", "#7570b3", "#1b9e77",
)


def _state_color(s: int) -> str:
    if s == 0:
        return _PALETTE[0]
    return _PALETTE[1 + (abs(s) - 1) % (len(_PALETTE) - 1)]


def render_svg(c: Configuration, spec: RenderSpec = RenderSpec()) -> str:
    """One configuration as a standalone SVG document."""
    return render_frames_svg([c], spec)


def render_frames_svg(configs: list[Configuration], spec: RenderSpec = RenderSpec()) -> str:
    """Several configurations stacked vertically in one SVG document."""
    k = spec.scale
    pts = [embed(p) for c in configs for p in c.positions]
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    pad = 1.0
    x0, x1 = min(xs) - pad, max(xs) + pad
    y0, y1 = min(ys) - pad, max(ys) + pad
    fw = (x1 - x0) * k
    fh = (y1 - y0) * k
    out = []
    height = fh * len(configs)
    out.append(
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'width="{fw:.2f}" height="{height:.2f}" '
        f'viewBox="0 0 {fw:.2f} {height:.2f}">'
    )
    out.append('<rect width="100%" height="100%" fill="white"/>')
    for fi, c in enumerate(configs):
        def at(p):
            ex, ey = embed(p)
            return (ex - x0) * k, fi * fh + (y1 - ey) * k
        blocked = {
            i
            for i in range(c.n)
            if spec.highlight_blocked
            and c.states[i] != 0
            and move_status(c, i).kind == "blocked"
        }
        out.append(f'<g id="frame{fi}">')
        for i in range(c.n - 1):
            ax, ay = at(c.positions[i])
            bx, by = at(c.positions[i + 1])
            stroke = "#d62728" if i in blocked else "#444444"
            width = 3.0 if i in blocked else 2.0
            out.append(
                f'<line x1="{ax:.2f}" y1="{ay:.2f}" x2="{bx:.2f}" y2="{by:.2f}" '
                f'stroke="{stroke}" stroke-width="{width:.2f}"/>'
            )
        r = 0.30 * k
        for i in range(c.n):
            px, py = at(c.positions[i])
            out.append(
                f'<circle cx="{px:.2f}" cy="{py:.2f}" r="{r:.2f}" '
                f'fill="{_state_color(c.states[i])}" stroke="#222222" stroke-width="1.00"/>'
            )
            if spec.show_states:
                out.append(
                    f'<text x="{px:.2f}" y="{py + 0.12 * k:.2f}" font-size="{0.36 * k:.2f}" '
                    f'text-anchor="middle" font-family="monospace">{c.states[i]}</text>'
                )
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# command implementations


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as f:
        return f.read()


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)


def _load_machine(path: str) -> TurningMachine:
    return machine_from_json(_read(path))


def _cmd_simulate(args) -> int:
    tm = _load_machine(args.machine)
    if args.trials == 1:
        log = sim.sample_trajectory(tm, args.seed)
        if args.jsonl:
            _write(args.jsonl, sim.events_to_jsonl(log.events))
        print(
            json.dumps(
                {
                    "outcome": log.outcome,
                    "total_time": log.total_time,
                    "steps": log.step_count,
                    "seed": log.seed,
                }
            )
        )
        return 0
    stats = sim.trial_stats(tm, args.trials, args.seed)
    print(
        json.dumps(
            {
                "trials": stats.trials,
                "mean_time": stats.mean_time,
                "std_time": stats.std_time,
                "blocked_fraction": stats.blocked_fraction,
                "mean_steps": stats.mean_steps,
            }
        )
    )
    return 0


def _cmd_check(args) -> int:
    tm = _load_machine(args.machine)
    verdict = explore.decide_folds(tm, args.cap)
    print(explore.verdict_to_json(verdict))
    return 1 if verdict.kind == "unfoldable" else 0


def _cmd_shape(args) -> int:
    if args.kind == "square":
        s = shapes.square(args.param)
    elif args.kind == "cross":
        s = shapes.cross(args.param)
    else:
        s = shapes.spiral(args.param)
    _write(args.output, shapes.shape_to_json(s) + "\n")
    return 0


def _cmd_compile(args) -> int:
    if args.kind == "zigzag":
        p = shapes.path_from_json(_read(args.path))
        sp = compilers.zigzag_states(p)
    elif args.kind == "path":
        p = shapes.path_from_json(_read(args.path))
        sp = compilers.states_from_path(p, args.anchor, args.terminal)
    elif args.kind == "spiral":
        sp = compilers.spiral_states(args.k, args.t0, args.spiral_dir)
    else:  # scaled
        s = shapes.shape_from_json(_read(args.shape))
        sep = shapes.yw_separator(s)
        if sep is None:
            print("shape has no yw-separator", file=sys.stderr)
            return 2
        part = shapes.scaled_partition(s, sep)
        sp = compilers.scaled_fold_states(part)
    _write(args.output, compilers.program_to_json(sp) + "\n")
    return 0


def _fold_pipeline(s: shapes.Shape, scale2: bool):
    """(program, target path, target shape) for a shape-folding run."""
    if scale2:
        sep = shapes.yw_separator(s)
        if sep is None:
            raise ShapeError("shape has no yw-separator")
        part = shapes.scaled_partition(s, sep)
        trav = shapes.scaled_traversal(part)
        sp = compilers.scaled_fold_states(part)
        target_shape = shapes.scale(s, 2)
    else:
        trav = shapes.monotone_traversal(s)
        sp = compilers.zigzag_states(trav)
        target_shape = s
    shift = (-trav.points[0][0], -trav.points[0][1])
    return sp, trav.translate(shift), target_shape.translate(shift)


def _cmd_fold(args) -> int:
    s = shapes.shape_from_json(_read(args.shape))
    sp, target_path, target_shape = _fold_pipeline(s, args.scale2)
    tm = sp.machine()
    verdict = explore.decide_folds(tm, args.cap)
    _, _, outcomes = sim.run_raw_trials(tm, args.trials, args.seed)
    blocked = int((outcomes != 0).sum())
    # all completed trajectories share one geometry: the all-zero vector
    final = reconstruct_positions(tm, (0,) * tm.n)
    assert final.positions == target_path.points
    report = {
        "verdict": verdict.kind,
        "monomers": tm.n,
        "sampled_trials": args.trials,
        "sampled_blocked": blocked,
        "max_error": shapes.folding_error(target_shape, final),
        "perimeter_length": shapes.analyze(target_shape).perimeter_length,
    }
    print(json.dumps(report))
    return 1 if verdict.kind == "unfoldable" or blocked else 0


def _cmd_timing(args) -> int:
    sizes = [int(x) for x in args.sizes.split(",") if x]
    result = sim.scaling_experiment(args.s, sizes, args.trials, args.seed)
    _write(args.output, sim.scaling_csv(result))
    if result.slope is not None:
        print(
            json.dumps(
                {
                    "fit_intercept": result.intercept,
                    "fit_slope": result.slope,
                    "r_squared": result.r_squared,
                }
            ),
            file=sys.stderr,
        )
    return 0


def _cmd_render(args) -> int:
    tm = _load_machine(args.machine)
    spec = RenderSpec(
        scale=args.scale,
        show_states=args.show_states,
        highlight_blocked=args.highlight_blocked,
        frame_stride=args.frame_stride,
    )
    frames = [initial_configuration(tm)]
    if args.trajectory:
        events = sim.events_from_jsonl(_read(args.trajectory))
        c = frames[0]
        for t, (_, i, _) in enumerate(events):
            c = apply_move(c, i)
            if (t + 1) % spec.frame_stride == 0:
                frames.append(c)
        if frames[-1] is not c:
            frames.append(c)
    _write(args.output, render_frames_svg(frames, spec))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="turnfold")
    sub = p.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("simulate", help="sample trajectories of a machine file")
    ps.add_argument("machine")
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--trials", type=int, default=1)
    ps.add_argument("--jsonl", help="write the trajectory events (single trial)")
    ps.set_defaults(fn=_cmd_simulate)

    pc = sub.add_parser("check", help="decide foldability by exhaustive search")
    pc.add_argument("machine")
    pc.add_argument("--cap", type=int, default=explore.DEFAULT_CAP)
    pc.set_defaults(fn=_cmd_check)

    pg = sub.add_parser("shape", help="shape file generators")
    gsub = pg.add_subparsers(dest="shape_command", required=True)
    pgen = gsub.add_parser("gen")
    pgen.add_argument("kind", choices=["square", "cross", "spiral"])
    pgen.add_argument("param", type=int)
    pgen.add_argument("-o", "--output", default=None)
    pgen.set_defaults(fn=_cmd_shape)

    pk = sub.add_parser("compile", help="state programs from target geometry")
    pk.add_argument("kind", choices=["zigzag", "spiral", "scaled", "path"])
    pk.add_argument("--path", help="path JSON file (zigzag, path)")
    pk.add_argument("--shape", help="shape JSON file (scaled)")
    pk.add_argument("--k", type=int, default=1, help="spiral turns")
    pk.add_argument("--t0", type=int, default=0, help="spiral anchor state")
    pk.add_argument(
        "--spiral-dir", choices=["in_to_out", "out_to_in"], default="in_to_out"
    )
    pk.add_argument("--anchor", type=int, default=0)
    pk.add_argument("--terminal", choices=["zero", "repeat"], default="zero")
    pk.add_argument("-o", "--output", default=None)
    pk.set_defaults(fn=_cmd_compile)

    pf = sub.add_parser("fold", help="compile, decide and simulate a shape fold")
    pf.add_argument("shape")
    pf.add_argument("--scale2", action="store_true")
    pf.add_argument("--seed", type=int, default=0)
    pf.add_argument("--trials", type=int, default=200)
    pf.add_argument("--cap", type=int, default=200_000)
    pf.set_defaults(fn=_cmd_fold)

    pt = sub.add_parser("timing", help="scaling experiment over line rotators")
    pt.add_argument("--s", type=int, required=True)
    pt.add_argument("--sizes", required=True, help="comma-separated n values")
    pt.add_argument("--trials", type=int, default=200)
    pt.add_argument("--seed", type=int, default=0)
    pt.add_argument("-o", "--output", default=None)
    pt.set_defaults(fn=_cmd_timing)

    pr = sub.add_parser("render", help="SVG snapshot(s) of a machine")
    pr.add_argument("machine")
    pr.add_argument("-o", "--output", required=True)
    pr.add_argument("--trajectory", help="JSONL event file to replay into frames")
    pr.add_argument("--scale", type=float, default=24.0)
    pr.add_argument("--show-states", action="store_true")
    pr.add_argument("--no-highlight-blocked", dest="highlight_blocked", action="store_false")
    pr.add_argument("--frame-stride", type=int, default=1)
    pr.set_defaults(fn=_cmd_render)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code else 0
    try:
        return args.fn(args)
    except (OSError, json.JSONDecodeError, MachineError, ShapeError, compilers.CompileError,
            ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
