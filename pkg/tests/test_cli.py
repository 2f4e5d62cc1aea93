import json

import pytest

from turnfold.cli import RenderSpec, main, render_svg
from turnfold.machine import (
    count_blocked,
    initial_configuration,
    line_rotation_machine,
    machine_to_json,
    reconstruct_positions,
)
from turnfold.shapes import shape_to_json, square


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def l67_file(tmp_path):
    p = tmp_path / "l67.json"
    p.write_text(machine_to_json(line_rotation_machine(6, 7)))
    return str(p)


def test_check_exit_codes(capsys, l67_file, tmp_path):
    code, out, _ = run(capsys, "check", l67_file)
    assert code == 1
    doc = json.loads(out)
    assert doc["verdict"] == "unfoldable"
    assert doc["witness"]
    good = tmp_path / "l34.json"
    good.write_text(machine_to_json(line_rotation_machine(3, 4)))
    code, out, _ = run(capsys, "check", str(good))
    assert code == 0
    assert json.loads(out)["verdict"] == "folds"


def test_simulate_single_and_batch(capsys, tmp_path):
    mfile = tmp_path / "m.json"
    mfile.write_text(machine_to_json(line_rotation_machine(2, 5)))
    jl = tmp_path / "events.jsonl"
    code, out, _ = run(capsys, "simulate", str(mfile), "--seed", "3", "--jsonl", str(jl))
    assert code == 0
    doc = json.loads(out)
    assert doc["outcome"] == "final" and doc["steps"] == 8
    assert len(jl.read_text().strip().splitlines()) == 8
    code, out, _ = run(capsys, "simulate", str(mfile), "--trials", "50", "--seed", "1")
    assert json.loads(out)["trials"] == 50


def test_shape_gen_and_fold(capsys, tmp_path):
    sq = tmp_path / "sq.json"
    code, _, _ = run(capsys, "shape", "gen", "square", "4", "-o", str(sq))
    assert code == 0
    code, out, _ = run(capsys, "fold", str(sq), "--trials", "20", "--cap", "100000")
    assert code == 0
    doc = json.loads(out)
    assert doc["max_error"] == 0
    assert doc["sampled_blocked"] == 0


def test_fold_scale2(capsys, tmp_path):
    sq = tmp_path / "sq2.json"
    sq.write_text(shape_to_json(square(2)))
    code, out, _ = run(capsys, "fold", str(sq), "--scale2", "--trials", "20")
    assert code == 0
    doc = json.loads(out)
    assert doc["verdict"] == "folds"
    assert doc["max_error"] == 0
    assert doc["monomers"] == 16


def test_compile_commands(capsys, tmp_path):
    code, out, _ = run(capsys, "compile", "spiral", "--k", "1", "--t0", "0")
    assert code == 0
    doc = json.loads(out)
    assert doc["provenance"] == "spiral_in_to_out"
    assert len(doc["states"]) == 16
    sq = tmp_path / "sq.json"
    sq.write_text(shape_to_json(square(2)))
    code, out, _ = run(capsys, "compile", "scaled", "--shape", str(sq))
    assert json.loads(out)["provenance"] == "scaled_fold"


def test_timing_csv(capsys):
    code, out, err = run(capsys, "timing", "--s", "1", "--sizes", "8,16", "--trials", "100")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,trials,mean_time,std_time,blocked_fraction,mean_steps"
    assert len(lines) == 3
    fit = json.loads(err)
    assert "r_squared" in fit


def test_usage_and_io_errors(capsys, tmp_path):
    assert main(["check"]) == 2  # missing argument
    assert main(["check", str(tmp_path / "missing.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["check", str(bad)]) == 2
    assert main(["shape", "gen", "square", "0"]) == 2  # domain error


def test_render_deterministic_and_blocked_highlight(capsys, tmp_path):
    mfile = tmp_path / "m.json"
    mfile.write_text(machine_to_json(line_rotation_machine(3, 9)))
    out1 = tmp_path / "a.svg"
    out2 = tmp_path / "b.svg"
    assert main(["render", str(mfile), "-o", str(out1), "--show-states"]) == 0
    assert main(["render", str(mfile), "-o", str(out2), "--show-states"]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    assert b"<svg" in out1.read_bytes()


def test_render_svg_highlights_blocked_bonds():
    tm = line_rotation_machine(3, 9)
    g = reconstruct_positions(tm, (1, 3, 1, 1, 3, 1, 1, 3, 0))
    svg = render_svg(g, RenderSpec(highlight_blocked=True))
    assert svg.count('stroke="#d62728"') == count_blocked(g)
    svg_plain = render_svg(g, RenderSpec(highlight_blocked=False))
    assert 'stroke="#d62728"' not in svg_plain


def test_render_single_monomer():
    tm = line_rotation_machine(5, 1)
    svg = render_svg(initial_configuration(tm))
    assert svg.count("<circle") == 1


def test_render_spec_validation():
    with pytest.raises(ValueError):
        RenderSpec(scale=0)
    with pytest.raises(ValueError):
        RenderSpec(frame_stride=0)


def test_render_trajectory_frames(capsys, tmp_path):
    mfile = tmp_path / "m.json"
    mfile.write_text(machine_to_json(line_rotation_machine(1, 4)))
    jl = tmp_path / "t.jsonl"
    assert main(["simulate", str(mfile), "--seed", "5", "--jsonl", str(jl)]) == 0
    capsys.readouterr()
    out = tmp_path / "frames.svg"
    assert main([
        "render", str(mfile), "--trajectory", str(jl), "-o", str(out),
        "--frame-stride", "1",
    ]) == 0
    text = out.read_text()
    assert text.count('<g id="frame') == 4  # initial + 3 events
