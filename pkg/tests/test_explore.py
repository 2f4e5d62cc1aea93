import json

import pytest

from turnfold.explore import (
    ReplayError,
    check_invariants,
    configuration_violations,
    decide_folds,
    reach_report_to_json,
    reachable,
    replay,
    verdict_from_json,
    verdict_to_json,
)
from turnfold.machine import (
    Configuration,
    PERMANENTLY_BLOCKED,
    classify,
    line_machine,
    line_rotation_machine,
    reconstruct_positions,
)

SHOWCASE_BLOCKED = (6, 4, 3, 2, 1, 0, 0)


def test_reachable_small_line():
    r = reachable(line_rotation_machine(1, 3))
    # 110 -> {010, 100} -> 000
    assert r.reachable_count == 4
    assert r.blocked_configs == ()
    assert r.final_reached
    assert not r.truncated


def test_reachable_l67_contains_showcase_blocked_state():
    r = reachable(line_rotation_machine(6, 7))
    assert SHOWCASE_BLOCKED in r.blocked_configs
    assert r.final_reached  # the target is reachable on some trajectories
    c = reconstruct_positions(line_rotation_machine(6, 7), SHOWCASE_BLOCKED)
    assert classify(c) == PERMANENTLY_BLOCKED


def test_blocked_configs_all_classify_blocked():
    tm = line_rotation_machine(6, 7)
    r = reachable(tm)
    assert r.blocked_configs
    for states in r.blocked_configs:
        c = reconstruct_positions(tm, states)
        assert classify(c) == PERMANENTLY_BLOCKED


def test_folds_verdict_is_sound_under_sampling():
    # a positive verdict means every trajectory completes; ten thousand
    # sampled trajectories agree
    from turnfold.sim import run_raw_trials

    tm = line_rotation_machine(4, 7)
    assert decide_folds(tm).kind == "folds"
    _, _, outcomes = run_raw_trials(tm, 10_000, 123)
    assert int((outcomes != 0).sum()) == 0


def test_reachable_l54_clean():
    r = reachable(line_rotation_machine(5, 4))
    assert r.blocked_configs == ()
    assert r.final_reached


def test_reachable_cap_truncates():
    r = reachable(line_rotation_machine(3, 8), cap=10)
    assert r.truncated
    assert r.reachable_count == 10
    with pytest.raises(ValueError):
        reachable(line_rotation_machine(1, 2), cap=0)


def test_decide_folds_examples():
    assert decide_folds(line_rotation_machine(4, 6)).kind == "folds"
    assert decide_folds(line_machine([0])).kind == "folds"
    v = decide_folds(line_rotation_machine(6, 7))
    assert v.kind == "unfoldable"
    final = replay(line_rotation_machine(6, 7), v.witness)
    assert classify(final) == PERMANENTLY_BLOCKED
    assert decide_folds(line_rotation_machine(3, 8), cap=10).kind == "inconclusive"


def test_witness_is_canonical():
    a = decide_folds(line_rotation_machine(6, 7)).witness
    b = decide_folds(line_rotation_machine(6, 7)).witness
    assert a == b
    # shortest possible: the blocked state's move count equals its depth
    final = replay(line_rotation_machine(6, 7), a)
    depth = sum(6 - s for s in final.states[:-1])
    assert len(a) == depth


def test_full_turn_threshold_is_sharp():
    # a full-turn rotator folds up to six monomers and jams from seven on
    for n in range(2, 7):
        assert decide_folds(line_rotation_machine(6, n)).kind == "folds"
    assert decide_folds(line_rotation_machine(6, 7)).kind == "unfoldable"


def _bruteforce_first_witness(tm, max_depth=8):
    """Lexicographically least shortest move sequence reaching a jam."""
    from turnfold.machine import applicable_moves, apply_move, initial_configuration

    frontier = [((), initial_configuration(tm))]
    for _ in range(max_depth + 1):
        nxt = []
        for seq, c in frontier:  # already in length-then-lex order
            if classify(c) == PERMANENTLY_BLOCKED:
                return seq
            for i in applicable_moves(c):
                nxt.append((seq + (i,), apply_move(c, i)))
        frontier = nxt
    return None


def test_witness_matches_bruteforce_on_small_machines():
    # a lone state-6 monomer with pinned neighbours jams after two turns:
    # its head lands on the tail at the half-turn mark
    for states in [(0, 6, 0), (0, -6, 0), (0, 6, 6, 0), (5, 6, 0, 6, 0)]:
        tm = line_machine(states)
        expected = _bruteforce_first_witness(tm)
        v = decide_folds(tm)
        if expected is None:
            assert v.kind == "folds"
        else:
            assert v.kind == "unfoldable"
            assert v.witness == expected
    assert decide_folds(line_machine([0, 6, 0])).witness == (1, 1)


def test_replay_examples():
    tm = line_rotation_machine(1, 3)
    assert replay(tm, [0, 1]).states == (0, 0, 0)
    with pytest.raises(ReplayError) as e:
        replay(tm, [2])
    assert e.value.step == 0
    assert e.value.status.kind == "zero_state"
    with pytest.raises(ReplayError) as e:
        replay(tm, [0, 0])
    assert e.value.step == 1


def test_sum_abs_states_decreases_by_one_per_replayed_step():
    tm = line_rotation_machine(3, 5)
    v = decide_folds(tm)
    assert v.kind == "folds"
    c = Configuration(tm, tm.states, tm.path)
    total = sum(abs(s) for s in c.states)
    from turnfold.machine import applicable_moves, apply_move

    steps = 0
    while applicable_moves(c):
        c = apply_move(c, applicable_moves(c)[0])
        steps += 1
        assert sum(abs(s) for s in c.states) == total - steps


def test_check_invariants_l36_and_l55():
    for tm in (line_rotation_machine(3, 6), line_rotation_machine(5, 5)):
        report = check_invariants(tm)
        assert report.passed, report.violations[:3]
        assert not report.truncated
        assert report.configurations_checked == reachable(tm).reachable_count
    r36 = check_invariants(line_rotation_machine(3, 6))
    assert "l3_blocked_is_state1_next_to_state3" in r36.checks_run
    assert "head_above_tail_below" in r36.checks_run
    r55 = check_invariants(line_rotation_machine(5, 5))
    assert "head_above_tail_below" not in r55.checks_run  # states exceed 3
    assert "low_delta_never_blocked" in r55.checks_run


def test_invariant_gates_respect_machine_class():
    # a bent initial path with small states: the line-only facts must not
    # be asserted, while the shared-direction ones still do not apply
    from turnfold.machine import TurningMachine

    bent = TurningMachine((1, 2, 0), ((0, 0), (0, 1), (1, 1)))
    rep = check_invariants(bent)
    assert rep.passed
    assert "head_above_tail_below" not in rep.checks_run
    assert "delta_s_difference_le_2" not in rep.checks_run
    assert "simple_chain" in rep.checks_run


def test_injected_violation_is_reported():
    # positions inconsistent with the claimed states: the roundtrip and
    # turn-angle checks must both flag this fabricated configuration
    tm = line_rotation_machine(1, 3)
    fake = Configuration(tm, (1, 1, 0), ((0, 0), (0, 1), (1, 1)))
    names = {v.invariant for v in configuration_violations(fake)}
    assert "state_vector_roundtrip" in names
    assert "turn_angle_chain" in names
    # and an honest configuration reports nothing
    ok = reconstruct_positions(tm, (0, 1, 0))
    assert configuration_violations(ok) == []


def test_check_invariants_truncation_flag():
    report = check_invariants(line_rotation_machine(3, 7), max_configs=5)
    assert report.truncated
    assert report.configurations_checked == 5


def test_zigzag_targets_reachable_by_three_passes_of_the_pi_rotator():
    # scripted reachability: sweep left-to-right turning every monomer with
    # a positive target once, back right-to-left for targets above 1, and
    # left-to-right again for targets above 2; the pi-rotator then traces
    # the zig-zag path whose turning numbers are those targets
    from turnfold import compile as tc
    from turnfold.shapes import monotone_traversal, square

    trav = monotone_traversal(square(4))
    target_states = tc.zigzag_states(trav).states
    n = len(target_states)
    tm = line_rotation_machine(3, n)
    script = []
    script += [i for i in range(n) if target_states[i] > 0]
    script += [i for i in reversed(range(n)) if target_states[i] > 1]
    script += [i for i in range(n) if target_states[i] > 2]
    c = replay(tm, script)  # raises if any scripted move is blocked
    assert c.states == tuple(3 - s for s in target_states[:-1]) + (0,)
    assert c.positions == trav.points


def test_invariant_suite_on_a_zigzag_machine():
    # non-uniform initial states within [0, 3] on an east line: the head
    # and tail line-side checks and the turn-angle identity all apply
    from turnfold import compile as tc
    from turnfold.shapes import monotone_traversal, square

    tm = line_machine(tc.zigzag_states(monotone_traversal(square(3))).states)
    rep = check_invariants(tm)
    assert rep.passed
    assert "head_above_tail_below" in rep.checks_run


def test_verdict_json_roundtrip():
    v = decide_folds(line_rotation_machine(6, 7))
    assert verdict_from_json(verdict_to_json(v)) == v
    v2 = decide_folds(line_rotation_machine(2, 4))
    assert verdict_from_json(verdict_to_json(v2)) == v2
    doc = json.loads(reach_report_to_json(reachable(line_rotation_machine(6, 7))))
    assert list(SHOWCASE_BLOCKED) in doc["blocked_configs"]
