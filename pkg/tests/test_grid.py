import math

from hypothesis import given
from hypothesis import strategies as st

from turnfold.grid import (
    DISPLACEMENTS,
    direction_between,
    displacement,
    embed,
    rotate_direction,
    step,
    turn_units,
)

directions = st.integers(min_value=0, max_value=5)


def test_displacement_table():
    assert DISPLACEMENTS == ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))
    assert displacement(2) == (-1, 1)  # the w axis runs through (-1, 1)
    assert displacement(0) == (1, 0)
    assert displacement(4) == (0, -1)


def test_rotation_examples():
    assert rotate_direction(0, 2) == 2  # +x anticlockwise 2pi/3 is +w
    assert rotate_direction(1, -2) == 5  # +y clockwise 2pi/3 is -w
    assert rotate_direction(3, 6) == 3  # full turn


def test_opposite_displacements_cancel():
    for d in range(6):
        dx, dy = displacement(d)
        ox, oy = displacement(rotate_direction(d, 3))
        assert (dx + ox, dy + oy) == (0, 0)


def test_displacements_distinct_and_balanced():
    assert len(set(DISPLACEMENTS)) == 6
    assert sum(dx for dx, _ in DISPLACEMENTS) == 0
    assert sum(dy for _, dy in DISPLACEMENTS) == 0


@given(directions, st.integers(-20, 20), st.integers(-20, 20))
def test_rotation_is_group_action(d, a, b):
    assert rotate_direction(rotate_direction(d, a), b) == rotate_direction(d, a + b)


@given(directions)
def test_direction_between_inverts_step(d):
    p = (3, -2)
    assert direction_between(p, step(p, d)) == d


def test_direction_between_rejects_non_neighbors():
    import pytest

    with pytest.raises(ValueError):
        direction_between((0, 0), (2, 0))


@given(directions, directions)
def test_turn_units_signed_small(a, b):
    import pytest

    if (b - a) % 6 == 3:
        with pytest.raises(ValueError):
            turn_units(a, b)
    else:
        t = turn_units(a, b)
        assert -2 <= t <= 2
        assert (a + t) % 6 == b


def test_embedding_is_unit_length():
    for d in range(6):
        ex, ey = embed(displacement(d))
        assert math.isclose(math.hypot(ex, ey), 1.0)
    assert embed((0, 1)) == (0.5, math.sqrt(3) / 2)
