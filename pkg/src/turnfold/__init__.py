"""Turning-chain folding on the triangular grid.

Subpackages: grid (lattice geometry), machine (exact rule semantics),
sim (continuous-time scheduler), explore (reachability and verdicts),
shapes (targets and traversals), compile (geometry to state programs),
cli (command line and SVG rendering).
"""

__version__ = "0.1.0"

from .machine import (  # noqa: F401
    Configuration,
    TurningMachine,
    apply_move,
    applicable_moves,
    classify,
    initial_configuration,
    line_machine,
    line_rotation_machine,
    reconstruct_positions,
)
