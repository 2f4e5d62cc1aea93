"""Shapes on the triangular grid and the traversals used to fold them.

Provides the benchmark generators (squares, crosses, 1-gap spirals,
factor-k scaling), connectivity/monotonicity/perimeter analysis, the
row-by-row zig-zag traversal of y-monotone shapes, and the factor-2
partition of a shape along a yw-separator together with its Hamiltonian
traversal.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .grid import Point, direction_between, neighbors
from .machine import Configuration


class ShapeError(ValueError):
    """Invalid shape, path or partition input."""


class NotYMonotoneError(ShapeError):
    pass


class TraversalJoinError(ShapeError):
    def __init__(self, row_index: int):
        super().__init__(f"rows {row_index} and {row_index + 1} admit no unit join")
        self.row_index = row_index


def _connected(points: frozenset[Point], steps: Sequence[Point]) -> bool:
    if not points:
        return False
    start = next(iter(points))
    seen = {start}
    queue = deque([start])
    while queue:
        x, y = queue.popleft()
        for dx, dy in steps:
            q = (x + dx, y + dy)
            if q in points and q not in seen:
                seen.add(q)
                queue.append(q)
    return len(seen) == len(points)


_SIX = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))
_FOUR = ((1, 0), (0, 1), (-1, 0), (0, -1))


@dataclass(frozen=True)
class Shape:
    """A finite connected set of grid points."""

    points: frozenset[Point]

    def __post_init__(self):
        if not self.points:
            raise ShapeError("shape must be non-empty")
        if not _connected(self.points, _SIX):
            raise ShapeError("shape must induce a connected grid graph")

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, p: Point) -> bool:
        return p in self.points

    def translate(self, d: Point) -> "Shape":
        return Shape(frozenset((x + d[0], y + d[1]) for x, y in self.points))


def shape_of(points: Iterable[Sequence[int]]) -> Shape:
    return Shape(frozenset((int(x), int(y)) for x, y in points))


@dataclass(frozen=True)
class Path:
    """A simple directed lattice path of unit steps."""

    points: tuple[Point, ...]

    def __post_init__(self):
        if not self.points:
            raise ShapeError("path must be non-empty")
        for a, b in zip(self.points, self.points[1:]):
            direction_between(a, b)
        if len(set(self.points)) != len(self.points):
            raise ShapeError("path must be simple")

    def __len__(self) -> int:
        return len(self.points)

    @property
    def directions(self) -> tuple[int, ...]:
        return tuple(direction_between(a, b) for a, b in zip(self.points, self.points[1:]))

    def translate(self, d: Point) -> "Path":
        return Path(tuple((x + d[0], y + d[1]) for x, y in self.points))

    def to_origin(self) -> "Path":
        x0, y0 = self.points[0]
        return self.translate((-x0, -y0))


@dataclass(frozen=True)
class YwChain:
    """An ascending chain whose steps are +y or +w (one point per row)."""

    points: tuple[Point, ...]

    def __post_init__(self):
        if not self.points:
            raise ShapeError("chain must be non-empty")
        for (ax, ay), (bx, by) in zip(self.points, self.points[1:]):
            if by - ay != 1 or bx - ax not in (0, -1):
                raise ShapeError(f"({ax},{ay}) -> ({bx},{by}) is not a +y/+w step")


def zigzag_sign(p: Path) -> int | None:
    """+1 for a positive zig-zag path, -1 for a negative one, None otherwise.

    A path using only +-x steps qualifies as both; it is reported as +1.
    The first step outside both alphabets makes the path non-zig-zag.
    """
    dirs = set(p.directions)
    if dirs <= {0, 3, 1, 2}:
        return 1
    if dirs <= {0, 3, 4, 5}:
        return -1
    return None


# ---------------------------------------------------------------------------
# generators


def square(n: int) -> Shape:
    """The n x n square {(x, y) : 0 <= x, y < n}."""
    if n < 1:
        raise ShapeError("square size must be >= 1")
    return Shape(frozenset((x, y) for x in range(n) for y in range(n)))


def cross(arm_len: int) -> Shape:
    """Plus sign of width-1 arms of the given length around the origin."""
    if arm_len < 2:
        raise ShapeError("cross arms must have length >= 2")
    pts = {(i, 0) for i in range(-arm_len, arm_len + 1)}
    pts |= {(0, j) for j in range(-arm_len, arm_len + 1)}
    return Shape(frozenset(pts))


def spiral(k: int) -> Shape:
    """The k-turn 1-gap spiral: nested almost-rectangles around the origin.

    Ring k' contributes the rows y = +-2k' for -2k' <= x <= 2k'-1, the
    columns x in {-2k', 2k'-1} for -2k' <= y <= 2k', three extra points
    (2k'-2, -2k'+2), (2k', -2k'), (2k'+1, -2k'), minus (2k'-1, -2k'+1).
    """
    if k < 1:
        raise ShapeError("spiral needs at least one turn")
    pts: set[Point] = set()
    for t in range(1, k + 1):
        ring: set[Point] = set()
        for x in range(-2 * t, 2 * t):
            ring.add((x, 2 * t))
            ring.add((x, -2 * t))
        for y in range(-2 * t, 2 * t + 1):
            ring.add((-2 * t, y))
            ring.add((2 * t - 1, y))
        ring |= {(2 * t - 2, -2 * t + 2), (2 * t, -2 * t), (2 * t + 1, -2 * t)}
        ring.discard((2 * t - 1, -2 * t + 1))
        pts |= ring
    return Shape(frozenset(pts))


def spiral_start_points(k: int) -> tuple[Point, Point]:
    """The inside and outside degree-1 start points of the k-turn spiral."""
    return (0, 0), (2 * k + 1, -2 * k)


def scale(s: Shape, k: int) -> Shape:
    """Replace every point by a k x k block."""
    if k < 1:
        raise ShapeError("scale factor must be >= 1")
    return Shape(
        frozenset(
            (k * x + a, k * y + b)
            for x, y in s.points
            for a in range(k)
            for b in range(k)
        )
    )


# ---------------------------------------------------------------------------
# analysis


@dataclass(frozen=True)
class ShapeAnalysis:
    connected: bool
    y_monotone: bool
    xy_connected: bool
    perimeter_points: frozenset[Point]
    perimeter_length: int
    perimeter_length_xy: int  # same count under 4-neighbour adjacency


def row_segments(points: frozenset[Point]) -> dict[int, tuple[int, int]] | None:
    """Per-row (xmin, xmax), or None if some row is not one contiguous segment."""
    rows: dict[int, list[int]] = {}
    for x, y in points:
        rows.setdefault(y, []).append(x)
    segs = {}
    for y, xs in rows.items():
        lo, hi = min(xs), max(xs)
        if hi - lo + 1 != len(xs):
            return None
        segs[y] = (lo, hi)
    return segs


def analyze(s: Shape) -> ShapeAnalysis:
    pts = s.points
    segs = row_segments(pts)
    perim = frozenset(
        p for p in pts if any(q not in pts for q in neighbors(p))
    )
    perim_xy = sum(
        1
        for (x, y) in pts
        if any((x + dx, y + dy) not in pts for dx, dy in _FOUR)
    )
    return ShapeAnalysis(
        connected=True,  # enforced by the Shape invariant
        y_monotone=segs is not None,
        xy_connected=_connected(pts, _FOUR),
        perimeter_points=perim,
        perimeter_length=len(perim),
        perimeter_length_xy=perim_xy,
    )


def folding_error(s: Shape, c: Configuration) -> int:
    """Size of the symmetric difference between the chain and the shape."""
    return len(set(c.positions) ^ s.points)


# ---------------------------------------------------------------------------
# y-monotone zig-zag traversal


def monotone_traversal(s: Shape) -> Path:
    """Row-by-row traversal of a y-monotone shape.

    Rows are indexed from the bottom; even rows run left to right, odd rows
    right to left.  A row is extended beyond the shape exactly where the
    neighbouring rows demand it, so that consecutive rows join by one +y
    step: even row i gains the points right of it lying under row i+1 and
    left of it lying over row i-1; odd rows mirror this.  Every added point
    is adjacent to a perimeter point of the shape.
    """
    segs = row_segments(s.points)
    if segs is None:
        raise NotYMonotoneError("shape rows are not contiguous segments")
    ys = sorted(segs)
    if ys != list(range(ys[0], ys[0] + len(ys))):
        raise ShapeError("connected shape must span contiguous rows")
    h = len(ys)
    ext: list[tuple[int, int]] = []
    for i, y in enumerate(ys):
        lo, hi = segs[y]
        if i % 2 == 0:
            if i + 1 < h:
                hi = max(hi, segs[ys[i + 1]][1])
            if i - 1 >= 0:
                lo = min(lo, segs[ys[i - 1]][0])
        else:
            if i + 1 < h:
                lo = min(lo, segs[ys[i + 1]][0])
            if i - 1 >= 0:
                hi = max(hi, segs[ys[i - 1]][1])
        ext.append((lo, hi))
    for i in range(h - 1):
        # even rows end at their right edge, odd rows at their left edge
        end = ext[i][1] if i % 2 == 0 else ext[i][0]
        start = ext[i + 1][1] if i % 2 == 0 else ext[i + 1][0]
        if end != start:
            raise TraversalJoinError(i)
    pts: list[Point] = []
    for i, y in enumerate(ys):
        lo, hi = ext[i]
        xs = range(lo, hi + 1) if i % 2 == 0 else range(hi, lo - 1, -1)
        pts.extend((x, y) for x in xs)
    return Path(tuple(pts))


# ---------------------------------------------------------------------------
# yw-separators and factor-2 partition


def yw_separator(s: Shape) -> YwChain | None:
    """Some yw-chain inside the shape spanning bottom row to top row.

    Deterministic search: dynamic programme for top-reachability, then a
    leftmost-first greedy walk (prefer the +w step, which moves left).
    Returns None when no separator exists.
    """
    segs = row_segments(s.points)
    if segs is None:
        raise NotYMonotoneError("yw-separator is defined for y-monotone shapes")
    ys = sorted(segs)
    reach: set[Point] = {(x, ys[-1]) for x in range(segs[ys[-1]][0], segs[ys[-1]][1] + 1)}
    for y in reversed(ys[:-1]):
        lo, hi = segs[y]
        for x in range(lo, hi + 1):
            if (x, y + 1) in reach or (x - 1, y + 1) in reach:
                reach.add((x, y))
    lo, hi = segs[ys[0]]
    start = next(((x, ys[0]) for x in range(lo, hi + 1) if (x, ys[0]) in reach), None)
    if start is None:
        return None
    chain = [start]
    for y in ys[:-1]:
        x = chain[-1][0]
        nxt = (x - 1, y + 1) if (x - 1, y + 1) in reach else (x, y + 1)
        chain.append(nxt)
    return YwChain(tuple(chain))


@dataclass(frozen=True)
class PartitionResult:
    """Factor-2 split of a shape along a yw-separator.

    ``left_seam`` lists the rightmost point of the left piece in every row
    of the scaled shape, bottom to top; ``right_seam`` the leftmost point
    of the right piece.  In every row the right seam sits one step east of
    the left seam; the cut runs between them and is extended to infinity
    along y past both ends.
    """

    left: Shape
    right: Shape
    left_seam: tuple[Point, ...]
    right_seam: tuple[Point, ...]

    @property
    def seams_are_yw_chains(self) -> bool:
        def ok(seam: tuple[Point, ...]) -> bool:
            return all(
                by - ay == 1 and bx - ax in (0, -1)
                for (ax, ay), (bx, by) in zip(seam, seam[1:])
            )

        return ok(self.left_seam) and ok(self.right_seam)

    def fence_columns(self) -> tuple[int, tuple[int, ...]]:
        """(bottom row y, per-row leftmost right-piece column), bottom to top."""
        return self.right_seam[0][1], tuple(x for x, _ in self.right_seam)


def scaled_partition(s: Shape, sep: YwChain) -> PartitionResult:
    """Split the factor-2 scaling of ``s`` along the scaled separator.

    Case rules for consecutive separator points c_i, c_{i+1} (writing the
    four scaled points of a cell as (0,0), (1,0), (0,1), (1,1) offsets):
    a +y step keeps the cut between columns 2x and 2x+1 in both rows; a +w
    step shifts it left, splitting at 2x-1|2x in the upper row when the
    point west of c_i is in the shape, else at 2x|2x+1 there and one cell
    further left in the lower row (the east neighbour of c_{i+1} is then
    in the shape, keeping both sides non-empty).
    """
    a = analyze(s)
    if not a.y_monotone:
        raise ShapeError("precondition violated: shape is not y-monotone")
    if not a.xy_connected:
        raise ShapeError("precondition violated: shape is not xy-connected")
    segs = row_segments(s.points)
    assert segs is not None
    ys = sorted(segs)
    pts = [(int(x), int(y)) for x, y in sep.points]
    if any(p not in s.points for p in pts):
        raise ShapeError("precondition violated: separator leaves the shape")
    if pts[0][1] != ys[0] or pts[-1][1] != ys[-1]:
        raise ShapeError("precondition violated: separator does not span bottom to top row")

    left_cut: dict[int, int] = {}  # scaled row y -> x of the left seam
    x1, y1 = pts[0]
    left_cut[2 * y1] = 2 * x1
    for (xi, yi), (xj, yj) in zip(pts, pts[1:]):
        upper, lower = 2 * yi + 1, 2 * yj
        if xj == xi:  # step parallel to y
            left_cut[upper] = 2 * xi
            left_cut[lower] = 2 * xj
        elif (xi - 1, yi) in s.points:  # w step, west neighbour present
            left_cut[upper] = 2 * xi - 1
            left_cut[lower] = 2 * xj
        else:  # w step, east neighbour of c_{i+1} present (xy-connectivity)
            left_cut[upper] = 2 * xi
            left_cut[lower] = 2 * xj + 1
    xk, yk = pts[-1]
    left_cut[2 * yk + 1] = 2 * xk

    s2 = scale(s, 2)
    segs2 = row_segments(s2.points)
    assert segs2 is not None
    left_pts: set[Point] = set()
    right_pts: set[Point] = set()
    left_seam: list[Point] = []
    right_seam: list[Point] = []
    for y in sorted(segs2):
        lo, hi = segs2[y]
        c = left_cut[y]
        if not (lo <= c < hi):
            raise ShapeError(f"cut column {c} leaves an empty side in row {y}")
        left_pts.update((x, y) for x in range(lo, c + 1))
        right_pts.update((x, y) for x in range(c + 1, hi + 1))
        left_seam.append((c, y))
        right_seam.append((c + 1, y))
    return PartitionResult(
        left=Shape(frozenset(left_pts)),
        right=Shape(frozenset(right_pts)),
        left_seam=tuple(left_seam),
        right_seam=tuple(right_seam),
    )


def scaled_traversal(p: PartitionResult) -> Path:
    """Hamiltonian traversal of the scaled shape from the partition.

    Descends the left piece in row pairs (out and back from the left seam),
    crosses to the right piece in the bottommost row, then ascends the
    right piece in row pairs (out and back from the right seam).
    """
    lsegs = row_segments(p.left.points)
    rsegs = row_segments(p.right.points)
    assert lsegs is not None and rsegs is not None
    ys = sorted(lsegs)
    pairs = [(ys[i], ys[i + 1]) for i in range(0, len(ys), 2)]
    lcut = {y: x for x, y in p.left_seam}
    rcut = {y: x for x, y in p.right_seam}
    pts: list[Point] = []
    for bottom, top in reversed(pairs):
        # top row: seam point westward to the row's left edge
        pts.extend((x, top) for x in range(lcut[top], lsegs[top][0] - 1, -1))
        # bottom row: left edge eastward back to the seam point
        pts.extend((x, bottom) for x in range(lsegs[bottom][0], lcut[bottom] + 1))
    for bottom, top in pairs:
        pts.extend((x, bottom) for x in range(rcut[bottom], rsegs[bottom][1] + 1))
        pts.extend((x, top) for x in range(rsegs[top][1], rcut[top] - 1, -1))
    path = Path(tuple(pts))
    if set(path.points) != p.left.points | p.right.points:
        raise ShapeError("traversal failed to cover the scaled shape exactly")
    return path


# ---------------------------------------------------------------------------
# serialization


def shape_to_json(s: Shape) -> str:
    pts = sorted(s.points, key=lambda p: (p[1], p[0]))
    return json.dumps({"points": [list(p) for p in pts]})


def shape_from_json(text: str) -> Shape:
    doc = json.loads(text)
    return shape_of(doc["points"])


def path_to_json(p: Path) -> str:
    return json.dumps({"points": [list(q) for q in p.points], "ordered": True})


def path_from_json(text: str) -> Path:
    doc = json.loads(text)
    return Path(tuple((int(x), int(y)) for x, y in doc["points"]))
