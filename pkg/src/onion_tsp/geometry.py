"""Planar predicates, boundary-inclusive convex hulls and naive onion peeling."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence

LEFT = 1
COLLINEAR = 0
RIGHT = -1

# Shewchuk's ccwerrboundA: covers rounding of the differences and the products.
_CCW_ERRBOUND = 3.3306690738754716e-16


class GeometryError(ValueError):
    pass


@dataclass(frozen=True)
class Point:
    id: int
    x: float
    y: float


@dataclass
class ConvexLayers:
    """Onion peeling of a point set.

    ``layers[k]`` is the counterclockwise cycle of point ids on layer ``k``
    (0 is the outermost); ``depth`` maps every id to its layer index.
    """

    layers: List[List[int]]
    depth: Dict[int, int] = field(default_factory=dict)

    @classmethod
    def from_layers(cls, layers: List[List[int]]) -> "ConvexLayers":
        depth = {pid: k for k, layer in enumerate(layers) for pid in layer}
        return cls(layers=layers, depth=depth)

    def __len__(self) -> int:
        return len(self.layers)

    def sizes(self) -> List[int]:
        return [len(layer) for layer in self.layers]


def orient(ax, ay, bx, by, cx, cy) -> int:
    """Sign of (b - a) x (c - a), exact for every representable input."""
    detleft = (bx - ax) * (cy - ay)
    detright = (by - ay) * (cx - ax)
    det = detleft - detright
    errbound = _CCW_ERRBOUND * (abs(detleft) + abs(detright))
    if det > errbound:
        return LEFT
    if -det > errbound:
        return RIGHT
    # Near zero: redo it in rationals. Floats and ints convert exactly.
    fax, fay = Fraction(ax), Fraction(ay)
    det = (Fraction(bx) - fax) * (Fraction(cy) - fay) - (Fraction(by) - fay) * (Fraction(cx) - fax)
    return (det > 0) - (det < 0)


def orientation(p: Point, q: Point, r: Point) -> int:
    """Return LEFT (+1), RIGHT (-1) or COLLINEAR (0) for the turn p -> q -> r."""
    return orient(p.x, p.y, q.x, q.y, r.x, r.y)


def _check_finite(points: Iterable[Point]) -> None:
    for p in points:
        if not (math.isfinite(p.x) and math.isfinite(p.y)):
            raise GeometryError(f"non-finite coordinate for point {p.id}")


def _hull_of_sorted(pts: Sequence[Point]) -> List[int]:
    # Monotone chain that keeps collinear boundary points (pops on strict turns only).
    if len(pts) <= 2:
        return [p.id for p in pts]
    lower: List[Point] = []
    for p in pts:
        while len(lower) >= 2 and orient(lower[-2].x, lower[-2].y, lower[-1].x, lower[-1].y, p.x, p.y) < 0:
            lower.pop()
        lower.append(p)
    upper: List[Point] = []
    for p in pts:
        while len(upper) >= 2 and orient(upper[-2].x, upper[-2].y, upper[-1].x, upper[-1].y, p.x, p.y) > 0:
            upper.pop()
        upper.append(p)
    if len(lower) == len(upper) == len(pts):
        # every point survived both passes: the set is collinear
        return [p.id for p in pts]
    return [p.id for p in lower] + [p.id for p in upper[-2:0:-1]]


def _sorted_points(points: Sequence[Point]) -> List[Point]:
    return sorted(points, key=lambda p: (p.x, p.y))


def convex_hull(points: Sequence[Point]) -> List[int]:
    """Counterclockwise ids of every point on the hull boundary.

    Points lying in the interior of a hull edge are included.  One or two
    points, or a collinear set, come back ordered by (x, y).
    """
    if not points:
        raise GeometryError("empty point set")
    _check_finite(points)
    ids = [p.id for p in points]
    if len(set(ids)) != len(ids):
        raise GeometryError("duplicate point ids")
    return _hull_of_sorted(_sorted_points(points))


def convex_layers_naive(points: Sequence[Point]) -> ConvexLayers:
    """Peel hulls off repeatedly until no points remain."""
    if not points:
        raise GeometryError("empty point set")
    _check_finite(points)
    remaining = _sorted_points(points)
    layers: List[List[int]] = []
    while remaining:
        layer = _hull_of_sorted(remaining)
        layers.append(layer)
        taken = set(layer)
        remaining = [p for p in remaining if p.id not in taken]
    return ConvexLayers.from_layers(layers)


def point_in_convex_polygon(poly: Sequence[Point], q: Point, strict: bool = True) -> bool:
    """Whether q lies inside the CCW convex polygon ``poly``.

    With ``strict`` the boundary counts as outside.  Degenerate polygons
    (fewer than three vertices, or collinear) have an empty interior.
    """
    n = len(poly)
    if n < 3:
        if strict:
            return False
        return any(p.x == q.x and p.y == q.y for p in poly) or (
            n == 2 and _on_segment(poly[0], poly[1], q)
        )
    saw_left = False
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        o = orientation(a, b, q)
        if o < 0:
            return False
        if o == 0 and strict:
            return False
        saw_left = saw_left or o > 0
    return saw_left


def _on_segment(a: Point, b: Point, q: Point) -> bool:
    if orientation(a, b, q) != 0:
        return False
    return min(a.x, b.x) <= q.x <= max(a.x, b.x) and min(a.y, b.y) <= q.y <= max(a.y, b.y)


def segments_properly_intersect(a: Point, b: Point, c: Point, d: Point) -> bool:
    """Segments ab and cd cross at a single point interior to both."""
    o1 = orientation(a, b, c)
    o2 = orientation(a, b, d)
    o3 = orientation(c, d, a)
    o4 = orientation(c, d, b)
    return o1 * o2 < 0 and o3 * o4 < 0


def segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool:
    """Closed-segment intersection, touching and overlap included."""
    if segments_properly_intersect(a, b, c, d):
        return True
    return _on_segment(a, b, c) or _on_segment(a, b, d) or _on_segment(c, d, a) or _on_segment(c, d, b)
