"""Instances, distance metrics and tours."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence, Tuple

from .geometry import Point


class Metric(str, Enum):
    EUC_2D = "EUC_2D"
    ATT = "ATT"


class InvalidTour(ValueError):
    pass


def distance(a: Point, b: Point, metric: Metric = Metric.EUC_2D) -> float:
    dx = a.x - b.x
    dy = a.y - b.y
    if metric is Metric.ATT:
        # TSPLIB pseudo-Euclidean distance
        r = math.sqrt((dx * dx + dy * dy) / 10.0)
        t = int(r + 0.5)
        return float(t + 1 if t < r else t)
    return math.hypot(dx, dy)


@dataclass
class Instance:
    name: str
    points: List[Point]
    metric: Metric = Metric.EUC_2D
    _matrix: Optional[List[List[float]]] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if not self.points:
            raise ValueError("instance needs at least one point")
        if sorted(p.id for p in self.points) != list(range(len(self.points))):
            raise ValueError("point ids must be 0..n-1")
        self.points = sorted(self.points, key=lambda p: p.id)
        self.metric = Metric(self.metric)

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def matrix(self) -> List[List[float]]:
        """Dense distance matrix, computed once."""
        if self._matrix is None:
            pts, m = self.points, self.metric
            self._matrix = [[distance(a, b, m) for b in pts] for a in pts]
        return self._matrix

    def dist(self, i: int, j: int) -> float:
        return self.matrix[i][j]


def canonical_order(order: Sequence[int]) -> Tuple[int, ...]:
    """Rotate to start at the smallest id and pick the direction whose
    second element is smaller."""
    n = len(order)
    if n == 0:
        return ()
    k = min(range(n), key=order.__getitem__)
    rot = list(order[k:]) + list(order[:k])
    if n > 2 and rot[-1] < rot[1]:
        rot = [rot[0]] + rot[:0:-1]
    return tuple(rot)


def _is_permutation(order: Sequence[int], n: int) -> bool:
    return len(order) == n and sorted(order) == list(range(n))


def cycle_length(order: Sequence[int], inst: Instance) -> float:
    d = inst.matrix
    total = 0.0
    prev = order[-1]
    for c in order:
        total += d[prev][c]
        prev = c
    return total


@dataclass(frozen=True)
class Tour:
    order: Tuple[int, ...]
    length: float

    @classmethod
    def from_order(cls, order: Sequence[int], inst: Instance) -> "Tour":
        """Canonicalise ``order`` and cache its length."""
        if not _is_permutation(order, inst.n):
            raise InvalidTour("invalid tour")
        canon = canonical_order(order)
        return cls(order=canon, length=cycle_length(canon, inst))

    def __len__(self) -> int:
        return len(self.order)


def tour_length(t: Tour, inst: Instance) -> float:
    if not _is_permutation(t.order, inst.n):
        raise InvalidTour("invalid tour")
    return cycle_length(t.order, inst)


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.detail}"


def validate_tour(t: Tour, inst: Instance) -> Optional[Violation]:
    """None when the tour is valid, otherwise the first problem found."""
    try:
        order = list(t.order)
    except TypeError:
        return Violation("invalid tour", "order is not a sequence")
    n = inst.n
    seen = set()
    for c in order:
        if not isinstance(c, int) or not 0 <= c < n:
            return Violation("unknown id", f"id {c!r} not in 0..{n - 1}")
        if c in seen:
            return Violation("id visited twice", f"id {c}")
        seen.add(c)
    if len(seen) != n:
        missing = sorted(set(range(n)) - seen)
        return Violation("missing ids", f"ids {missing[:10]} never visited")
    actual = cycle_length(order, inst)
    if not math.isclose(t.length, actual, rel_tol=1e-9, abs_tol=1e-12):
        return Violation("length mismatch", f"cached {t.length!r}, actual {actual!r}")
    return None
