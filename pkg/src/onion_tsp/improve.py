"""2-opt and 3-opt best-improvement local search, and a crossing check.

Both searches scan every move of their neighbourhood, apply the one with the
largest gain, and stop once no gain exceeds ``epsilon * length``.  Equal
gains go to the lexicographically smallest removed-edge indices (then the
smallest reconnection index for 3-opt), which makes results independent of
platform and scan parallelism.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .geometry import segments_properly_intersect
from .tsp_core import Instance, InvalidTour, Tour, cycle_length, validate_tour


@dataclass(frozen=True)
class ImproveConfig:
    epsilon: float = 1e-9
    max_passes: Optional[int] = None
    strategy: str = "best_improvement"

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.max_passes is not None and self.max_passes < 0:
            raise ValueError("max_passes must be non-negative")
        if self.strategy != "best_improvement":
            raise ValueError(f"unknown strategy {self.strategy!r}")


DEFAULT_CONFIG = ImproveConfig()


def _check(t: Tour, inst: Instance) -> List[int]:
    problem = validate_tour(t, inst)
    if problem is not None:
        raise InvalidTour(str(problem))
    return list(t.order)


def _matrix(inst: Instance) -> np.ndarray:
    return np.asarray(inst.matrix, dtype=np.float64)


def _best_2opt(order: List[int], D: np.ndarray):
    n = len(order)
    o = np.asarray(order)
    a = o
    b = np.roll(o, -1)
    d_ab = D[a, b]
    gain = (d_ab[:, None] + d_ab[None, :]) - D[a[:, None], a[None, :]] - D[b[:, None], b[None, :]]
    i_idx, j_idx = np.indices((n, n))
    valid = (j_idx >= i_idx + 2) & ~((i_idx == 0) & (j_idx == n - 1))
    gain = np.where(valid, gain, -np.inf)
    flat = int(np.argmax(gain))
    i, j = divmod(flat, n)
    return float(gain[i, j]), i, j


def two_opt(t: Tour, inst: Instance, cfg: ImproveConfig = DEFAULT_CONFIG) -> Tour:
    """Best-improvement 2-opt down to a local optimum."""
    order = _check(t, inst)
    n = len(order)
    if n < 4:
        return Tour.from_order(order, inst)
    D = _matrix(inst)
    length = cycle_length(order, inst)
    moves = 0
    while cfg.max_passes is None or moves < cfg.max_passes:
        gain, i, j = _best_2opt(order, D)
        if not gain > cfg.epsilon * length:
            break
        order[i + 1 : j + 1] = order[i + 1 : j + 1][::-1]
        length = cycle_length(order, inst)
        moves += 1
    return Tour.from_order(order, inst)


# Reconnections of the segments B = o[i+1..j] and C = o[j+1..k] between
# a = o[i] and f = o[k+1]: (first segment, reversed?, second segment, reversed?).
# The identity (B, C) is left out.
THREE_OPT_MOVES = (
    ("B", True, "C", False),
    ("B", False, "C", True),
    ("B", True, "C", True),
    ("C", False, "B", False),
    ("C", True, "B", False),
    ("C", False, "B", True),
    ("C", True, "B", True),
)


def _best_3opt_for_i(o: np.ndarray, D: np.ndarray, i: int):
    n = len(o)
    js = np.arange(i + 1, n - 1)
    ks = np.arange(n)
    if js.size == 0:
        return -np.inf, 0, 0, 0
    J, K = np.meshgrid(js, ks, indexing="ij")
    valid = K > J
    Kc = np.where(valid, K, n - 1)
    a = o[i]
    b1 = o[i + 1]
    b2 = o[J]
    c1 = o[J + 1]
    c2 = o[Kc]
    f = o[(Kc + 1) % n]
    removed = D[a, b1] + D[b2, c1] + D[c2, f]
    ends = {"B": (b1, b2), "C": (c1, c2)}
    gains = np.empty(J.shape + (len(THREE_OPT_MOVES),))
    for m, (s1, r1, s2, r2) in enumerate(THREE_OPT_MOVES):
        x_in, x_out = ends[s1][::-1] if r1 else ends[s1]
        y_in, y_out = ends[s2][::-1] if r2 else ends[s2]
        added = D[a, x_in] + D[x_out, y_in] + D[y_out, f]
        gains[..., m] = removed - added
    gains[~valid] = -np.inf
    flat = int(np.argmax(gains))
    jj, rest = divmod(flat, n * len(THREE_OPT_MOVES))
    kk, m = divmod(rest, len(THREE_OPT_MOVES))
    return float(gains[jj, kk, m]), int(js[jj]), int(kk), m


def _apply_3opt(order: List[int], i: int, j: int, k: int, m: int) -> List[int]:
    seg = {"B": order[i + 1 : j + 1], "C": order[j + 1 : k + 1]}
    s1, r1, s2, r2 = THREE_OPT_MOVES[m]
    x = seg[s1][::-1] if r1 else seg[s1]
    y = seg[s2][::-1] if r2 else seg[s2]
    return order[: i + 1] + x + y + order[k + 1 :]


def three_opt(t: Tour, inst: Instance, cfg: ImproveConfig = DEFAULT_CONFIG) -> Tour:
    """Best-improvement 3-opt over all seven reconnections of every edge triple."""
    order = _check(t, inst)
    n = len(order)
    if n < 4:
        return Tour.from_order(order, inst)
    D = _matrix(inst)
    length = cycle_length(order, inst)
    moves = 0
    while cfg.max_passes is None or moves < cfg.max_passes:
        o = np.asarray(order)
        best = (-np.inf, 0, 0, 0, 0)
        for i in range(n - 2):
            gain, j, k, m = _best_3opt_for_i(o, D, i)
            if gain > best[0]:
                best = (gain, i, j, k, m)
        gain, i, j, k, m = best
        if not gain > cfg.epsilon * length:
            break
        order = _apply_3opt(order, i, j, k, m)
        length = cycle_length(order, inst)
        moves += 1
    return Tour.from_order(order, inst)


def has_crossings(t: Tour, inst: Instance) -> bool:
    """True iff two non-adjacent tour edges properly intersect."""
    order = list(t.order)
    n = len(order)
    if n < 4:
        return False
    pts = inst.points
    edges = [(pts[order[i]], pts[order[(i + 1) % n]]) for i in range(n)]
    for i in range(n):
        a, b = edges[i]
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue
            c, d = edges[j]
            if segments_properly_intersect(a, b, c, d):
                return True
    return False
