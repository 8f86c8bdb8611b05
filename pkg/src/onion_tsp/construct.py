"""Tour construction: nearest neighbour and convex-layer merging."""

from __future__ import annotations

from enum import Enum
from typing import Callable, List, Optional, Sequence

from .geometry import ConvexLayers, Point
from .tsp_core import Instance, Tour


class MergeOrder(str, Enum):
    OUTERMOST_FIRST = "outermost_first"
    INNERMOST_FIRST = "innermost_first"

    @classmethod
    def _missing_(cls, value):
        # short CLI spellings
        return {"outer": cls.OUTERMOST_FIRST, "inner": cls.INNERMOST_FIRST}.get(value)


def nearest_neighbor(inst: Instance, start: int = 0) -> Tour:
    """Greedy tour from ``start``; equal distances go to the smaller id."""
    n = inst.n
    if not isinstance(start, int) or not 0 <= start < n:
        raise ValueError(f"invalid start id {start!r}")
    d = inst.matrix
    unvisited = set(range(n))
    unvisited.discard(start)
    order = [start]
    cur = start
    while unvisited:
        row = d[cur]
        nxt = min(unvisited, key=lambda j: (row[j], j))
        unvisited.discard(nxt)
        order.append(nxt)
        cur = nxt
    return Tour.from_order(order, inst)


def _edge_indices(cycle: Sequence[int]) -> range:
    # a 2-cycle has a single distinct edge
    m = len(cycle)
    return range(1) if m == 2 else range(m)


def _insert_point(host: List[int], g: int, d) -> List[int]:
    m = len(host)
    if m == 1:
        return [host[0], g]
    best, best_i = None, 0
    for i in _edge_indices(host):
        a1, a2 = host[i], host[(i + 1) % m]
        cost = d[a1][g] + d[g][a2] - d[a1][a2]
        if best is None or cost < best:
            best, best_i = cost, i
    return host[: best_i + 1] + [g] + host[best_i + 1:]


def splice(host: Sequence[int], guest: Sequence[int], inst: Instance) -> List[int]:
    """Join two disjoint cycles into one by the cheapest 2-edge exchange.

    Edge ``(a1, a2)`` of the host and ``(b1, b2)`` of the guest are removed
    and either ``a1-b1, a2-b2`` (flag 0) or ``a1-b2, a2-b1`` (flag 1) are
    added.  Ties go to the smallest (host edge, guest edge, flag).  A single
    point is inserted at its cheapest host edge.
    """
    host, guest = list(host), list(guest)
    if not host or not guest:
        raise ValueError("splice needs two non-empty cycles")
    if set(host) & set(guest):
        raise ValueError("host and guest cycles overlap")
    d = inst.matrix
    if len(guest) == 1:
        return _insert_point(host, guest[0], d)
    if len(host) == 1:
        merged = _insert_point(guest, host[0], d)
        k = merged.index(host[0])
        return merged[k:] + merged[:k]

    m, k = len(host), len(guest)
    best = None
    best_move = (0, 0, 0)
    for i in _edge_indices(host):
        a1, a2 = host[i], host[(i + 1) % m]
        base = d[a1][a2]
        da1, da2 = d[a1], d[a2]
        for j in _edge_indices(guest):
            b1, b2 = guest[j], guest[(j + 1) % k]
            removed = base + d[b1][b2]
            c0 = da1[b1] + da2[b2] - removed
            if best is None or c0 < best:
                best, best_move = c0, (i, j, 0)
            c1 = da1[b2] + da2[b1] - removed
            if c1 < best:
                best, best_move = c1, (i, j, 1)

    i, j, flag = best_move
    # guest walked from the endpoint joined to a1 round to the one joined to a2
    if flag == 0:
        path = [guest[(j - t) % k] for t in range(k)]
    else:
        path = [guest[(j + 1 + t) % k] for t in range(k)]
    return host[: i + 1] + path + host[i + 1:]


def layer_merge(
    inst: Instance,
    layers: ConvexLayers,
    order: MergeOrder = MergeOrder.OUTERMOST_FIRST,
    improve_each_merge: Optional[Callable[[Tour, Instance], Tour]] = None,
) -> Tour:
    """Fold :func:`splice` over the convex layers.

    ``improve_each_merge``, when given, is applied to the partial cycle after
    every splice (the cycle is re-indexed onto a sub-instance for the call).
    """
    order = MergeOrder(order)
    ids = sorted(pid for layer in layers.layers for pid in layer)
    if ids != list(range(inst.n)):
        raise ValueError("layers do not match the instance")
    seq = list(layers.layers)
    if order is MergeOrder.INNERMOST_FIRST:
        seq.reverse()
    cycle = list(seq[0])
    for guest in seq[1:]:
        cycle = splice(cycle, guest, inst)
        if improve_each_merge is not None:
            cycle = _improve_partial(cycle, inst, improve_each_merge)
    return Tour.from_order(cycle, inst)


def _improve_partial(cycle: List[int], inst: Instance, improve) -> List[int]:
    if len(cycle) == inst.n:
        return list(improve(Tour.from_order(cycle, inst), inst).order)
    members = sorted(cycle)
    local = {pid: k for k, pid in enumerate(members)}
    sub = Instance(
        name=f"{inst.name}[partial]",
        points=[Point(local[p.id], p.x, p.y) for p in (inst.points[i] for i in members)],
        metric=inst.metric,
    )
    t = improve(Tour.from_order([local[c] for c in cycle], sub), sub)
    return [members[c] for c in t.order]
