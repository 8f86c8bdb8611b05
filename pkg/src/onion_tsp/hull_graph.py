"""Deletion-only hull graph used to peel convex layers.

Points are sorted by (x, y) and stored at the leaves of a balanced binary
tree.  Every internal node keeps, for the upper and for the lower chain, the
bridge joining the hulls of its two children (over alive points only).  The
hull of a subtree is never materialised; it is read off the bridges on
demand, and tangents are found by descending the tree.

Vertices listed by the structure use the same boundary-inclusive convention
as :func:`onion_tsp.geometry.convex_hull`: points in the interior of a hull
edge are hull vertices.  Bridge endpoints are therefore chosen as the two
points of the tangent line that are closest to each other.

Deleting a vertex only invalidates the bridges it is an endpoint of.  Those
nodes are exactly the entries of its per-vertex bridge lists, so a deletion
pops them bottom-up and recomputes each one.
"""

from __future__ import annotations

import bisect
from typing import Dict, List, Optional, Sequence, Tuple

from .geometry import _CCW_ERRBOUND, ConvexLayers, GeometryError, Point, _check_finite, orient

UPPER = 0
LOWER = 1
_SIGN = (1, -1)


class HullGraphError(GeometryError):
    pass


class _Chain:
    """Bridges and per-vertex bridge lists for one chain (upper or lower).

    ``left_list[r]`` holds the nodes whose bridge ends at rank ``r`` coming
    from the left, ``right_list[r]`` those leaving ``r`` to the right.  Both
    are stacks ordered top (root side) first, so ``pop()`` removes the
    lowest bridge and the top one goes last.
    """

    __slots__ = ("sign", "ba", "bb", "left_list", "right_list")

    def __init__(self, sign: int, n_nodes: int, n_leaves: int):
        self.sign = sign
        self.ba = [-1] * n_nodes
        self.bb = [-1] * n_nodes
        self.left_list: List[List[int]] = [[] for _ in range(n_leaves)]
        self.right_list: List[List[int]] = [[] for _ in range(n_leaves)]


class HullGraph:
    """Upper and lower hull graphs over one x-sorted leaf order."""

    def __init__(self, points: Sequence[Point]):
        if not points:
            raise HullGraphError("empty point set")
        _check_finite(points)
        ids = [p.id for p in points]
        if len(set(ids)) != len(ids):
            raise HullGraphError("duplicate point ids")
        pts = sorted(points, key=lambda p: (p.x, p.y))
        n = len(pts)
        self.n = n
        self.ids = [p.id for p in pts]
        self.xs = [p.x for p in pts]
        self.ys = [p.y for p in pts]
        self.rank = {pid: r for r, pid in enumerate(self.ids)}

        # Tree over leaf ranks; leaves are nodes 0..n-1, internal nodes follow.
        self.left: List[int] = [-1] * n
        self.right: List[int] = [-1] * n
        self.parent: List[int] = [-1] * n
        self.lo: List[int] = list(range(n))
        self.hi: List[int] = list(range(n))
        self.depth: List[int] = [0] * n
        self.root = self._make_tree(0, n - 1)
        self._set_depths()
        self.count: List[int] = [0] * len(self.left)
        for leaf in range(n):
            self.count[leaf] = 1
        self.alive = [True] * n
        self.n_alive = n

        n_nodes = len(self.left)
        self.chains = (_Chain(_SIGN[UPPER], n_nodes, n), _Chain(_SIGN[LOWER], n_nodes, n))
        self._build()

    # -- tree shape -------------------------------------------------------

    def _make_tree(self, lo: int, hi: int) -> int:
        if lo == hi:
            return lo
        mid = (lo + hi) // 2
        a = self._make_tree(lo, mid)
        b = self._make_tree(mid + 1, hi)
        v = len(self.left)
        self.left.append(a)
        self.right.append(b)
        self.parent.append(-1)
        self.lo.append(lo)
        self.hi.append(hi)
        self.depth.append(0)
        self.parent[a] = v
        self.parent[b] = v
        return v

    def _set_depths(self) -> None:
        # internal nodes are appended after their children, so walk them in reverse
        for v in range(len(self.left) - 1, self.n - 1, -1):
            for c in (self.left[v], self.right[v]):
                self.depth[c] = self.depth[v] + 1

    def _build(self) -> None:
        for v in range(self.n, len(self.left)):
            self.count[v] = self.count[self.left[v]] + self.count[self.right[v]]
            for chain in self.chains:
                self._set_bridge(chain, v)

    # -- predicates -------------------------------------------------------

    def _above(self, chain: _Chain, a: int, b: int, q: int) -> bool:
        """q strictly on the outer side of the directed line a -> b."""
        xs, ys = self.xs, self.ys
        return orient(xs[a], ys[a], xs[b], ys[b], xs[q], ys[q]) * chain.sign > 0

    def _tangent_from_right(self, chain: _Chain, u: int, q: int) -> int:
        """Vertex of the chain of subtree ``u`` touched by the tangent from q.

        q must follow every leaf of ``u`` in leaf order.  Among collinear
        candidates the one closest to q is returned.
        """
        left, right, count, ba, bb = self.left, self.right, self.count, chain.ba, chain.bb
        xs, ys, sign, n = self.xs, self.ys, chain.sign, self.n
        qx, qy = xs[q], ys[q]
        while u >= n:
            l, r = left[u], right[u]
            if count[l] == 0:
                u = r
            elif count[r] == 0:
                u = l
            else:
                a, b = ba[u], bb[u]
                ax, ay = xs[a], ys[a]
                # inlined float filter of orient(); exact fallback near zero
                detleft = (xs[b] - ax) * (qy - ay)
                detright = (ys[b] - ay) * (qx - ax)
                det = (detleft - detright) * sign
                err = _CCW_ERRBOUND * (abs(detleft) + abs(detright))
                if det > err:
                    u = l
                elif -det > err:
                    u = r
                else:
                    u = l if orient(ax, ay, xs[b], ys[b], qx, qy) * sign > 0 else r
        return u

    def _find_bridge(self, chain: _Chain, v: int) -> Tuple[int, int]:
        """Common tangent of the chains of v's two (non-empty) children."""
        left, right, count, ba, bb = self.left, self.right, self.count, chain.ba, chain.bb
        n = self.n
        ul = left[v]
        w = right[v]
        while w >= n:
            l, r = left[w], right[w]
            if count[l] == 0:
                w = r
            elif count[r] == 0:
                w = l
            else:
                c, d = ba[w], bb[w]
                t = self._tangent_from_right(chain, ul, c)
                # d strictly outside line t -> c: the tangent touches right of c
                w = r if self._above(chain, t, c, d) else l
        return self._tangent_from_right(chain, ul, w), w

    def _set_bridge(self, chain: _Chain, v: int) -> None:
        if self.count[self.left[v]] == 0 or self.count[self.right[v]] == 0:
            chain.ba[v] = chain.bb[v] = -1
            return
        a, b = self._find_bridge(chain, v)
        chain.ba[v], chain.bb[v] = a, b
        self._push(chain.right_list[a], v)
        self._push(chain.left_list[b], v)

    def _push(self, stack: List[int], v: int) -> None:
        # keep top-first order: ascending depth
        keys = [self.depth[x] for x in stack]
        stack.insert(bisect.bisect_right(keys, self.depth[v]), v)

    # -- queries ----------------------------------------------------------

    def _chain_ranks(self, chain: _Chain) -> List[int]:
        out: List[int] = []
        if self.n_alive == 0:
            return out
        left, right, count, ba, bb, lo_, hi_ = (
            self.left, self.right, self.count, chain.ba, chain.bb, self.lo, self.hi)
        n = self.n
        # explicit stack of (node, lo, hi); right part pushed first so output is in order
        stack = [(self.root, 0, n - 1)]
        while stack:
            v, lo, hi = stack.pop()
            if count[v] == 0 or hi < lo_[v] or lo > hi_[v]:
                continue
            if v < n:
                out.append(v)
                continue
            l, r = left[v], right[v]
            if count[l] == 0:
                stack.append((r, lo, hi))
            elif count[r] == 0:
                stack.append((l, lo, hi))
            else:
                a, b = ba[v], bb[v]
                stack.append((r, max(lo, b), hi))
                stack.append((l, lo, min(hi, a)))
        return out

    def upper_chain(self) -> List[int]:
        """Ids on the upper hull of the alive set, in leaf order."""
        return [self.ids[r] for r in self._chain_ranks(self.chains[UPPER])]

    def lower_chain(self) -> List[int]:
        """Ids on the lower hull of the alive set, in leaf order."""
        return [self.ids[r] for r in self._chain_ranks(self.chains[LOWER])]

    def extract_outer(self) -> List[int]:
        """Counterclockwise ids of the current outer layer."""
        if self.n_alive == 0:
            raise HullGraphError("no alive points")
        upper = self._chain_ranks(self.chains[UPPER])
        lower = self._chain_ranks(self.chains[LOWER])
        if upper == lower:
            ranks = lower
        else:
            ranks = lower + upper[-2:0:-1]
        return [self.ids[r] for r in ranks]

    def _on_chain(self, chain: _Chain, r: int) -> bool:
        v = self.root
        n = self.n
        while v >= n:
            l, rr = self.left[v], self.right[v]
            in_left = r <= self.hi[l]
            if self.count[l] == 0 or self.count[rr] == 0:
                v = l if in_left else rr
                continue
            if in_left:
                if r > chain.ba[v]:
                    return False
                v = l
            else:
                if r < chain.bb[v]:
                    return False
                v = rr
        return v == r and self.alive[r]

    def is_on_outer(self, pid: int) -> bool:
        r = self.rank.get(pid)
        if r is None or not self.alive[r]:
            return False
        return self._on_chain(self.chains[UPPER], r) or self._on_chain(self.chains[LOWER], r)

    def bridge(self, node: int, which: int = UPPER) -> Optional[Tuple[int, int]]:
        """Bridge stored at an internal node as a pair of point ids."""
        chain = self.chains[which]
        if chain.ba[node] < 0:
            return None
        return self.ids[chain.ba[node]], self.ids[chain.bb[node]]

    def bridges(self, which: int = UPPER) -> Dict[int, Optional[Tuple[int, int]]]:
        return {v: self.bridge(v, which) for v in range(self.n, len(self.left))}

    def internal_nodes(self) -> range:
        return range(self.n, len(self.left))

    def root_path(self, pid: int) -> List[int]:
        """Internal nodes from the leaf of ``pid`` up to the root."""
        v = self.parent[self.rank[pid]]
        path = []
        while v >= 0:
            path.append(v)
            v = self.parent[v]
        return path

    def vertex_lists(self, pid: int, which: int = UPPER) -> Tuple[List[int], List[int]]:
        """(L, R) bridge lists of a vertex, each top-first, as node indices."""
        chain = self.chains[which]
        r = self.rank[pid]
        return list(chain.left_list[r]), list(chain.right_list[r])

    # -- mutation ---------------------------------------------------------

    def delete_vertex(self, pid: int) -> "HullGraph":
        """Remove a vertex of the current outer layer and repair bridges."""
        r = self.rank.get(pid)
        if r is None or not self.alive[r] or not self.is_on_outer(pid):
            raise HullGraphError(f"point {pid} not on current layer")
        self.alive[r] = False
        self.n_alive -= 1
        v = r
        while v >= 0:
            self.count[v] -= 1
            v = self.parent[v]
        for chain in self.chains:
            self._repair(chain, r)
        return self

    def _repair(self, chain: _Chain, r: int) -> None:
        ls, rs = chain.left_list[r], chain.right_list[r]
        depth = self.depth
        # merge the two stacks bottom-up; the top edge of each list goes last
        while ls or rs:
            if not rs or (ls and depth[ls[-1]] >= depth[rs[-1]]):
                v = ls.pop()
                other = chain.right_list[chain.ba[v]]
            else:
                v = rs.pop()
                other = chain.left_list[chain.bb[v]]
            other.remove(v)
            chain.ba[v] = chain.bb[v] = -1
            self._set_bridge(chain, v)


def build(points: Sequence[Point]) -> HullGraph:
    return HullGraph(points)


def extract_outer(g: HullGraph) -> List[int]:
    return g.extract_outer()


def delete_vertex(g: HullGraph, pid: int) -> HullGraph:
    return g.delete_vertex(pid)


def convex_layers_fast(points: Sequence[Point]) -> ConvexLayers:
    """Onion peeling through repeated extraction and deletion on a hull graph."""
    g = HullGraph(points)
    layers: List[List[int]] = []
    while g.n_alive:
        layer = g.extract_outer()
        layers.append(layer)
        for pid in layer:
            g.delete_vertex(pid)
    return ConvexLayers.from_layers(layers)
