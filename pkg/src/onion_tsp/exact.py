"""Exact solvers used as oracles: enumeration and Held-Karp."""

from __future__ import annotations

from itertools import combinations, permutations

import numpy as np

from .tsp_core import Instance, Tour

BRUTE_FORCE_CAP = 10
HELD_KARP_CAP = 18


class CapExceeded(ValueError):
    pass


def brute_force(inst: Instance) -> Tour:
    """Enumerate the (n-1)!/2 distinct tours; the first optimum in
    canonical order wins."""
    n = inst.n
    if n > BRUTE_FORCE_CAP:
        raise CapExceeded(f"brute force capped at {BRUTE_FORCE_CAP}")
    if n <= 3:
        return Tour.from_order(list(range(n)), inst)
    d = inst.matrix
    best = None
    best_order = None
    for perm in permutations(range(1, n)):
        # direction canonicalised: second city smaller than the last
        if perm[0] > perm[-1]:
            continue
        total = 0.0
        prev = perm[-1]
        # same summation order as tsp_core.cycle_length on (0,) + perm
        total += d[prev][0]
        prev = 0
        for c in perm:
            total += d[prev][c]
            prev = c
        if best is None or total < best:
            best, best_order = total, perm
    return Tour.from_order((0,) + best_order, inst)


def held_karp(inst: Instance) -> Tour:
    """Subset dynamic programme over paths from city 0, O(n^2 2^n)."""
    n = inst.n
    if n > HELD_KARP_CAP:
        raise CapExceeded(f"held-karp capped at {HELD_KARP_CAP}")
    if n <= 3:
        return Tour.from_order(list(range(n)), inst)
    D = np.asarray(inst.matrix, dtype=np.float64)
    m = n - 1  # cities 1..n-1 map to bits 0..m-1
    size = 1 << m
    cost = np.full((size, m), np.inf)
    parent = np.full((size, m), -1, dtype=np.int64)
    for k in range(m):
        cost[1 << k, k] = D[0, k + 1]
    sub = D[1:, 1:]
    for s in range(2, m + 1):
        masks = np.array([sum(1 << b for b in c) for c in combinations(range(m), s)], dtype=np.int64)
        for k in range(m):
            bit = 1 << k
            mk = masks[(masks & bit) != 0]
            prev = mk ^ bit
            # candidates[t, j] = cost of ending at j over prev[t], then j -> k
            cand = cost[prev] + sub[:, k][None, :]
            j = np.argmin(cand, axis=1)
            cost[mk, k] = cand[np.arange(len(mk)), j]
            parent[mk, k] = j
    full = size - 1
    closing = cost[full] + D[1:, 0]
    last = int(np.argmin(closing))
    path = []
    mask = full
    while last >= 0:
        path.append(last + 1)
        nxt = int(parent[mask, last])
        mask ^= 1 << last
        last = nxt
    path.reverse()
    return Tour.from_order([0] + path, inst)
