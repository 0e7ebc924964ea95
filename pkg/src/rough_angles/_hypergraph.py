"""Exact maximum independent set in a 3-uniform hypergraph.

A subset of vertices is independent when it contains no hyperedge entirely.
We solve the complementary minimum hitting-set problem by branch and bound:
every edge needs at least one vertex outside the subset.  Vertices are
bitmask-encoded; all tie-breaks are by smallest index so results are
deterministic regardless of schedule.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence


@dataclass(frozen=True)
class SearchResult:
    subset: tuple[int, ...]
    size: int
    optimal: bool
    upper_bound: int
    nodes: int


class _Budget:
    __slots__ = ("left", "exhausted")

    def __init__(self, nodes: Optional[int]):
        self.left = nodes
        self.exhausted = False

    def tick(self) -> bool:
        if self.left is None:
            return True
        if self.left <= 0:
            self.exhausted = True
            return False
        self.left -= 1
        return True


def _canonical_edges(triples: Iterable[Sequence[int]]) -> list[tuple[int, int, int]]:
    seen = set()
    for t in triples:
        e = tuple(sorted(int(v) for v in t))
        if len(set(e)) != 3:
            raise ValueError(f"hyperedge must have 3 distinct vertices, got {t}")
        seen.add(e)
    return sorted(seen)


def _greedy_cover(n: int, edges: list[tuple[int, int, int]], banned: int) -> Optional[int]:
    """Cover all edges by repeatedly taking the non-banned vertex of highest
    remaining degree.  Returns a cover bitmask, or None if some edge consists
    of banned vertices only."""
    cover = 0
    remaining = list(edges)
    while remaining:
        deg = [0] * n
        for a, b, c in remaining:
            for v in (a, b, c):
                if not (banned >> v) & 1:
                    deg[v] += 1
        best_v, best_d = -1, 0
        for v in range(n):
            if deg[v] > best_d:
                best_v, best_d = v, deg[v]
        if best_v < 0:
            return None
        cover |= 1 << best_v
        remaining = [e for e in remaining if not any(v == best_v for v in e)]
    return cover


def _matching_bound(edges: list[tuple[int, int, int]]) -> int:
    """Number of pairwise vertex-disjoint edges found greedily: a lower bound
    on any hitting set of those edges."""
    used = 0
    count = 0
    for a, b, c in edges:
        m = (1 << a) | (1 << b) | (1 << c)
        if used & m:
            continue
        used |= m
        count += 1
    return count


def max_independent_subset(
    n: int,
    triples: Iterable[Sequence[int]],
    budget: Optional[int] = 500_000,
    forced: Sequence[int] = (),
    target: Optional[int] = None,
) -> SearchResult:
    """Largest subset of range(n) spanning no triple.

    ``forced`` vertices must belong to the subset (used for lexicographic
    reconstruction); if they already span an edge the result has size -1.
    ``target`` short-circuits the search once a subset of that size is known,
    returning it with ``optimal=False`` unless the search also completed.
    """
    edges = _canonical_edges(triples)
    forced_mask = 0
    for v in forced:
        if not (0 <= v < n):
            raise ValueError(f"forced vertex {v} out of range")
        forced_mask |= 1 << v
    for a, b, c in edges:
        if (forced_mask >> a) & 1 and (forced_mask >> b) & 1 and (forced_mask >> c) & 1:
            return SearchResult((), -1, True, -1, 0)

    all_mask = (1 << n) - 1
    root_lb = _matching_bound(edges)
    upper = n - root_lb

    greedy = _greedy_cover(n, edges, banned=forced_mask)
    if greedy is None:
        return SearchResult((), -1, True, -1, 0)
    best_cover = greedy
    best_cover_size = bin(greedy).count("1")

    budget_box = _Budget(budget)
    hit_target = False

    def recurse(cover: int, keep: int, cover_size: int) -> None:
        nonlocal best_cover, best_cover_size, hit_target
        if hit_target or not budget_box.tick():
            return
        # Unit propagation: an edge with no covered vertex and <= 1 vertex
        # still undecided forces that vertex into the cover.
        while True:
            active: list[tuple[int, int, int]] = []
            forced_v = -1
            infeasible = False
            for e in edges:
                a, b, c = e
                em = (1 << a) | (1 << b) | (1 << c)
                if em & cover:
                    continue
                free = [v for v in e if not (keep >> v) & 1]
                if not free:
                    infeasible = True
                    break
                if len(free) == 1:
                    forced_v = free[0]
                    break
                active.append(e)
            if infeasible:
                return
            if forced_v >= 0:
                cover |= 1 << forced_v
                cover_size += 1
                if cover_size >= best_cover_size:
                    return
                continue
            break

        if not active:
            if cover_size < best_cover_size:
                best_cover_size = cover_size
                best_cover = cover
                if target is not None and n - cover_size >= target:
                    hit_target = True
            return
        if cover_size + _matching_bound(active) >= best_cover_size:
            return

        # Branch on the vertex appearing in the most active edges.
        deg = {}
        for e in active:
            for v in e:
                if not (keep >> v) & 1:
                    deg[v] = deg.get(v, 0) + 1
        v = min(deg, key=lambda u: (-deg[u], u))
        recurse(cover | (1 << v), keep, cover_size + 1)
        recurse(cover, keep | (1 << v), cover_size)

    recurse(0, forced_mask, 0)

    subset_mask = all_mask & ~best_cover
    subset = tuple(v for v in range(n) if (subset_mask >> v) & 1)
    size = len(subset)
    optimal = not budget_box.exhausted and not hit_target
    return SearchResult(subset, size, optimal, max(upper, size), budget_nodes_used(budget, budget_box))


def budget_nodes_used(budget: Optional[int], box: _Budget) -> int:
    if budget is None:
        return 0
    return budget - (box.left or 0)


def lexicographically_smallest_mis(
    n: int,
    triples: Iterable[Sequence[int]],
    size: int,
    budget: Optional[int] = 500_000,
) -> tuple[int, ...]:
    """Lexicographically smallest independent subset of the given (optimal)
    size, built by prefix forcing.  Assumes such a subset exists."""
    edges = _canonical_edges(triples)
    chosen: list[int] = []
    for v in range(n):
        if len(chosen) == size:
            break
        trial = chosen + [v]
        res = max_independent_subset(n, edges, budget=budget, forced=trial, target=size)
        if res.size >= size:
            chosen = trial
    if len(chosen) != size:
        raise RuntimeError("failed to reconstruct certificate; budget too small")
    return tuple(chosen)
