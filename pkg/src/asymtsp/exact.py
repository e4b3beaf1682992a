"""Exact combinatorial subroutines.

Held-Karp and brute-force ATSP, minimum-weight perfect matching, Eulerian
trails in multigraphs, and vertex cover (exact branching and the matching
2-approximation).
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import networkx as nx
import numpy as np
from numba import njit

from .errors import CapacityError, ValidationError
from .instance import Instance, Tour, Trail
from .metric import MetaGraph

HELD_KARP_LIMIT = 22
BRUTE_FORCE_LIMIT = 10


# --- Held-Karp -------------------------------------------------------------

@njit(cache=True)
def _hk_fill(C, dp, big):
    m = dp.shape[1]
    for j in range(m):
        dp[1 << j, j] = C[0, j + 1]
    for mask in range(1, 1 << m):
        if mask & (mask - 1) == 0:
            continue
        for j in range(m):
            bit = 1 << j
            if mask & bit == 0:
                continue
            prev = mask ^ bit
            best = big
            for i in range(m):
                if prev & (1 << i):
                    val = dp[prev, i] + C[i + 1, j + 1]
                    if val < best:
                        best = val
            dp[mask, j] = best


def held_karp(graph: Instance | MetaGraph, limit: int = HELD_KARP_LIMIT) -> Tour:
    """Optimal tour by bitmask dynamic programming (vertex 0 fixed first).

    Works on non-metric matrices as well.  Ties resolve toward smaller
    predecessor indices, so the result is deterministic.
    """
    inst = graph.instance if isinstance(graph, MetaGraph) else graph
    n = inst.n
    if n > limit:
        raise CapacityError(f"Held-Karp limit is {limit} vertices, got {n}")
    if n <= 3:
        if n == 3 and inst.cost[0, 2] + inst.cost[2, 1] + inst.cost[1, 0] < (
            inst.cost[0, 1] + inst.cost[1, 2] + inst.cost[2, 0]
        ):
            return Tour((0, 2, 1))
        return Tour(range(n))
    m = n - 1
    C = np.ascontiguousarray(inst.cost)
    # int32 table when every partial sum fits, halving memory at the cap
    dtype = np.int32 if int(C.max()) * n < 2**31 - 1 else np.int64
    dp = np.empty((1 << m, m), dtype=dtype)
    _hk_fill(C.astype(dtype), dp, np.iinfo(dtype).max)

    full = (1 << m) - 1
    closing = dp[full].astype(np.int64) + C[1:, 0]
    j = int(np.argmin(closing))
    path = [j]
    mask = full
    while mask & (mask - 1):
        prev = mask ^ (1 << j)
        target = int(dp[mask, j])
        for i in range(m):
            if prev & (1 << i) and int(dp[prev, i]) + int(C[i + 1, j + 1]) == target:
                break
        path.append(i)
        mask, j = prev, i
    return Tour([0] + [v + 1 for v in reversed(path)])


@lru_cache(maxsize=None)
def _permutations(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(1, n))), dtype=np.intp).reshape(-1, n - 1)


def brute_force_tour(instance: Instance, limit: int = BRUTE_FORCE_LIMIT) -> Tour:
    """Exhaustive minimum over all (n-1)! cyclic orders starting at vertex 0."""
    n = instance.n
    if n > limit:
        raise CapacityError(f"brute force limit is {limit} vertices, got {n}")
    if n <= 2:
        return Tour(range(n))
    P = _permutations(n)
    C = instance.cost
    total = C[0, P[:, 0]] + C[P[:, -1], 0]
    for i in range(n - 2):
        total = total + C[P[:, i], P[:, i + 1]]
    best = int(np.argmin(total))
    return Tour((0, *P[best]))


# --- matching ----------------------------------------------------------------

@dataclass(frozen=True)
class Matching:
    pairs: frozenset[tuple[int, int]]
    total_cost: int  # in the units of the cost matrix given


def min_weight_perfect_matching(cost: np.ndarray, vertices: Sequence[int]) -> Matching:
    """Exact minimum-weight perfect matching on the complete graph over ``vertices``.

    ``cost`` must be symmetric on those vertices.  Uses the blossom
    algorithm through networkx with weights flipped to ``M - c``, which
    turns a maximum-weight maximum-cardinality matching into a minimum-cost
    perfect one (exact for integer costs).
    """
    vs = sorted(int(v) for v in vertices)
    if len(vs) % 2:
        raise ValidationError(f"perfect matching needs an even vertex set, got {len(vs)}")
    if not vs:
        return Matching(frozenset(), 0)
    if len(vs) == 2:
        a, b = vs
        return Matching(frozenset({(a, b)}), int(cost[a, b]))
    sub = cost[np.ix_(vs, vs)]
    top = int(sub.max()) + 1
    g = nx.Graph()
    for i, j in itertools.combinations(range(len(vs)), 2):
        g.add_edge(vs[i], vs[j], weight=top - int(sub[i, j]))
    mate = nx.max_weight_matching(g, maxcardinality=True)
    pairs = frozenset((min(a, b), max(a, b)) for a, b in mate)
    if 2 * len(pairs) != len(vs):
        raise RuntimeError("blossom returned a non-perfect matching")
    return Matching(pairs, sum(int(cost[a, b]) for a, b in pairs))


# --- Eulerian trails --------------------------------------------------------

@dataclass(frozen=True)
class Multigraph:
    """Undirected multigraph; ``edges`` holds ``(u, v, multiplicity)``."""

    n: int
    edges: tuple[tuple[int, int, int], ...]

    def __init__(self, n: int, edges: Iterable[tuple[int, int] | tuple[int, int, int]]):
        merged: Counter = Counter()
        for e in edges:
            u, v = int(e[0]), int(e[1])
            mult = int(e[2]) if len(e) > 2 else 1
            if mult < 1:
                raise ValidationError("edge multiplicity must be at least 1")
            merged[(min(u, v), max(u, v))] += mult
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", tuple((u, v, m) for (u, v), m in sorted(merged.items())))

    def degree(self) -> Counter:
        deg: Counter = Counter()
        for u, v, m in self.edges:
            deg[u] += m
            deg[v] += m
        return deg

    @property
    def edge_count(self) -> int:
        return sum(m for _, _, m in self.edges)


def eulerian_trail(mg: Multigraph, start: int, end: int) -> Trail:
    """Hierholzer's algorithm; visits smaller neighbours first.

    Returns a closed trail when ``start == end`` (the final return to
    ``start`` is written out, so the vertex list begins and ends at it).
    """
    deg = mg.degree()
    odd = sorted(v for v, d in deg.items() if d % 2)
    want = [] if start == end else sorted((start, end))
    if odd != want:
        raise ValidationError(f"degree parity does not allow a {start}->{end} trail; odd vertices {odd}")
    adj: dict[int, list[tuple[int, int]]] = {}
    eid = 0
    for u, v, m in mg.edges:
        for _ in range(m):
            adj.setdefault(u, []).append((v, eid))
            adj.setdefault(v, []).append((u, eid))
            eid += 1
    for lst in adj.values():
        lst.sort(reverse=True)
    used = [False] * eid
    stack = [start]
    out: list[int] = []
    while stack:
        v = stack[-1]
        lst = adj.get(v, [])
        while lst and used[lst[-1][1]]:
            lst.pop()
        if lst:
            w, e = lst.pop()
            used[e] = True
            stack.append(w)
        else:
            out.append(stack.pop())
    out.reverse()
    if len(out) != eid + 1:
        raise ValidationError("multigraph is not connected on its edges")
    return Trail(out, closed=False)


# --- vertex cover -----------------------------------------------------------

def _adjacency(edges: Iterable[tuple[int, int]]) -> dict[int, set[int]]:
    adj: dict[int, set[int]] = {}
    for u, v in edges:
        if u == v:
            raise ValidationError(f"self-loop at {u}")
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    return adj


def _matching_lower_bound(adj: dict[int, set[int]]) -> int:
    matched: set[int] = set()
    size = 0
    for u in sorted(adj):
        if u in matched:
            continue
        for v in sorted(adj[u]):
            if v not in matched:
                matched.update((u, v))
                size += 1
                break
    return size


def _remove(adj: dict[int, set[int]], vs: Iterable[int]) -> dict[int, set[int]]:
    gone = set(vs)
    out = {}
    for u, nb in adj.items():
        if u in gone:
            continue
        rest = nb - gone
        if rest:
            out[u] = rest
    return out


def vertex_cover_2approx(edges: Iterable[tuple[int, int]]) -> frozenset[int]:
    """Both endpoints of a greedy maximal matching (edges in sorted order)."""
    cover: set[int] = set()
    for u, v in sorted((min(a, b), max(a, b)) for a, b in edges):
        if u not in cover and v not in cover:
            cover.update((u, v))
    return frozenset(cover)


def _greedy_cover(adj: dict[int, set[int]]) -> set[int]:
    cover: set[int] = set()
    while adj:
        v = max(sorted(adj), key=lambda x: len(adj[x]))
        cover.add(v)
        adj = _remove(adj, [v])
    return cover


def vertex_cover_exact(
    edges: Iterable[tuple[int, int]],
    injected: Iterable[int] | None = None,
    claim_minimum: bool = False,
) -> frozenset[int]:
    """Minimum vertex cover by bounded search-tree branching.

    Degree-one vertices are resolved first (take the neighbour); otherwise
    branch on a maximum-degree vertex v: take v, or take all neighbours of v.
    A maximal matching gives the lower bound used for pruning.

    An ``injected`` cover is checked for coverage and returned.  With
    ``claim_minimum`` its size is also checked against the optimum (the
    matching bound short-circuits the search when it already matches).
    """
    edges = [(int(u), int(v)) for u, v in edges]
    adj = _adjacency(edges)
    if injected is not None:
        cover = frozenset(int(v) for v in injected)
        for u, v in edges:
            if u not in cover and v not in cover:
                raise ValidationError(f"injected cover misses edge ({u}, {v})")
        if claim_minimum and len(cover) > _matching_lower_bound(adj):
            best = _branch(adj)
            if len(best) < len(cover):
                raise ValidationError(f"injected cover has size {len(cover)}, minimum is {len(best)}")
        return cover
    return frozenset(_branch(adj))


def vertex_cover_lower_bound(edges: Iterable[tuple[int, int]]) -> int:
    return _matching_lower_bound(_adjacency(edges))


def _branch(adj: dict[int, set[int]]) -> set[int]:
    best = [_greedy_cover(adj)]

    def go(adj: dict[int, set[int]], taken: frozenset[int]) -> None:
        # forced moves: a degree-one vertex's neighbour is always safe to take
        while True:
            leaf = next((u for u in sorted(adj) if len(adj[u]) == 1), None)
            if leaf is None:
                break
            (w,) = adj[leaf]
            taken = taken | {w}
            adj = _remove(adj, [w])
        if not adj:
            if len(taken) < len(best[0]):
                best[0] = set(taken)
            return
        if len(taken) + _matching_lower_bound(adj) >= len(best[0]):
            return
        v = max(sorted(adj), key=lambda x: len(adj[x]))
        go(_remove(adj, [v]), taken | {v})
        nb = adj[v]
        if len(taken) + len(nb) < len(best[0]):
            go(_remove(adj, nb), taken | nb)

    go(adj, frozenset())
    return best[0]


def covers(cover: Iterable[int], edges: Iterable[tuple[int, int]]) -> bool:
    c = set(cover)
    return all(u in c or v in c for u, v in edges)
