"""Minimum spanning arborescences, undirected MSTs and component splitting.

Ties are broken toward the smaller tail vertex, then the smaller head.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import ValidationError
from .instance import BETA_INF, ZERO_SUBSTITUTE, Instance, exceeds, pair_factor

_BIG = np.int64(1) << 60


@dataclass(frozen=True)
class Arborescence:
    """Rooted spanning tree with every edge directed away from ``root``.

    ``parent[root] == -1``; ``total_cost`` is exact (real units).
    """

    root: int
    parent: tuple[int, ...]
    total_cost: Fraction | int

    @property
    def n(self) -> int:
        return len(self.parent)

    def edges(self) -> list[tuple[int, int]]:
        return [(p, v) for v, p in enumerate(self.parent) if p >= 0]


class _UnionFind:
    def __init__(self, items: Iterable[int]):
        self.up = {v: v for v in items}

    def find(self, v: int) -> int:
        while self.up[v] != v:
            self.up[v] = self.up[self.up[v]]
            v = self.up[v]
        return v

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.up[rb] = ra
        return True


def _find_cycle(parent: np.ndarray, root: int) -> list[int] | None:
    n = len(parent)
    state = np.zeros(n, dtype=np.int8)  # 0 new, 1 on current walk, 2 done
    state[root] = 2
    for start in range(n):
        walk = []
        v = start
        while state[v] == 0:
            state[v] = 1
            walk.append(v)
            v = int(parent[v])
        if state[v] == 1:
            return sorted(walk[walk.index(v):])
        for w in walk:
            state[w] = 2
    return None


def _edmonds(C: np.ndarray, root: int) -> np.ndarray:
    n = C.shape[0]
    if n == 1:
        return np.array([-1])
    W = C.copy()
    W[:, root] = _BIG
    np.fill_diagonal(W, _BIG)
    parent = W.argmin(axis=0)
    parent[root] = -1
    cycle = _find_cycle(parent, root)
    if cycle is None:
        return parent

    cyc = np.array(cycle)
    in_cycle = np.zeros(n, dtype=bool)
    in_cycle[cyc] = True
    others = np.flatnonzero(~in_cycle)
    m = len(others) + 1
    W2 = np.zeros((m, m), dtype=np.int64)
    W2[:-1, :-1] = C[np.ix_(others, others)]
    # entering the cycle at w costs c(u, w) minus the cycle edge it replaces
    reduced = C[np.ix_(others, cyc)] - C[parent[cyc], cyc][None, :]
    enter = reduced.argmin(axis=1)
    W2[:-1, -1] = reduced.min(axis=1)
    leave = C[np.ix_(cyc, others)]
    exit_ = leave.argmin(axis=0)
    W2[-1, :-1] = leave.min(axis=0)
    np.fill_diagonal(W2, 0)

    root2 = int(np.searchsorted(others, root))
    p2 = _edmonds(W2, root2)

    result = parent.copy()
    for i, v in enumerate(others):
        p = p2[i]
        if p < 0:
            result[v] = -1
        elif p == m - 1:
            result[v] = cyc[exit_[i]]
        else:
            result[v] = others[p]
    u = p2[m - 1]
    result[cyc[enter[u]]] = others[u]
    return result


def _arborescence(instance: Instance, root: int, parent: Sequence[int]) -> Arborescence:
    total = sum(int(instance.cost[p, v]) for v, p in enumerate(parent) if p >= 0)
    return Arborescence(root, tuple(int(p) for p in parent), instance.real(total))


def msa(instance: Instance, root: int = 0) -> Arborescence:
    """Minimum spanning arborescence rooted at ``root`` (Chu-Liu/Edmonds)."""
    if not 0 <= root < instance.n:
        raise ValidationError(f"root {root} out of range for n={instance.n}")
    parent = _edmonds(np.array(instance.cost, dtype=np.int64), root)
    return _arborescence(instance, root, parent)


def msa_best_root(instance: Instance) -> Arborescence:
    """Cheapest MSA over all roots; ties go to the smallest root."""
    best = None
    for r in range(instance.n):
        a = msa(instance, r)
        if best is None or a.total_cost < best.total_cost:
            best = a
    return best


def validate_arborescence(instance: Instance, arb: Arborescence, require_minimum: bool = True) -> None:
    n = instance.n
    if arb.n != n:
        raise ValidationError(f"arborescence spans {arb.n} vertices, instance has {n}")
    if arb.parent[arb.root] != -1:
        raise ValidationError("root must have no parent")
    for v, p in enumerate(arb.parent):
        if v != arb.root and not 0 <= p < n:
            raise ValidationError(f"vertex {v} has no valid parent")
    for v in range(n):
        seen = set()
        while v != arb.root:
            if v in seen:
                raise ValidationError("parent pointers contain a cycle")
            seen.add(v)
            v = arb.parent[v]
    actual = _arborescence(instance, arb.root, arb.parent).total_cost
    if actual != arb.total_cost:
        raise ValidationError(f"stated cost {arb.total_cost} differs from edge sum {actual}")
    if require_minimum:
        best = msa(instance, arb.root).total_cost
        if arb.total_cost != best:
            raise ValidationError(f"arborescence costs {arb.total_cost}, minimum is {best}")


def arborescence_from_edges(instance: Instance, root: int, edges: Iterable[tuple[int, int]]) -> Arborescence:
    parent = [-1] * instance.n
    for u, v in edges:
        if parent[v] != -1:
            raise ValidationError(f"vertex {v} has two parents")
        parent[v] = u
    arb = _arborescence(instance, root, parent)
    validate_arborescence(instance, arb, require_minimum=False)
    return arb


def one_way_edges(
    instance: Instance,
    arb: Arborescence,
    beta=1,
    zero_substitute: Fraction | None = ZERO_SUBSTITUTE,
) -> list[tuple[int, int]]:
    """Arborescence edges strictly cheaper than their reverse whose pair is
    beta-asymmetric.  The length of the list is the parameter k."""
    if beta == BETA_INF:
        return []
    zsub = None if zero_substitute is None else Fraction(zero_substitute) * instance.scale
    out = []
    for u, v in arb.edges():
        fwd, back = int(instance.cost[u, v]), int(instance.cost[v, u])
        if fwd < back and exceeds(pair_factor(fwd, back, zsub), beta):
            out.append((u, v))
    return out


@dataclass(frozen=True)
class Component:
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]  # (parent, child); used as undirected


@dataclass(frozen=True)
class ComponentForest:
    components: tuple[Component, ...]
    removed_edges: tuple[tuple[int, int], ...]

    def blocks(self) -> list[tuple[int, ...]]:
        return [c.vertices for c in self.components]


def split_components(arb: Arborescence, removed: Iterable[tuple[int, int]]) -> ComponentForest:
    removed = tuple(removed)
    tree = set(arb.edges())
    for e in removed:
        if e not in tree:
            raise ValidationError(f"edge {e} is not in the arborescence")
    gone = set(removed)
    kept = [e for e in arb.edges() if e not in gone]
    uf = _UnionFind(range(arb.n))
    for u, v in kept:
        uf.union(u, v)
    groups: dict[int, list[int]] = {}
    for v in range(arb.n):
        groups.setdefault(uf.find(v), []).append(v)
    comp_edges: dict[int, list[tuple[int, int]]] = {r: [] for r in groups}
    for u, v in kept:
        comp_edges[uf.find(u)].append((u, v))
    comps = sorted(
        (Component(tuple(vs), tuple(sorted(comp_edges[r]))) for r, vs in groups.items()),
        key=lambda c: c.vertices[0],
    )
    assert len(comps) == len(removed) + 1
    return ComponentForest(tuple(comps), removed)


def mst_undirected(
    cost: np.ndarray,
    vertices: Sequence[int],
    injected: Iterable[tuple[int, int]] | None = None,
) -> list[tuple[int, int]]:
    """Minimum spanning tree of ``vertices`` under the symmetric matrix ``cost``.

    Kruskal over edges sorted by ``(cost, u, v)``.  An ``injected`` tree is
    returned instead after checking it spans ``vertices`` and is minimum.
    """
    vs = sorted(int(v) for v in vertices)
    if not vs:
        raise ValidationError("MST of an empty vertex set")
    arr = np.array(vs)
    iu, ju = np.triu_indices(len(vs), k=1)
    u, v = arr[iu], arr[ju]
    w = cost[u, v]
    order = np.lexsort((v, u, w))
    uf = _UnionFind(vs)
    tree = []
    for t in order:
        a, b = int(u[t]), int(v[t])
        if uf.union(a, b):
            tree.append((a, b))
            if len(tree) == len(vs) - 1:
                break
    if injected is None:
        return tree
    inj = [(min(a, b), max(a, b)) for a, b in injected]
    uf = _UnionFind(vs)
    for a, b in inj:
        if a not in uf.up or b not in uf.up:
            raise ValidationError(f"injected tree edge ({a}, {b}) leaves the vertex set")
        if not uf.union(a, b):
            raise ValidationError("injected tree contains a cycle")
    if len(inj) != len(vs) - 1:
        raise ValidationError("injected tree does not span the vertex set")
    best = sum(int(cost[a, b]) for a, b in tree)
    got = sum(int(cost[a, b]) for a, b in inj)
    if got != best:
        raise ValidationError(f"injected tree costs {got}, minimum spanning tree costs {best}")
    return inj
