"""Slow exhaustive oracles used to cross-check the exact subroutines."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .exact import brute_force_tour, held_karp, min_weight_perfect_matching, vertex_cover_exact
from .generators import gen_random_metric
from .instance import Instance, scaled_cost
from .spanning import msa


def min_pairing_cost(cost: np.ndarray, vertices: Sequence[int]) -> int:
    """Minimum perfect matching by enumerating all (m-1)!! pairings."""
    vs = list(vertices)
    if not vs:
        return 0
    first, rest = vs[0], vs[1:]
    best = None
    for i, partner in enumerate(rest):
        c = int(cost[first, partner]) + min_pairing_cost(cost, rest[:i] + rest[i + 1:])
        if best is None or c < best:
            best = c
    return best


def min_arborescence_cost(instance: Instance, root: int) -> int:
    """Cheapest spanning arborescence by trying every parent assignment."""
    n = instance.n
    others = [v for v in range(n) if v != root]
    best = None
    for parents in itertools.product(range(n), repeat=len(others)):
        parent = dict(zip(others, parents))
        if any(v == p for v, p in parent.items()):
            continue
        ok = True
        for v in others:
            seen = set()
            while v != root and ok:
                if v in seen:
                    ok = False
                seen.add(v)
                v = parent[v]
            if not ok:
                break
        if ok:
            c = sum(int(instance.cost[p, v]) for v, p in parent.items())
            if best is None or c < best:
                best = c
    return 0 if best is None else best


def min_cover_size(edges: Iterable[tuple[int, int]]) -> int:
    """Smallest vertex cover size by checking subsets in order of size."""
    edges = list(edges)
    verts = sorted({v for e in edges for v in e})
    for size in range(len(verts) + 1):
        for sub in itertools.combinations(verts, size):
            s = set(sub)
            if all(u in s or v in s for u, v in edges):
                return size
    return len(verts)


def random_graph(rng: np.random.Generator, n: int, p: float) -> list[tuple[int, int]]:
    return [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p]


@dataclass(frozen=True)
class OracleSummary:
    name: str
    cases: int
    mismatches: int

    @property
    def ok(self) -> bool:
        return self.mismatches == 0


def check_held_karp(seeds: int, max_n: int = 8) -> OracleSummary:
    bad = 0
    for s in range(seeds):
        n = 2 + s % (max_n - 1)
        inst = gen_random_metric(n, s, asymmetry_strength=(0, "1/5", "1/2")[s % 3])
        a = scaled_cost(inst.cost, held_karp(inst).order)
        b = scaled_cost(inst.cost, brute_force_tour(inst).order)
        bad += a != b
    return OracleSummary("held_karp = brute force", seeds, bad)


def check_matching(seeds: int, max_size: int = 10) -> OracleSummary:
    bad = 0
    for s in range(seeds):
        rng = np.random.default_rng(s)
        m = 2 * (1 + s % (max_size // 2))
        C = rng.integers(0, 50, size=(m, m))
        C = np.triu(C, 1) + np.triu(C, 1).T
        got = min_weight_perfect_matching(C, range(m)).total_cost
        bad += got != min_pairing_cost(C, list(range(m)))
    return OracleSummary("blossom matching = pairing enumeration", seeds, bad)


def check_msa(seeds: int, max_n: int = 5) -> OracleSummary:
    bad = 0
    for s in range(seeds):
        n = 2 + s % (max_n - 1)
        rng = np.random.default_rng(s)
        C = rng.integers(0, 20, size=(n, n))
        np.fill_diagonal(C, 0)
        inst = Instance(C, name=f"msa{s}")
        root = s % n
        got = int(round(msa(inst, root).total_cost * inst.scale))
        bad += got != min_arborescence_cost(inst, root)
    return OracleSummary("msa = arborescence enumeration", seeds, bad)


def check_vertex_cover(seeds: int, max_n: int = 14) -> OracleSummary:
    bad = 0
    for s in range(seeds):
        rng = np.random.default_rng(s)
        n = 2 + s % (max_n - 1)
        edges = random_graph(rng, n, 0.1 + 0.5 * rng.random())
        cover = vertex_cover_exact(edges)
        covered = all(u in cover or v in cover for u, v in edges)
        bad += (not covered) or len(cover) != min_cover_size(edges)
    return OracleSummary("vertex cover = subset search", seeds, bad)


def run_all(seeds: int = 200) -> list[OracleSummary]:
    return [
        check_held_karp(seeds),
        check_matching(seeds),
        check_msa(max(seeds // 2, 1)),
        check_vertex_cover(max(seeds // 2, 1)),
    ]
