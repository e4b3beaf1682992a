"""Instance families: the 2.5 lower-bound family, the cycle family for tree
doubling, seeded random metric instances and the metric lift."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .errors import ValidationError
from .instance import Instance
from .metric import Partition, PartialGraph, metric_closure, polygon_complete
from .spanning import Arborescence


def zigzag_order(k: int) -> list[int]:
    """1-based order b_1, b_k, b_2, b_{k-1}, ... ending in the middle."""
    out = []
    lo, hi = 1, k
    while lo <= hi:
        out.append(lo)
        if lo != hi:
            out.append(hi)
        lo, hi = lo + 1, hi - 1
    return out


def gen_gk(k: int) -> tuple[Instance, frozenset[int], list[tuple[int, int]]]:
    """The gray/black double-cycle instance on 2k vertices.

    Gray vertex g_i is index i-1 and black b_i is index k+i-1.  Returns the
    instance, the gray vertex set (a minimum cover of the asymmetric pairs)
    and the black zig-zag path as an undirected tree.
    """
    if k < 3:
        raise ValidationError("gen_gk needs k >= 3")

    def g(i: int) -> int:
        return (i - 1) % k

    def b(i: int) -> int:
        return k + (i - 1) % k

    edges: dict[tuple[int, int], int] = {}

    def both(u: int, v: int, c: int) -> None:
        edges[(u, v)] = c
        edges[(v, u)] = c

    for i in range(1, k + 1):
        both(g(i), g(i + 1), 2)
        both(b(i), b(i + 1), 2)
        edges[(b(i), g(i))] = 2
        edges[(g(i), b(i))] = 1
        both(b(i), g(i + 1), 1)
    zz = [b(i) for i in zigzag_order(k)]
    tree = []
    for u, v in zip(zz, zz[1:]):
        both(u, v, 2)
        tree.append((min(u, v), max(u, v)))
    inst = polygon_complete(PartialGraph(2 * k, edges), name=f"G{k}")
    return inst, frozenset(range(k)), tree


def gk_optimal_tour(k: int) -> list[int]:
    """g_1, b_1, g_2, b_2, ...; every edge costs 1."""
    return [v for i in range(k) for v in (i, k + i)]


def gen_cycle_family(m: int) -> tuple[Instance, Arborescence, tuple[int, int]]:
    """Cost-1 cycle on 2m vertices, one-way at (v_2m, v_1) and (v_m, v_{m+1}).

    Returns its closure, the path arborescence v_1 -> ... -> v_2m (which
    keeps only the second one-way edge) and the representatives v_m, v_2m.
    """
    if m < 2:
        raise ValidationError("gen_cycle_family needs m >= 2")
    n = 2 * m
    one_way = {(n - 1, 0), (m - 1, m)}
    edges: dict[tuple[int, int], int] = {}
    for i in range(n):
        j = (i + 1) % n
        edges[(i, j)] = 1
        if (i, j) not in one_way:
            edges[(j, i)] = 1
    inst = polygon_complete(PartialGraph(n, edges), name=f"cycle{m}")
    arb = Arborescence(0, tuple(range(-1, n - 1)), n - 1)
    return inst, arb, (m - 1, n - 1)


def _rational(x) -> Fraction:
    if isinstance(x, float):
        return Fraction(str(x))
    return Fraction(x)


def gen_random_metric(n: int, seed: int, asymmetry_strength=0) -> Instance:
    """Seeded random metric instance.

    Symmetric integer base costs in [1, 100]; each direction then moves by
    an independent integer offset of at most ``strength * base`` (never
    below 1) and the result is closed under shortest paths.
    """
    if n < 1:
        raise ValidationError("n must be at least 1")
    s = _rational(asymmetry_strength)
    if s < 0:
        raise ValidationError("asymmetry strength must be non-negative")
    rng = np.random.default_rng(seed)
    base = rng.integers(1, 101, size=(n, n))
    base = np.triu(base, 1)
    base = base + base.T
    spread = base * s.numerator // s.denominator
    offset = rng.integers(-spread, spread + 1)
    cost = np.maximum(base + offset, 1)
    np.fill_diagonal(cost, 0)
    return metric_closure(Instance(cost, name=f"rand-n{n}-s{seed}-a{s}".replace("/", "_")))


def lift_index(n: int, u: int, v: int) -> int:
    """Index of the lifted vertex u_v (the copy of u facing v)."""
    return u * (n - 1) + (v if v < u else v - 1)


def metric_lift(g: Instance) -> tuple[Instance, Partition]:
    """Metric instance on n(n-1) vertices having ``g`` as a minor.

    Vertex u_v is joined to v_u by the costs of (u, v) and (v, u); every
    other edge costs one more than the largest cost of ``g``.  Contracting
    each block {u_v : v != u} gives ``g`` back.
    """
    n = g.n
    if n < 2:
        raise ValidationError("metric_lift needs at least 2 vertices")
    N = n * (n - 1)
    top = int(g.cost.max()) + 1
    L = np.full((N, N), top, dtype=np.int64)
    np.fill_diagonal(L, 0)
    for u in range(n):
        for v in range(n):
            if u != v:
                L[lift_index(n, u, v), lift_index(n, v, u)] = g.cost[u, v]
    lifted = Instance(L, name=f"{g.name}/lift", scale=g.scale)
    blocks = [range(u * (n - 1), (u + 1) * (n - 1)) for u in range(n)]
    return lifted, Partition(blocks, n=N)
