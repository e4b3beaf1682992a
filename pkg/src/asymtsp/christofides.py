"""Christofides on symmetric metric views, and the direction-aware variant
for instances whose pairs are close to symmetric."""

from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .exact import Multigraph, eulerian_trail, min_weight_perfect_matching
from .instance import Instance, Tour, Trail, max_pair_ratio, scaled_cost
from .metric import metric_shortcut
from .spanning import mst_undirected


def _circuit(cost: np.ndarray, vs: list[int], injected_mst) -> tuple[list[int], int]:
    """MST + odd-degree matching + Eulerian circuit from ``vs[0]``.

    Returns the closed vertex walk (first vertex repeated at the end) and
    the cost of MST plus matching under ``cost``.
    """
    tree = mst_undirected(cost, vs, injected_mst)
    deg: Counter = Counter()
    for a, b in tree:
        deg[a] += 1
        deg[b] += 1
    odd = sorted(v for v in vs if deg[v] % 2)
    assert len(odd) % 2 == 0
    match = min_weight_perfect_matching(cost, odd)
    mg = Multigraph(int(cost.shape[0]), list(tree) + sorted(match.pairs))
    assert all(d % 2 == 0 for d in mg.degree().values())
    walk = eulerian_trail(mg, vs[0], vs[0]).vertices
    budget = sum(int(cost[a, b]) for a, b in tree) + match.total_cost
    return list(walk), budget


def _shortcut(walk: Sequence[int]) -> Tour:
    return Tour(metric_shortcut(None, Trail(walk[:-1], closed=True)).vertices)


def christofides(
    cost: np.ndarray,
    vertices: Iterable[int],
    injected_mst: Iterable[tuple[int, int]] | None = None,
) -> Tour:
    """1.5-approximate tour over ``vertices`` of a symmetric metric matrix."""
    vs = sorted(int(v) for v in vertices)
    if len(vs) <= 3 and injected_mst is None:
        return Tour(vs)
    walk, budget = _circuit(cost, vs, injected_mst)
    tour = _shortcut(walk)
    assert scaled_cost(cost, tour.order) <= budget
    return tour


def relaxed_christofides(
    instance: Instance,
    vertices: Iterable[int],
    injected_mst: Iterable[tuple[int, int]] | None = None,
) -> Tour:
    """Christofides on the cheaper-direction view, traversed in the better direction.

    The circuit is built on ``min(c(u,v), c(v,u))``, costed in the real
    directed costs both ways round (ties keep the forward direction) and
    shortcut in the directed instance.  Needs ``instance`` to be metric.
    """
    vs = sorted(int(v) for v in vertices)
    C = instance.cost
    low = np.minimum(C, C.T)
    if len(vs) <= 3 and injected_mst is None:
        walk = vs + [vs[0]]
    else:
        walk, _ = _circuit(low, vs, injected_mst)
    fwd = scaled_cost(C, walk, closed=False)
    back = scaled_cost(C, walk[::-1], closed=False)
    if back < fwd:
        walk = walk[::-1]
    beta = max_pair_ratio(instance, vs)
    if beta != math.inf:
        # the better direction pays at most the average of the two
        assert 2 * min(fwd, back) <= (1 + beta) * scaled_cost(low, walk, closed=False)
    return _shortcut(walk)


def christofides_bound(beta) -> Fraction | float:
    """Guarantee of :func:`relaxed_christofides` for beta-symmetric inputs."""
    if beta == math.inf:
        return math.inf
    return Fraction(3, 4) * (1 + Fraction(beta))
