"""Generalized tree doubling and its induced-subgraph kernelization.

Removing the (beta-)one-way edges from a minimum spanning arborescence
leaves k + 1 components.  Contracting them gives a meta-graph on k + 1
vertices whose optimal tour fixes the order in which components are
visited and, through the cheapest cross edges, where each one is entered
and left.  Inside a component a spanning path between those two vertices
comes from tree doubling with the connecting tree path left single.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .errors import CapacityError, ValidationError
from .exact import HELD_KARP_LIMIT, Multigraph, eulerian_trail, held_karp
from .gen_christofides import require_metric
from .instance import ZERO_SUBSTITUTE, Instance, Tour, Trail, scaled_cost, tour_cost
from .metric import MetaGraph, Partition, contract, metric_shortcut
from .report import RunReport
from .spanning import (
    Arborescence,
    Component,
    ComponentForest,
    msa,
    msa_best_root,
    one_way_edges,
    split_components,
    validate_arborescence,
)


@dataclass(frozen=True)
class GTDPlan:
    arborescence: Arborescence
    forest: ComponentForest
    meta: MetaGraph
    meta_tour: Tour
    endpoints: tuple[tuple[int, int], ...]  # (v_in, v_out) per component
    parameter_k: int
    beta: Fraction | float


@dataclass(frozen=True)
class GTDKernel:
    representatives: tuple[int, ...]  # one per component, in component order
    kernel_instance: Instance
    forest: ComponentForest
    parameter_k: int


def _tree_path(component: Component, a: int, b: int) -> list[tuple[int, int]]:
    adj: dict[int, list[int]] = {v: [] for v in component.vertices}
    for u, v in component.edges:
        adj[u].append(v)
        adj[v].append(u)
    prev = {a: a}
    queue = deque([a])
    while queue:
        u = queue.popleft()
        for w in sorted(adj[u]):
            if w not in prev:
                prev[w] = u
                queue.append(w)
    if b not in prev:
        raise ValidationError(f"{a} and {b} are not connected in the component")
    path = []
    while b != a:
        path.append((min(b, prev[b]), max(b, prev[b])))
        b = prev[b]
    return path


def adjusted_tree_doubling(
    component: Component, v_in: int, v_out: int, cost: np.ndarray | None = None
) -> Trail:
    """Spanning path of a tree component from ``v_in`` to ``v_out``.

    Edges off the tree path between the two are doubled, an Eulerian trail
    is taken and repeated vertices are shortcut with both ends kept in place.
    With ``v_in == v_out`` every edge is doubled and the result is a closed
    trail starting at ``v_in``.  When ``cost`` is given the shortcut is
    checked not to cost more than the trail it came from.
    """
    members = set(component.vertices)
    if v_in not in members or v_out not in members:
        raise ValidationError("v_in and v_out must belong to the component")
    if len(members) == 1:
        return Trail([v_in], closed=v_in == v_out)
    single = set(_tree_path(component, v_in, v_out))
    edges = []
    for u, v in component.edges:
        e = (min(u, v), max(u, v))
        edges.append((e[0], e[1], 1 if e in single else 2))
    mg = Multigraph(max(members) + 1, edges)
    walk = eulerian_trail(mg, v_in, v_out).vertices
    if v_in == v_out:
        trail = Trail(walk[:-1], closed=True)
        out = metric_shortcut(None, trail)
    else:
        trail = Trail(walk)
        out = metric_shortcut(None, trail, pin_endpoints=True)
    if cost is not None:
        assert scaled_cost(cost, out.vertices, out.closed) <= scaled_cost(cost, trail.vertices, trail.closed)
    return out


def _choose_arborescence(instance: Instance, injected_arb: Arborescence | None, root) -> Arborescence:
    if injected_arb is not None:
        validate_arborescence(instance, injected_arb, require_minimum=True)
        return injected_arb
    if root == "best":
        return msa_best_root(instance)
    return msa(instance, int(root))


def gtd_plan(
    instance: Instance,
    beta=1,
    arb: Arborescence | None = None,
    root=0,
    kernel_limit: int = HELD_KARP_LIMIT,
    zero_substitute: Fraction | None = ZERO_SUBSTITUTE,
) -> GTDPlan:
    require_metric(instance)
    arb = _choose_arborescence(instance, arb, root)
    removed = one_way_edges(instance, arb, beta, zero_substitute)
    k = len(removed)
    if k + 1 > kernel_limit:
        raise CapacityError(
            f"{instance.name} has k={k} one-way edges; the meta-graph of {k + 1} vertices exceeds the limit of {kernel_limit}"
        )
    forest = split_components(arb, removed)
    meta = contract(instance, Partition(forest.blocks(), n=instance.n))
    meta_tour = held_karp(meta, limit=kernel_limit)

    C = instance.cost
    v_in = [-1] * len(forest.components)
    v_out = [-1] * len(forest.components)
    if k == 0:
        v_in[0] = v_out[0] = arb.root
    order = meta_tour.order
    for a, b in zip(order, order[1:] + order[:1]):
        if a == b:
            continue
        src = np.array(forest.components[a].vertices)
        dst = np.array(forest.components[b].vertices)
        sub = C[np.ix_(src, dst)]
        # first flat argmin = lowest (source, target) since both are sorted
        i, j = np.unravel_index(int(np.argmin(sub)), sub.shape)
        assert sub[i, j] == meta.instance.cost[a, b]
        v_out[a], v_in[b] = int(src[i]), int(dst[j])
    return GTDPlan(
        arborescence=arb,
        forest=forest,
        meta=meta,
        meta_tour=meta_tour,
        endpoints=tuple(zip(v_in, v_out)),
        parameter_k=k,
        beta=beta,
    )


def _kept_ratio(instance: Instance, forest: ComponentForest) -> Fraction | float:
    """Largest reverse/forward cost ratio over the arborescence edges kept."""
    C = instance.cost
    worst: Fraction | float = Fraction(1)
    for comp in forest.components:
        for u, v in comp.edges:
            fwd, back = int(C[u, v]), int(C[v, u])
            if back > fwd:
                if fwd == 0:
                    return math.inf
                worst = max(worst, Fraction(back, fwd))
    return worst


def gtd_solve(
    instance: Instance,
    beta=1,
    injected_arb: Arborescence | None = None,
    root=0,
    kernel_limit: int = HELD_KARP_LIMIT,
    zero_substitute: Fraction | None = ZERO_SUBSTITUTE,
) -> RunReport:
    plan = gtd_plan(instance, beta, injected_arb, root, kernel_limit, zero_substitute)
    C = instance.cost
    pieces = []
    for idx in plan.meta_tour:
        comp = plan.forest.components[idx]
        a, b = plan.endpoints[idx]
        pieces.append(adjusted_tree_doubling(comp, a, b, C))

    spent = sum(scaled_cost(C, p.vertices, p.closed) for p in pieces)
    allowance = sum(int(C[u, v]) + int(C[v, u]) for comp in plan.forest.components for u, v in comp.edges)
    assert spent <= allowance
    walk = [v for p in pieces for v in p.vertices]
    tour = Tour(metric_shortcut(instance, Trail(walk, closed=True)).vertices)
    assert scaled_cost(C, tour.order) <= spent + scaled_cost(plan.meta.instance.cost, plan.meta_tour.order)

    b = _kept_ratio(instance, plan.forest)
    return RunReport(
        instance=instance.name,
        algorithm="gen-treedouble",
        beta=beta,
        kernel_size=plan.parameter_k,
        parameter=plan.parameter_k,
        tour_cost=tour_cost(instance, tour),
        bound=2 + b,
        root=plan.arborescence.root,
        tour=tour.order,
    )


def gtd_kernelize(
    instance: Instance,
    arb: Arborescence,
    beta=1,
    rep_mode: str = "lowest",
    representatives: Iterable[int] | None = None,
    zero_substitute: Fraction | None = ZERO_SUBSTITUTE,
) -> GTDKernel:
    require_metric(instance)
    validate_arborescence(instance, arb, require_minimum=False)
    forest = split_components(arb, one_way_edges(instance, arb, beta, zero_substitute))
    if rep_mode == "lowest":
        reps = tuple(c.vertices[0] for c in forest.components)
    elif rep_mode == "injected":
        if representatives is None:
            raise ValidationError("rep_mode 'injected' needs representatives")
        given = set(int(v) for v in representatives)
        reps = []
        for c in forest.components:
            hit = given & set(c.vertices)
            if len(hit) != 1:
                raise ValidationError(f"component starting at {c.vertices[0]} has {len(hit)} representatives, expected 1")
            reps.append(hit.pop())
        if len(given) != len(reps):
            raise ValidationError("representatives must be one per component")
        reps = tuple(reps)
    else:
        raise ValidationError(f"unknown representative mode {rep_mode!r}")
    return GTDKernel(
        representatives=reps,
        kernel_instance=instance.induced(reps, name=f"{instance.name}/kernel"),
        forest=forest,
        parameter_k=len(forest.components) - 1,
    )


def gtd_lift(instance: Instance, kernel: GTDKernel, kernel_tour: Tour) -> Tour:
    """Replace every representative by its component's tree-doubling cycle."""
    kernel_tour.validate(kernel.kernel_instance.n)
    walk: list[int] = []
    for i in kernel_tour:
        comp = kernel.forest.components[i]
        rep = kernel.representatives[i]
        walk.extend(adjusted_tree_doubling(comp, rep, rep, instance.cost).vertices)
    tour = Tour(metric_shortcut(instance, Trail(walk, closed=True)).vertices)
    tour.validate(instance.n)
    return tour

