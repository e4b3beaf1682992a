"""Metric closure, shortcuts, minors and completion of incomplete graphs."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ValidationError
from .instance import Instance, MetricStatus, Trail, scale_to_integers

# Large enough that INF + INF still fits in int64.
_INF = np.int64(1) << 61


def floyd_warshall(cost: np.ndarray) -> np.ndarray:
    """All-pairs shortest path costs of a dense non-negative matrix."""
    d = np.array(cost, dtype=np.int64, copy=True)
    for k in range(d.shape[0]):
        np.minimum(d, d[:, k, None] + d[None, k, :], out=d)
    return d


def metric_closure(instance: Instance) -> Instance:
    closed = Instance(floyd_warshall(instance.cost), name=instance.name, scale=instance.scale)
    closed.metric_checked = MetricStatus.METRIC
    return closed


def metric_shortcut(instance: Instance | None, trail: Trail, pin_endpoints: bool = False) -> Trail:
    """Drop repeated vertices, keeping first occurrences.

    With ``pin_endpoints`` the last vertex of an open trail stays last (its
    earlier occurrences are dropped instead).  If an open trail starts and
    ends at the same vertex the result is the path of first occurrences; the
    instance argument is only there for the caller's metric precondition.
    """
    vs = trail.vertices
    last = vs[-1]
    pin = pin_endpoints and not trail.closed and len(vs) > 1 and vs[0] != last
    seen: set[int] = set()
    out: list[int] = []
    for v in vs:
        if v in seen or (pin and v == last):
            continue
        seen.add(v)
        out.append(v)
    if pin:
        out.append(last)
    return Trail(out, closed=trail.closed)


@dataclass(frozen=True)
class Partition:
    """Disjoint vertex blocks covering ``0..n-1``, sorted by smallest member."""

    blocks: tuple[tuple[int, ...], ...]

    def __init__(self, blocks: Iterable[Iterable[int]], n: int | None = None):
        bs = [tuple(sorted(int(v) for v in b)) for b in blocks]
        if any(not b for b in bs):
            raise ValidationError("partition blocks must be non-empty")
        bs.sort(key=lambda b: b[0])
        flat = [v for b in bs for v in b]
        if len(flat) != len(set(flat)):
            raise ValidationError("partition blocks overlap")
        size = len(flat) if n is None else n
        if set(flat) != set(range(size)):
            raise ValidationError(f"partition does not cover 0..{size - 1}")
        object.__setattr__(self, "blocks", tuple(bs))

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def block_of(self) -> list[int]:
        owner = [0] * self.n
        for i, b in enumerate(self.blocks):
            for v in b:
                owner[v] = i
        return owner


@dataclass(frozen=True)
class MetaGraph:
    """Minor of an instance: ``instance`` is indexed by block number and
    ``partition.blocks[i]`` are the original vertices merged into vertex i.
    The meta instance is generally not metric."""

    instance: Instance
    partition: Partition

    @property
    def n(self) -> int:
        return self.instance.n

    @property
    def blocks(self) -> tuple[tuple[int, ...], ...]:
        return self.partition.blocks


def contract(instance: Instance, partition: Partition) -> MetaGraph:
    if partition.n != instance.n:
        raise ValidationError("partition size does not match instance")
    perm = np.array([v for b in partition.blocks for v in b], dtype=np.intp)
    starts = np.cumsum([0] + [len(b) for b in partition.blocks[:-1]])
    C = instance.cost[np.ix_(perm, perm)]
    M = np.minimum.reduceat(np.minimum.reduceat(C, starts, axis=0), starts, axis=1)
    np.fill_diagonal(M, 0)
    meta = Instance(M, name=f"{instance.name}/minor", scale=instance.scale)
    return MetaGraph(meta, partition)


@dataclass(frozen=True)
class PartialGraph:
    """Directed graph with only some edges present."""

    n: int
    edges: Mapping[tuple[int, int], object]

    def __post_init__(self):
        for (u, v), c in self.edges.items():
            if u == v:
                raise ValidationError(f"self-loop at {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValidationError(f"edge ({u}, {v}) out of range")
            if c < 0:
                raise ValidationError(f"negative cost on ({u}, {v})")


def polygon_complete(pg: PartialGraph, name: str = "completed") -> Instance:
    """Fill in every missing edge with the cheapest path cost over existing edges.

    Requires strong connectivity and that no existing edge is costlier than
    a path between its endpoints; existing costs are kept as they are.
    """
    keys = list(pg.edges)
    ints, scale = scale_to_integers(pg.edges[k] for k in keys)
    D = np.full((pg.n, pg.n), _INF, dtype=np.int64)
    np.fill_diagonal(D, 0)
    for (u, v), c in zip(keys, ints):
        D[u, v] = c
    direct = D.copy()
    D = floyd_warshall(D)
    if (D >= _INF).any():
        u, v = map(int, np.argwhere(D >= _INF)[0])
        raise ValidationError(f"graph is not strongly connected: no path {u} -> {v}")
    for (u, v), c in zip(keys, ints):
        if D[u, v] < c:
            raise ValidationError(
                f"polygon inequality violated: edge ({u}, {v}) costs {c}/{scale} "
                f"but a path costs {int(D[u, v])}/{scale}"
            )
    assert all(D[u, v] == direct[u, v] for u, v in keys)
    out = Instance(D, name=name, scale=scale)
    out.metric_checked = MetricStatus.METRIC
    return out

