"""ATSP instances, tours and trails, metric checks and asymmetry statistics.

Costs are exact.  Internally an :class:`Instance` stores an ``int64`` matrix
together with a positive integer ``scale``; the real cost of ``(u, v)`` is
``cost[u, v] / scale``.  Integer inputs (TSPLIB) have ``scale == 1``, rational
inputs are brought to a common denominator.  Every algorithm in the package
works on the scaled integers, which is exact because all of them are
invariant under a positive common factor.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from statistics import median
from typing import Iterable, Sequence

import numpy as np

from .errors import ValidationError

#: Sentinel for "treat everything as symmetric".
BETA_INF = math.inf

#: Default cost used in place of zero when computing asymmetry factors.
ZERO_SUBSTITUTE = Fraction(1, 10)


class MetricStatus(enum.Enum):
    UNKNOWN = "unknown"
    METRIC = "metric"
    VIOLATING = "violating"


def as_rational(x) -> Fraction | int:
    """Convert ints, Fractions and decimal strings to an exact number."""
    if isinstance(x, bool):
        raise TypeError("booleans are not costs")
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        raise TypeError("floating point costs are not accepted; use Fraction or int")
    raise TypeError(f"unsupported cost type {type(x).__name__}")


def _normalize(value: Fraction | int) -> Fraction | int:
    if isinstance(value, Fraction) and value.denominator == 1:
        return int(value)
    return value


def scale_to_integers(values: Iterable) -> tuple[list[int], int]:
    """Return ``(ints, scale)`` with ``ints[i] / scale == values[i]``."""
    vals = [as_rational(v) for v in values]
    scale = 1
    for v in vals:
        if isinstance(v, Fraction):
            scale = math.lcm(scale, v.denominator)
    return [int(v * scale) for v in vals], scale


@dataclass(eq=False)
class Instance:
    """A complete directed graph with non-negative exact costs.

    ``cost`` is the scaled integer matrix (read-only).  Use :meth:`c` for the
    real cost of an edge and :meth:`from_matrix` to build an instance from
    ints or Fractions.
    """

    cost: np.ndarray
    name: str = "unnamed"
    scale: int = 1
    metric_checked: MetricStatus = MetricStatus.UNKNOWN

    def __post_init__(self):
        cost = np.array(self.cost, dtype=np.int64, copy=True)
        if cost.ndim != 2 or cost.shape[0] != cost.shape[1]:
            raise ValidationError(f"cost matrix must be square, got shape {cost.shape}")
        if cost.shape[0] < 1:
            raise ValidationError("an instance needs at least one vertex")
        if (cost < 0).any():
            u, v = map(int, np.argwhere(cost < 0)[0])
            raise ValidationError(f"negative cost at ({u}, {v})")
        if np.diagonal(cost).any():
            raise ValidationError("diagonal costs must be exactly 0")
        if self.scale < 1:
            raise ValidationError("scale must be a positive integer")
        cost.setflags(write=False)
        self.cost = cost

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence], name: str = "unnamed") -> Instance:
        n = len(rows)
        flat = [x for row in rows for x in row]
        if len(flat) != n * n:
            raise ValidationError("cost matrix must be square")
        ints, scale = scale_to_integers(flat)
        return cls(np.array(ints, dtype=np.int64).reshape(n, n), name=name, scale=scale)

    @property
    def n(self) -> int:
        return self.cost.shape[0]

    def real(self, scaled) -> Fraction | int:
        """Turn a scaled integer cost back into the exact real value."""
        return _normalize(Fraction(int(scaled), self.scale))

    def c(self, u: int, v: int) -> Fraction | int:
        return self.real(self.cost[u, v])

    def rows(self) -> list[list[Fraction | int]]:
        return [[self.real(x) for x in row] for row in self.cost]

    def induced(self, vertices: Sequence[int], name: str | None = None) -> Instance:
        idx = list(vertices)
        sub = Instance(self.cost[np.ix_(idx, idx)], name=name or f"{self.name}[sub]", scale=self.scale)
        if self.metric_checked is MetricStatus.METRIC:
            sub.metric_checked = MetricStatus.METRIC
        return sub

    def transpose(self) -> Instance:
        return Instance(self.cost.T, name=f"{self.name}^T", scale=self.scale)

    def is_symmetric(self) -> bool:
        return bool((self.cost == self.cost.T).all())

    def same_costs(self, other: Instance) -> bool:
        if self.n != other.n:
            return False
        # compare a/s == b/t without division
        return bool((self.cost * other.scale == other.cost * self.scale).all())

    def __repr__(self) -> str:
        return f"Instance(name={self.name!r}, n={self.n}, scale={self.scale})"


@dataclass(frozen=True)
class Tour:
    """A cyclic vertex order.  Usually a permutation of ``0..n-1``; the
    sub-tours produced by the Christofides helpers use arbitrary labels."""

    order: tuple[int, ...]

    def __init__(self, order: Iterable[int]):
        object.__setattr__(self, "order", tuple(int(v) for v in order))
        if not self.order:
            raise ValidationError("a tour needs at least one vertex")

    def __len__(self) -> int:
        return len(self.order)

    def __iter__(self):
        return iter(self.order)

    def validate(self, n: int | None = None, vertices: Iterable[int] | None = None) -> None:
        expected = set(range(n)) if vertices is None else set(vertices)
        if len(set(self.order)) != len(self.order):
            seen = set()
            dup = next(v for v in self.order if v in seen or seen.add(v))
            raise ValidationError(f"tour repeats vertex {dup}")
        if set(self.order) != expected:
            missing = sorted(expected - set(self.order))[:5]
            extra = sorted(set(self.order) - expected)[:5]
            raise ValidationError(
                f"tour of length {len(self.order)} does not cover the vertex set "
                f"(missing {missing}, unexpected {extra})"
            )

    def rotate_to(self, v: int) -> Tour:
        i = self.order.index(v)
        return Tour(self.order[i:] + self.order[:i])

    def reversed(self) -> Tour:
        return Tour(self.order[::-1])

    def edges(self) -> list[tuple[int, int]]:
        o = self.order
        return [(o[i], o[(i + 1) % len(o)]) for i in range(len(o))]


@dataclass(frozen=True)
class Trail:
    """A vertex sequence that may repeat vertices; ``closed`` trails wrap."""

    vertices: tuple[int, ...]
    closed: bool = False

    def __init__(self, vertices: Iterable[int], closed: bool = False):
        object.__setattr__(self, "vertices", tuple(int(v) for v in vertices))
        object.__setattr__(self, "closed", bool(closed))
        if not self.vertices:
            raise ValidationError("a trail needs at least one vertex")

    def __len__(self) -> int:
        return len(self.vertices)

    def edges(self) -> list[tuple[int, int]]:
        vs = self.vertices
        es = list(zip(vs, vs[1:]))
        if self.closed and len(vs) > 1:
            es.append((vs[-1], vs[0]))
        return es


def scaled_cost(cost: np.ndarray, order: Sequence[int], closed: bool = True) -> int:
    """Sum of scaled edge costs along ``order`` (wrapping when ``closed``)."""
    o = np.asarray(order, dtype=np.intp)
    if len(o) < 2:
        return 0
    total = int(cost[o[:-1], o[1:]].sum())
    if closed:
        total += int(cost[o[-1], o[0]])
    return total


def tour_cost(instance: Instance, tour: Tour | Sequence[int]) -> Fraction | int:
    if not isinstance(tour, Tour):
        tour = Tour(tour)
    tour.validate(instance.n)
    return instance.real(scaled_cost(instance.cost, tour.order))


def trail_cost(instance: Instance, trail: Trail) -> Fraction | int:
    return instance.real(scaled_cost(instance.cost, trail.vertices, closed=trail.closed))


def check_metric(instance: Instance, max_violations: int = 10) -> list[tuple[int, int, int]]:
    """Return up to ``max_violations`` triples with ``c(u,v) + c(v,w) < c(u,w)``.

    The result is sorted; an empty list means the instance is metric, in which
    case ``instance.metric_checked`` is set accordingly.
    """
    C = instance.cost
    n = instance.n
    found: list[tuple[int, int, int]] = []
    any_violation = False
    for v in range(n):
        via = C[:, v, None] + C[None, v, :]
        bad = via < C
        bad[v, :] = False
        bad[:, v] = False
        if bad.any():
            any_violation = True
            if len(found) < max_violations:
                for u, w in np.argwhere(bad)[: max_violations - len(found)]:
                    found.append((int(u), v, int(w)))
    instance.metric_checked = MetricStatus.VIOLATING if any_violation else MetricStatus.METRIC
    return sorted(found)


def is_metric(instance: Instance) -> bool:
    if instance.metric_checked is MetricStatus.UNKNOWN:
        check_metric(instance, max_violations=1)
    return instance.metric_checked is MetricStatus.METRIC


@dataclass(frozen=True)
class AsymmetryReport:
    symmetric_pair_fraction: Fraction
    median_factor: Fraction | None
    max_factor: Fraction | None
    zero_cost_edge_fraction: Fraction
    asymmetric_pairs: int = 0
    pairs: int = 0


@dataclass(frozen=True)
class PairFactor:
    u: int
    v: int
    factor: Fraction | None  # None: undefined (zero cost, no substitute)


def pair_factor(a: int, b: int, zsub: Fraction | None) -> Fraction | None:
    if a == 0 or b == 0:
        if zsub is None:
            return None
        x = a or zsub
        y = b or zsub
    else:
        x, y = a, b
    r = Fraction(x) / Fraction(y)
    return max(r, 1 / r)


def asymmetric_pair_factors(instance: Instance, zero_substitute: Fraction | None = ZERO_SUBSTITUTE) -> list[PairFactor]:
    """Asymmetry factor of every unordered pair with unequal directions.

    ``zero_substitute`` is in real cost units; it only enters the factor
    computation and never touches the instance.
    """
    C = instance.cost
    iu, ju = np.triu_indices(instance.n, k=1)
    a = C[iu, ju]
    b = C[ju, iu]
    asym = np.flatnonzero(a != b)
    zsub = None if zero_substitute is None else Fraction(zero_substitute) * instance.scale
    return [
        PairFactor(int(iu[t]), int(ju[t]), pair_factor(int(a[t]), int(b[t]), zsub))
        for t in asym
    ]


def asymmetry_report(instance: Instance, zero_substitute: Fraction | None = None) -> AsymmetryReport:
    """Symmetric-pair share, median and max asymmetry factor, zero-cost share.

    Factors are taken over the asymmetric pairs only; with the default
    ``zero_substitute=None`` pairs involving a zero cost have no factor.
    """
    n = instance.n
    pairs = n * (n - 1) // 2
    factors = asymmetric_pair_factors(instance, zero_substitute)
    defined = sorted(f.factor for f in factors if f.factor is not None)
    zero_edges = int((instance.cost == 0).sum()) - n
    return AsymmetryReport(
        symmetric_pair_fraction=Fraction(pairs - len(factors), pairs) if pairs else Fraction(1),
        median_factor=Fraction(median(defined)) if defined else None,
        max_factor=defined[-1] if defined else None,
        zero_cost_edge_fraction=Fraction(zero_edges, n * (n - 1)) if n > 1 else Fraction(0),
        asymmetric_pairs=len(factors),
        pairs=pairs,
    )


def exceeds(factor: Fraction | None, beta) -> bool:
    """``factor > beta`` with undefined factors treated as infinite."""
    if beta == BETA_INF:
        return False
    if factor is None:
        return True
    return factor > Fraction(beta)


def beta_asymmetric_pairs(
    instance: Instance, beta=1, zero_substitute: Fraction | None = ZERO_SUBSTITUTE
) -> set[tuple[int, int]]:
    """Unordered pairs ``(u, v)``, ``u < v``, whose asymmetry factor exceeds ``beta``."""
    if beta != BETA_INF and Fraction(beta) < 1:
        raise ValidationError("beta must be at least 1")
    if beta == BETA_INF:
        return set()
    return {(f.u, f.v) for f in asymmetric_pair_factors(instance, zero_substitute) if exceeds(f.factor, beta)}


def max_pair_ratio(instance: Instance, vertices: Sequence[int] | None = None) -> Fraction | float:
    """Largest ``c(u,v)/c(v,u)`` over pairs in ``vertices`` (``inf`` if one side is 0)."""
    idx = list(range(instance.n)) if vertices is None else list(vertices)
    sub = instance.cost[np.ix_(idx, idx)]
    best: Fraction | float = Fraction(1)
    for i in range(len(idx)):
        for j in range(i + 1, len(idx)):
            a, b = int(sub[i, j]), int(sub[j, i])
            if a == b:
                continue
            if min(a, b) == 0:
                return math.inf
            best = max(best, Fraction(max(a, b), min(a, b)))
    return best
