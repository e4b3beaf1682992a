"""Generalized Christofides.

The beta-asymmetric pairs of a metric instance form an undirected graph.
A vertex cover of it plus one glue vertex outside the cover is solved
exactly; everything outside the cover is beta-symmetric and goes to
:func:`relaxed_christofides`.  The two tours are joined at the glue vertex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .christofides import christofides_bound, relaxed_christofides
from .errors import CapacityError, NotMetricError, ValidationError
from .exact import HELD_KARP_LIMIT, held_karp, vertex_cover_2approx, vertex_cover_exact, vertex_cover_lower_bound
from .instance import (
    ZERO_SUBSTITUTE,
    Instance,
    Tour,
    Trail,
    beta_asymmetric_pairs,
    is_metric,
    max_pair_ratio,
    tour_cost,
)
from .metric import metric_shortcut
from .report import RunReport

COVER_MODES = ("exact", "approx", "injected")


@dataclass(frozen=True)
class GCKernel:
    kernel_instance: Instance
    kernel_vertices: tuple[int, ...]
    glue_vertex: int | None
    cover: frozenset[int]
    complement_vertices: tuple[int, ...]
    beta: Fraction | float
    parameter_z: int

    @property
    def size(self) -> int:
        """Kernel size as reported in experiment tables (0 for an empty cover)."""
        return len(self.kernel_vertices) if self.cover else 0


def require_metric(instance: Instance) -> None:
    if not is_metric(instance):
        raise NotMetricError(f"instance {instance.name!r} violates the triangle inequality; apply metric_closure first")


def gc_kernelize(
    instance: Instance,
    beta=1,
    cover_mode: str = "exact",
    injected_cover: Iterable[int] | None = None,
    claim_minimum: bool = False,
    zero_substitute: Fraction | None = ZERO_SUBSTITUTE,
) -> GCKernel:
    require_metric(instance)
    pairs = sorted(beta_asymmetric_pairs(instance, beta, zero_substitute))
    if cover_mode == "exact":
        cover = vertex_cover_exact(pairs)
    elif cover_mode == "approx":
        cover = vertex_cover_2approx(pairs)
    elif cover_mode == "injected":
        if injected_cover is None:
            raise ValidationError("cover_mode 'injected' needs a cover")
        cover = vertex_cover_exact(pairs, injected=injected_cover, claim_minimum=claim_minimum)
    else:
        raise ValidationError(f"unknown cover mode {cover_mode!r}")
    if any(not 0 <= v < instance.n for v in cover):
        raise ValidationError("cover contains vertices outside the instance")

    complement = tuple(v for v in range(instance.n) if v not in cover)
    glue = complement[0] if complement else None
    kernel_vertices = tuple(sorted(cover | {glue})) if glue is not None else tuple(range(instance.n))
    inside = set(complement)
    assert not any(u in inside and v in inside for u, v in pairs)
    return GCKernel(
        kernel_instance=instance.induced(kernel_vertices, name=f"{instance.name}/kernel"),
        kernel_vertices=kernel_vertices,
        glue_vertex=glue,
        cover=frozenset(cover),
        complement_vertices=complement,
        beta=beta,
        parameter_z=len(cover),
    )


def gc_lift(
    instance: Instance,
    kernel: GCKernel,
    kernel_tour: Tour,
    injected_mst: Iterable[tuple[int, int]] | None = None,
) -> Tour:
    """Join the kernel tour with a relaxed Christofides tour of the complement."""
    kernel_tour.validate(kernel.kernel_instance.n)
    outer = Tour(kernel.kernel_vertices[i] for i in kernel_tour)
    glue = kernel.glue_vertex
    if glue is None or len(kernel.complement_vertices) == 1:
        return outer
    side = relaxed_christofides(instance, kernel.complement_vertices, injected_mst)
    walk = outer.rotate_to(glue).order + side.rotate_to(glue).order[1:]
    return Tour(metric_shortcut(instance, Trail(walk, closed=True)).vertices)


def gc_bound(instance: Instance, kernel: GCKernel, gamma=1) -> Fraction | float:
    """``gamma + (3/4)(1 + b)`` with ``b`` the largest ratio left outside the cover."""
    b = max_pair_ratio(instance, kernel.complement_vertices) if kernel.complement_vertices else 1
    if b == math.inf:
        return math.inf
    return gamma + christofides_bound(b)


def gc_solve(
    instance: Instance,
    beta=1,
    cover_mode: str = "exact",
    kernel_limit: int = HELD_KARP_LIMIT,
    injected_cover: Iterable[int] | None = None,
    injected_mst: Iterable[tuple[int, int]] | None = None,
    kernel_tour: Tour | None = None,
    zero_substitute: Fraction | None = ZERO_SUBSTITUTE,
    claim_minimum: bool = False,
) -> RunReport:
    """Kernelize, solve the kernel with Held-Karp, lift.

    A ``kernel_tour`` (in kernel-local indices) replaces the exact kernel
    solve; the report then carries no bound since its quality is unknown.
    """
    if kernel_tour is None:
        # a matching among the asymmetric pairs bounds every cover from below,
        # so hopeless kernels are rejected before the cover search
        require_metric(instance)
        lb = vertex_cover_lower_bound(beta_asymmetric_pairs(instance, beta, zero_substitute))
        if min(lb + 1, instance.n) > kernel_limit:
            raise CapacityError(
                f"kernel of {instance.name} has at least {min(lb + 1, instance.n)} vertices (z>={lb}), "
                f"above the limit of {kernel_limit}"
            )
    kernel = gc_kernelize(instance, beta, cover_mode, injected_cover, claim_minimum, zero_substitute)
    if kernel_tour is None:
        size = kernel.kernel_instance.n
        if size > kernel_limit:
            raise CapacityError(
                f"kernel of {instance.name} has {size} vertices (z={kernel.parameter_z}), above the limit of {kernel_limit}"
            )
        kernel_tour = held_karp(kernel.kernel_instance, limit=kernel_limit)
        bound = gc_bound(instance, kernel)
    else:
        bound = None
    tour = gc_lift(instance, kernel, kernel_tour, injected_mst)
    return RunReport(
        instance=instance.name,
        algorithm="gen-christofides",
        beta=beta,
        kernel_size=kernel.size,
        parameter=kernel.parameter_z,
        tour_cost=tour_cost(instance, tour),
        bound=bound,
        tour=tour.order,
    )
