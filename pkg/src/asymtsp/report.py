"""Run reports shared by the solvers and the experiment harness."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

ALGORITHMS = ("gen-christofides", "gen-treedouble")
ALIASES = {"gc": "gen-christofides", "gtd": "gen-treedouble"}


@dataclass(frozen=True)
class RunReport:
    """Outcome of one solver run.

    ``ratio`` is ``tour_cost / reference`` and is present exactly when a
    reference optimum is.  ``bound`` is the guarantee implied by the realized
    asymmetry of the part solved approximately (``None`` when the kernel tour
    came from outside and its quality is unknown).
    """

    instance: str
    algorithm: str
    beta: Fraction | float
    fraction: Fraction | None = None
    asym_fraction: Fraction | None = None
    kernel_size: int = 0
    parameter: int = 0
    tour_cost: Fraction | int | None = None
    reference: Fraction | int | None = None
    ref_source: str | None = None
    ratio: Fraction | None = None
    bound: Fraction | float | None = None
    wall_time_ms: float | None = None
    seed: int | None = None
    root: int | None = None
    tour: tuple[int, ...] = field(default=(), repr=False)
    error: str | None = None

    def __post_init__(self):
        if self.kernel_size < 0:
            raise ValueError("kernel_size must be non-negative")
        if (self.ratio is None) != (self.reference is None or self.tour_cost is None):
            raise ValueError("ratio must be present exactly when a reference is")

    def with_reference(self, reference, source: str) -> RunReport:
        if reference is None or self.tour_cost is None:
            return replace(self, reference=None, ref_source=None, ratio=None)
        # an optimum of 0 only happens when the tour also costs 0
        ratio = Fraction(self.tour_cost) / Fraction(reference) if reference else Fraction(1)
        return replace(self, reference=reference, ref_source=source, ratio=ratio)

    @property
    def ok(self) -> bool:
        return self.error is None


def within_bound(report: RunReport) -> bool:
    if report.ratio is None or report.bound is None or report.bound == math.inf:
        return True
    return report.ratio <= report.bound
