"""Parameterized approximation algorithms for metric ATSP.

Two algorithms are provided, both built around a small kernel that is
solved exactly:

* :func:`gc_solve`, generalized Christofides, kernel = vertex cover of the
  beta-asymmetric pairs plus one glue vertex;
* :func:`gtd_solve`, generalized tree doubling, kernel = contraction of the
  arborescence components left after removing beta-one-way edges.
"""

from .errors import AsymTSPError, CapacityError, NotMetricError, ParseError, ValidationError
from .exact import brute_force_tour, held_karp, min_weight_perfect_matching, vertex_cover_exact
from .gen_christofides import GCKernel, gc_kernelize, gc_lift, gc_solve
from .gen_treedouble import GTDKernel, GTDPlan, adjusted_tree_doubling, gtd_kernelize, gtd_lift, gtd_solve
from .generators import gen_cycle_family, gen_gk, gen_random_metric, metric_lift
from .harness import beta_from_fraction, emit, sweep
from .instance import (
    BETA_INF,
    Instance,
    Tour,
    Trail,
    asymmetry_report,
    check_metric,
    tour_cost,
)
from .metric import contract, metric_closure, metric_shortcut, polygon_complete
from .report import RunReport
from .spanning import msa
from .tsplib import OptimaRegistry, parse_tour, parse_tsplib, read_tsplib, reference_optimum, write_tour, write_tsplib

__version__ = "0.1.0"
