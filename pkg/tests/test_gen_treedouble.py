import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from asymtsp import CapacityError, Instance, NotMetricError, Tour, ValidationError
from asymtsp.exact import held_karp
from asymtsp.gen_treedouble import (
    adjusted_tree_doubling,
    gtd_kernelize,
    gtd_lift,
    gtd_plan,
    gtd_solve,
)
from asymtsp.generators import gen_cycle_family, gen_random_metric
from asymtsp.instance import scaled_cost
from asymtsp.spanning import Component, msa
from asymtsp.report import within_bound

from conftest import STRENGTHS, enumerate_optimum


def _path_component(n):
    return Component(tuple(range(n)), tuple((i, i + 1) for i in range(n - 1)))


def test_tree_doubling_path_ends():
    comp = _path_component(5)
    t = adjusted_tree_doubling(comp, 0, 4)
    assert t.vertices == (0, 1, 2, 3, 4) and not t.closed
    t = adjusted_tree_doubling(comp, 2, 2)
    assert t.closed and t.vertices[0] == 2 and sorted(t.vertices) == list(range(5))


def test_tree_doubling_star():
    comp = Component((0, 1, 2, 3), ((0, 1), (0, 2), (0, 3)))
    t = adjusted_tree_doubling(comp, 1, 3)
    assert t.vertices[0] == 1 and t.vertices[-1] == 3
    assert sorted(t.vertices) == [0, 1, 2, 3]


def test_tree_doubling_single_and_errors():
    comp = Component((4,), ())
    assert adjusted_tree_doubling(comp, 4, 4).vertices == (4,)
    with pytest.raises(ValidationError):
        adjusted_tree_doubling(_path_component(3), 0, 7)


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_tree_doubling_random_trees(data):
    n = data.draw(st.integers(1, 12))
    parents = [data.draw(st.integers(0, v - 1)) for v in range(1, n)]
    comp = Component(tuple(range(n)), tuple((p, v) for v, p in zip(range(1, n), parents)))
    a = data.draw(st.integers(0, n - 1))
    b = data.draw(st.integers(0, n - 1))
    t = adjusted_tree_doubling(comp, a, b)
    assert sorted(t.vertices) == list(range(n))
    assert t.vertices[0] == a
    if a != b:
        assert t.vertices[-1] == b


def test_rejects_non_metric(triangle_violation):
    with pytest.raises(NotMetricError):
        gtd_solve(triangle_violation)


def test_symmetric_instance_has_k_zero():
    inst = gen_random_metric(8, 1, 0)
    plan = gtd_plan(inst)
    assert plan.parameter_k == 0
    assert plan.endpoints == ((0, 0),)
    rep = gtd_solve(inst)
    assert rep.kernel_size == 0 and rep.root == 0
    assert rep.bound == 3


def test_capacity_error_names_parameter():
    inst = gen_random_metric(10, 3, Fraction(1, 2))
    with pytest.raises(CapacityError, match="k="):
        gtd_solve(inst, beta=1, kernel_limit=1)


def test_infinite_beta_removes_nothing():
    inst = gen_random_metric(9, 4, Fraction(1, 2))
    assert gtd_plan(inst, beta=math.inf).parameter_k == 0


@pytest.mark.parametrize("m", [3, 4, 10])
def test_cycle_family_kernel(m):
    inst, arb, reps = gen_cycle_family(m)
    kern = gtd_kernelize(inst, arb, rep_mode="injected", representatives=reps)
    assert kern.parameter_k == 1
    assert kern.representatives == reps
    kt = held_karp(kern.kernel_instance)
    tour = gtd_lift(inst, kern, kt)
    assert scaled_cost(inst.cost, tour.order) == 6 * m - 4


def test_cycle_family_optimum():
    inst, _, _ = gen_cycle_family(4)
    assert enumerate_optimum(inst) == 8


def test_kernelize_representative_errors():
    inst, arb, reps = gen_cycle_family(3)
    with pytest.raises(ValidationError):
        gtd_kernelize(inst, arb, rep_mode="injected", representatives=[0, 1])
    with pytest.raises(ValidationError):
        gtd_kernelize(inst, arb, rep_mode="injected")
    with pytest.raises(ValidationError):
        gtd_kernelize(inst, arb, rep_mode="other")
    lowest = gtd_kernelize(inst, arb)
    assert lowest.representatives == (0, 3)


@pytest.mark.parametrize("seed", range(120))
@pytest.mark.parametrize("beta", [1, Fraction(3, 2), 2])
def test_ratio_within_bound(seed, beta):
    n = 2 + seed % 8
    inst = gen_random_metric(n, seed, STRENGTHS[seed % 3])
    rep = gtd_solve(inst, beta)
    Tour(rep.tour).validate(n)
    opt = enumerate_optimum(inst)
    assert opt <= rep.tour_cost * inst.scale <= (2 + beta) * opt
    assert within_bound(rep.with_reference(inst.real(opt), "exact"))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 8), st.sampled_from(STRENGTHS))
def test_kernel_optimum_not_above_instance_optimum(seed, n, strength):
    inst = gen_random_metric(n, seed, strength)
    kern = gtd_kernelize(inst, msa(inst, 0))
    kopt = scaled_cost(kern.kernel_instance.cost, held_karp(kern.kernel_instance).order)
    assert kopt <= enumerate_optimum(inst)
    tour = gtd_lift(inst, kern, held_karp(kern.kernel_instance))
    tour.validate(n)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 7))
def test_best_root_never_worse_arborescence(seed, n):
    inst = gen_random_metric(n, seed, Fraction(1, 2))
    best = gtd_plan(inst, root="best").arborescence
    assert best.total_cost <= msa(inst, 0).total_cost
    assert gtd_solve(inst, root="best").root == best.root


def test_meta_tour_endpoints_are_cheapest_cross_edges():
    inst = gen_random_metric(9, 12, Fraction(1, 2))
    plan = gtd_plan(inst)
    order = plan.meta_tour.order
    C = inst.cost
    for a, b in zip(order, order[1:] + order[:1]):
        if a == b:
            continue
        out_v = plan.endpoints[a][1]
        in_v = plan.endpoints[b][0]
        assert C[out_v, in_v] == plan.meta.instance.cost[a, b]
