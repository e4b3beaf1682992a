from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from asymtsp import Instance, ValidationError, check_metric
from asymtsp.generators import gen_random_metric
from asymtsp.instance import Trail, trail_cost
from asymtsp.metric import (
    MetaGraph,
    PartialGraph,
    Partition,
    contract,
    floyd_warshall,
    metric_closure,
    metric_shortcut,
    polygon_complete,
)
from asymtsp.exact import Multigraph, eulerian_trail

from conftest import enumerate_optimum, random_nonmetric


def test_closure_idempotent_on_metric():
    inst = gen_random_metric(8, 0, Fraction(1, 2))
    assert metric_closure(inst).same_costs(inst)


def test_closure_three_cycle():
    inst = Instance.from_matrix([[0, 1, 10], [10, 0, 1], [1, 10, 0]])
    c = metric_closure(inst)
    assert c.c(1, 0) == 2 and c.c(2, 1) == 2 and c.c(0, 2) == 2


@given(st.integers(0, 10_000), st.integers(2, 9))
@settings(max_examples=40)
def test_closure_properties(seed, n):
    inst = random_nonmetric(seed, n)
    c = metric_closure(inst)
    assert (c.cost <= inst.cost).all()
    assert check_metric(c) == []
    assert metric_closure(c).same_costs(c)


def test_floyd_warshall_matches_path_enumeration():
    inst = random_nonmetric(5, 5)
    D = floyd_warshall(inst.cost)
    import itertools

    for u, v in itertools.permutations(range(5), 2):
        others = [w for w in range(5) if w not in (u, v)]
        best = int(inst.cost[u, v])
        for r in range(1, 4):
            for mid in itertools.permutations(others, r):
                path = (u, *mid, v)
                best = min(best, sum(int(inst.cost[a, b]) for a, b in zip(path, path[1:])))
        assert D[u, v] == best


def test_shortcut_drops_repeats():
    assert metric_shortcut(None, Trail([0, 1, 0, 2])).vertices == (0, 1, 2)
    assert metric_shortcut(None, Trail([3, 1, 2])).vertices == (3, 1, 2)


def test_shortcut_pins_last_vertex():
    out = metric_shortcut(None, Trail([0, 2, 1, 2, 3, 2]), pin_endpoints=True)
    assert out.vertices == (0, 1, 3, 2)


def test_shortcut_degenerate():
    assert metric_shortcut(None, Trail([4, 4]), pin_endpoints=True).vertices == (4,)


@pytest.mark.parametrize("seed", range(20))
def test_shortcut_of_doubled_tree_circuit(seed):
    rng = np.random.default_rng(seed)
    inst = gen_random_metric(8, seed, Fraction(1, 2))
    edges = [(int(rng.integers(0, v)), v) for v in range(1, 8)]
    walk = eulerian_trail(Multigraph(8, [(u, v, 2) for u, v in edges]), 0, 0).vertices
    circuit = Trail(walk[:-1], closed=True)
    out = metric_shortcut(inst, circuit)
    assert sorted(out.vertices) == list(range(8))
    assert trail_cost(inst, out) <= trail_cost(inst, circuit)


def test_partition_validation():
    p = Partition([[3, 1], [0], [2]])
    assert p.blocks == ((0,), (1, 3), (2,))
    assert p.block_of() == [0, 1, 2, 1]
    with pytest.raises(ValidationError):
        Partition([[0, 1], [1, 2]])
    with pytest.raises(ValidationError):
        Partition([[0], [2]], n=3)
    with pytest.raises(ValidationError):
        Partition([[0], []])


def test_contract_singletons_is_identity():
    inst = gen_random_metric(6, 2, Fraction(1, 2))
    meta = contract(inst, Partition([[v] for v in range(6)]))
    assert isinstance(meta, MetaGraph)
    assert meta.instance.same_costs(inst)


def test_contract_takes_minimum_cross_cost():
    inst = Instance.from_matrix([[0, 5, 2, 9], [1, 0, 7, 3], [8, 4, 0, 6], [2, 5, 1, 0]])
    meta = contract(inst, Partition([[0, 1], [2, 3]]))
    assert meta.instance.cost.tolist() == [[0, 2], [2, 0]]


def test_contract_single_block():
    inst = gen_random_metric(4, 0)
    assert contract(inst, Partition([range(4)])).n == 1


def test_contract_never_claims_metric():
    inst = gen_random_metric(6, 1, Fraction(1, 2))
    meta = contract(inst, Partition([[0, 1, 2], [3], [4, 5]]))
    assert meta.instance.metric_checked.value == "unknown"


@pytest.mark.parametrize("seed", range(30))
def test_minor_optimum_at_most_instance_optimum(seed):
    rng = np.random.default_rng(seed)
    n = 4 + seed % 5
    inst = gen_random_metric(n, seed, Fraction(1, 2))
    labels = rng.integers(0, 3, size=n)
    blocks = [np.flatnonzero(labels == b).tolist() for b in range(3)]
    meta = contract(inst, Partition([b for b in blocks if b]))
    assert enumerate_optimum(meta.instance) <= enumerate_optimum(inst)


def test_polygon_complete_keeps_complete_metric_input():
    inst = gen_random_metric(5, 3, Fraction(1, 5))
    edges = {(u, v): int(inst.cost[u, v]) for u in range(5) for v in range(5) if u != v}
    assert polygon_complete(PartialGraph(5, edges)).same_costs(inst)


def test_polygon_complete_fills_paths():
    pg = PartialGraph(3, {(0, 1): 1, (1, 2): 2, (2, 0): Fraction(1, 2)})
    inst = polygon_complete(pg)
    assert inst.c(0, 2) == 3 and inst.c(1, 0) == Fraction(5, 2)
    assert check_metric(inst) == []


def test_polygon_complete_errors():
    with pytest.raises(ValidationError, match="strongly connected"):
        polygon_complete(PartialGraph(3, {(0, 1): 1, (1, 0): 1}))
    with pytest.raises(ValidationError, match=r"\(0, 2\)"):
        polygon_complete(PartialGraph(3, {(0, 1): 1, (1, 2): 1, (0, 2): 5, (2, 0): 1}))
    with pytest.raises(ValidationError):
        PartialGraph(2, {(0, 0): 1})


@given(st.integers(0, 10_000))
@settings(max_examples=30)
def test_polygon_complete_preserves_edges_and_shortest_paths(seed):
    rng = np.random.default_rng(seed)
    n = 6
    edges = {}
    for i in range(n):  # a Hamiltonian cycle keeps it strongly connected
        edges[(i, (i + 1) % n)] = int(rng.integers(1, 10))
    for _ in range(6):
        u, v = map(int, rng.choice(n, 2, replace=False))
        edges[(u, v)] = int(rng.integers(1, 10))
    M = np.full((n, n), 1 << 40)
    np.fill_diagonal(M, 0)
    for (u, v), c in edges.items():
        M[u, v] = c
    D = floyd_warshall(M)
    keep = {e: c for e, c in edges.items() if D[e] == c}  # drop edges that break the polygon inequality
    for i in range(n):
        keep.setdefault((i, (i + 1) % n), int(D[i, (i + 1) % n]))
    inst = polygon_complete(PartialGraph(n, keep))
    for (u, v), c in keep.items():
        assert inst.cost[u, v] == c
    assert check_metric(inst) == []
    assert (inst.cost == D).all()
