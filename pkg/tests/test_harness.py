import itertools
import random
from fractions import Fraction

import pytest

from forestdecomp.decomposer import exact_decompose
from forestdecomp.density import check_feasible, find_overfull, fractional_arboricity
from forestdecomp.harness import (
    EnumerationAborted,
    EnumSpec,
    RejectionBudgetExceeded,
    canonical_form,
    enumerate_multigraphs,
    graph_from_key,
    partition,
    pendant_transform,
    random_instance,
    sharpness_scan,
    verify_ndt,
)
from forestdecomp.multigraph import Instance, Multigraph
import oracles
from graphs import complete


def count(spec):
    return sum(1 for _ in enumerate_multigraphs(spec))


@pytest.mark.parametrize("spec, expected", [
    (EnumSpec(2, 2, min_vertices=2), 2),
    (EnumSpec(3, 1, min_vertices=3), 2),
    (EnumSpec(4, 1, min_vertices=4), 6),
    (EnumSpec(6, 1, min_vertices=6), 112),
    (EnumSpec(6, 1, connected=False, min_vertices=6), 156),
    (EnumSpec(3, 3, connected=False, min_vertices=3), 20),
    (EnumSpec(2, 2), 3),
])
def test_enumeration_counts(spec, expected):
    assert count(spec) == expected


def test_canonical_form_is_invariant():
    rng = random.Random(4)
    for _ in range(200):
        n = rng.randint(2, 6)
        mult = {p: rng.randint(0, 2) for p in itertools.combinations(range(n), 2)}
        g = Multigraph.from_mult(n, {p: m for p, m in mult.items() if m})
        perm = list(range(n))
        rng.shuffle(perm)
        h = Multigraph.from_mult(n, {tuple(sorted((perm[u], perm[v]))): m for u, v, m in g.edges})
        key = canonical_form(g)
        assert key == canonical_form(h)
        assert oracles.isomorphic(graph_from_key(key), g)


def test_enumeration_has_no_isomorphic_pairs():
    graphs = list(enumerate_multigraphs(EnumSpec(4, 2, min_vertices=4)))
    for g, h in itertools.combinations(graphs, 2):
        assert not oracles.isomorphic(g, h)
    # and the stream is complete: every connected labelled graph appears
    keys = {canonical_form(g) for g in graphs}
    for ms in itertools.product(range(3), repeat=6):
        g = Multigraph.from_mult(4, {p: m for p, m in zip(itertools.combinations(range(4), 2), ms) if m})
        if g.is_connected():
            assert canonical_form(g) in keys


def test_edge_bounds_prune():
    spec = EnumSpec(4, 2, max_total_edges=4)
    assert all(g.num_edges <= 4 for g in enumerate_multigraphs(spec))
    spec = EnumSpec(4, 3, overfull_k=1)
    assert all(g.num_edges <= 2 * (g.n - 1) for g in enumerate_multigraphs(spec))


def test_budget_aborts_with_progress():
    with pytest.raises(EnumerationAborted) as info:
        list(enumerate_multigraphs(EnumSpec(5, 2, budget=50)))
    assert info.value.progress["yielded"] > 0


@pytest.mark.parametrize("k, d", [(1, 1), (1, 2), (2, 2)])
def test_verify_small(k, d):
    rep = verify_ndt(k, d, EnumSpec(5, k + 1, overfull_k=k))
    assert rep.ok and rep.satisfying > 0
    assert rep.decomposed + len(rep.failures) == rep.satisfying


def test_verify_exact_only_outside_constructive_scope():
    rep = verify_ndt(2, 1, EnumSpec(4, 3, overfull_k=2))
    assert rep.ok and rep.constructive_checked == 0


def test_verify_jobs_merge_is_deterministic():
    spec = EnumSpec(4, 2, overfull_k=1)
    a = verify_ndt(1, 2, spec, jobs=1)
    b = verify_ndt(1, 2, spec, jobs=3)
    assert a.lines() == b.lines()


def test_partition_is_stable():
    graphs = list(enumerate_multigraphs(EnumSpec(4, 1)))
    forward = [sorted(b) for b in partition(graphs, 3)]
    backward = [sorted(b) for b in partition(list(reversed(graphs)), 3)]
    assert forward == backward
    assert sum(map(len, forward)) == len(graphs)


def test_sharpness_k1_d1():
    rep = sharpness_scan(1, 1, EnumSpec(5, 2, overfull_k=1))
    assert rep.violations == [] and rep.rejected > 0
    assert rep.min_arb > Fraction(4, 3)


def test_k4_rejected_for_k1_d1():
    assert find_overfull(complete(4), 1) is None
    assert exact_decompose(Instance.uniform(complete(4), 1, 1)) is None
    assert fractional_arboricity(complete(4))[0] == 2


def test_random_instance_is_deterministic_and_valid():
    a = random_instance(1, 2, 3, 6, 12)
    assert a == random_instance(1, 2, 3, 6, 12)
    for seed in range(30):
        inst = random_instance(seed, 2, 3, 6, 12)
        assert check_feasible(inst)[0]
        assert find_overfull(inst.graph, 2) is None


def test_random_instance_budget():
    with pytest.raises(RejectionBudgetExceeded):
        random_instance(0, 1, 1, 3, 3, max_tries=0)


def test_pendant_transform():
    g = Multigraph(2, [(0, 1, 1)])
    inst = Instance(g, 2, 3, (1, 3))
    uni, host = pendant_transform(inst)
    assert uni.graph.n == 4 and host == {2: 0, 3: 0}
    assert uni.graph.mult(0, 2) == 3 and uni.f == (3, 3, 3, 3)


def _has_v0_edge(inst):
    return any(inst.f[u] == 0 and inst.f[v] == 0 for u, v, _ in inst.graph.edges)


def test_pendant_transform_feasibility_relation():
    rng = random.Random(8)
    checked = 0
    for _ in range(300):
        k, d, n = rng.choice((1, 2)), rng.randint(1, 3), rng.randint(2, 5)
        mult = {p: rng.randint(0, k + 1) for p in itertools.combinations(range(n), 2)}
        g = Multigraph.from_mult(n, {p: m for p, m in mult.items() if m})
        inst = Instance(g, k, d, tuple(rng.randint(0, d) for _ in range(n)))
        uni, _ = pendant_transform(inst)
        orig, transformed = check_feasible(inst)[0], check_feasible(uni)[0]
        # the transformed instance is never more permissive
        assert orig or not transformed
        if not _has_v0_edge(inst):
            assert orig == transformed
            checked += 1
    assert checked > 50


def test_pendant_transform_keeps_decomposability():
    rng = random.Random(9)
    for _ in range(60):
        k, d, n = rng.choice((1, 2)), rng.randint(1, 2), rng.randint(2, 4)
        mult = {p: rng.randint(0, k + 1) for p in itertools.combinations(range(n), 2)}
        g = Multigraph.from_mult(n, {p: m for p, m in mult.items() if m})
        inst = Instance(g, k, d, tuple(rng.randint(0, d) for _ in range(n)))
        uni, _ = pendant_transform(inst)
        assert (exact_decompose(inst) is None) == (exact_decompose(uni) is None)


def test_unordered_enumeration_yields_same_classes():
    spec = dict(max_vertices=4, max_multiplicity=2, min_vertices=3)
    ordered = [canonical_form(g) for g in enumerate_multigraphs(EnumSpec(**spec))]
    unordered = [canonical_form(g) for g in enumerate_multigraphs(EnumSpec(**spec, ordered=False))]
    assert len(unordered) == len(set(unordered)) and sorted(unordered) == sorted(ordered)
