import pytest
from hypothesis import given, settings, strategies as st

from ntss.conditions import (
    NotKernelizedError,
    SentinelConstraint,
    classify,
    decide_target_set_fast,
    extract_conditions,
    satisfies,
)
from ntss.randgen import Lcg, random_instance
from ntss.simulate import is_target_set

from helpers import cycle, named_fixtures, path, rich_kernels, sentinel_rich, spider, subsets


def _conditions(inst):
    return extract_conditions(classify(inst), inst.graph)


def test_classify_c5():
    cls = classify(cycle(5))
    assert [(p.U, p.closed_nbhd) for p in cls.p_components] == [({1, 2, 3, 4, 5},) * 2]
    assert cls.q_components == () and cls.sentinels == ()


def test_classify_c4():
    (q,) = classify(cycle(4)).q_components
    assert (q.A, q.B, q.A_bar, q.B_bar) == ({1, 3}, {2, 4}, {1, 3}, {2, 4})


def test_classify_spider():
    cls = classify(spider())
    assert cls.sentinels == (1,)
    assert cls.p_components == () and cls.q_components == ()


def test_extract_examples():
    assert _conditions(cycle(5)).hitting == ({1, 2, 3, 4, 5},)
    assert _conditions(cycle(4)).pair_hitting == (({1, 3}, {2, 4}),)
    assert _conditions(spider()).sentinel_constraints == (
        SentinelConstraint(1, ((2, frozenset({1, 3})), (4, frozenset({1, 5})))),
    )


def test_satisfies_examples():
    assert not satisfies(_conditions(cycle(4)), {1})
    assert not is_target_set(cycle(4), {1})
    assert satisfies(_conditions(cycle(5)), {1})
    cond = _conditions(spider())
    # c=1, b1=2, a1=3
    assert satisfies(cond, {1, 2, 3}) and is_target_set(spider(), {1, 2, 3})
    assert not satisfies(cond, {1, 2}) and not is_target_set(spider(), {1, 2})


def test_decide_fast_examples():
    inst = path(4, [0, 2, 2, 0])
    assert not decide_target_set_fast(inst, {1, 2, 3})
    assert decide_target_set_fast(inst, {1, 2, 3, 4})
    assert decide_target_set_fast(path(4), {1, 2})


def test_refuses_unkernelized():
    with pytest.raises(NotKernelizedError):
        classify(path(4, [0, 2, 2, 0]))


def test_q_component_sets_by_definition():
    for k in rich_kernels(120, 3, 8, seed=21):
        g = k.graph
        for q in classify(k).q_components:
            N = lambda S: {v for u in S for v in g.adj[u]}
            A1 = N(q.B) - (N(q.A) | q.A)
            B1 = N(q.A) - (N(q.B) | q.B)
            C = N(q.A) & N(q.B)
            assert q.A_bar == q.A | A1 | C and q.B_bar == q.B | B1 | C
            assert q.A_bar & q.B_bar == C | (q.A & q.B_bar)
            assert min(q.U) in q.A


def _equivalence(inst):
    cond = _conditions(inst)
    for X in subsets(range(1, inst.n + 1)):
        assert satisfies(cond, X) == is_target_set(inst, X), sorted(X)


@pytest.mark.parametrize("name", sorted(named_fixtures()))
def test_fixture_equivalence(name):
    from ntss.kernel import kernelize

    _equivalence(kernelize(named_fixtures()[name]).kernel)


def test_random_kernel_equivalence():
    for k in rich_kernels(150, 3, 8, seed=1):
        _equivalence(k)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**64 - 1), st.integers(1, 8), st.booleans())
def test_fast_decision_matches_simulation(seed, n, rich):
    rng = Lcg(seed)
    inst = sentinel_rich(n, rng) if rich else random_instance(n, rng)
    for X in subsets(range(1, n + 1)):
        assert decide_target_set_fast(inst, X) == is_target_set(inst, X)


def test_condition_predicate_monotone():
    for k in rich_kernels(60, 3, 7, seed=5):
        cond = _conditions(k)
        V = range(1, k.n + 1)
        good = [X for X in subsets(V) if satisfies(cond, X)]
        for X in good:
            for u in V:
                assert satisfies(cond, X | {u})


def test_sentinels_have_degree_two():
    for k in rich_kernels(100, 3, 8, seed=9):
        for u in classify(k).sentinels:
            assert k.graph.degree(u) >= 2
