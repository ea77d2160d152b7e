from fractions import Fraction as F
from itertools import permutations

import pytest

from gptk.errors import InputError, StructureError
from gptk.systems import grid_testspace, triangle_testspace, two_overlapping_tests
from gptk.testspace import (
    TestSpace,
    coarse_graining,
    complementary,
    co_events,
    event_weight_bound,
    events,
    is_algebraic,
    is_irredundant,
    is_probability_weight,
    make_testspace,
    perspective,
    weight_equality_bound,
    weight_polytope_vertices,
)
from gptk.modj import boolean_testspace


def test_irredundance_examples():
    assert is_irredundant([{"x", "y"}, {"y", "z"}])
    assert not is_irredundant([{"x"}, {"x", "y"}])


def test_permutation_graphs_irredundant():
    # graphs of all permutations of distinct scalars over three indices
    tests = []
    for perm in permutations(("a", "b", "c")):
        tests.append({(i, perm[i]) for i in range(3)})
    assert is_irredundant(tests)


def test_construction_rejects_redundant():
    with pytest.raises(StructureError):
        make_testspace([{"x"}, {"x", "y"}])


def test_probability_weight_examples():
    coin = make_testspace([{"x", "y"}])
    assert is_probability_weight(coin, {"x": F(1, 2), "y": F(1, 2)})
    assert not is_probability_weight(coin, {"x": F(3, 4), "y": F(3, 4)})
    grid = grid_testspace()
    assert is_probability_weight(grid, {x: F(1, 3) for x in grid.outcomes})
    with pytest.raises(InputError):
        is_probability_weight(coin, {"x": F(1)})


def test_complementary_examples():
    ts = make_testspace([{"x", "y", "z"}])
    assert complementary(ts, {"x"}, {"y", "z"})
    assert not complementary(ts, {"x"}, {"x", "y"})
    for t in ts.tests:
        assert complementary(ts, frozenset(), t)  # empty co E for every test


def test_perspective_examples():
    ts = two_overlapping_tests()
    assert perspective(ts, {"x"}, {"x"})  # reflexive via its own complement
    assert perspective(ts, {"x"}, {"z"})  # shared complement {y}
    assert co_events(ts, {"x"}) == frozenset({frozenset({"y"})})


def test_perspective_symmetric_and_transitive_on_algebraic():
    for ts in (boolean_testspace(3), grid_testspace()):
        assert is_algebraic(ts)
        evs = events(ts)
        import random
        rng = random.Random(2)
        sample = [evs[rng.randrange(len(evs))] for _ in range(12)]
        for a in sample:
            for b in sample:
                assert perspective(ts, a, b) == perspective(ts, b, a)
        # transitivity: identical complement sets chain
        for a in sample:
            for b in sample:
                for c in sample:
                    if perspective(ts, a, b) and perspective(ts, b, c):
                        assert perspective(ts, a, c)


def test_is_algebraic_examples():
    assert is_algebraic(boolean_testspace(3))
    assert not is_algebraic(triangle_testspace())
    assert is_algebraic(make_testspace([{"x", "y", "z"}]))


def test_triangle_counterexample_structure():
    ts = triangle_testspace()
    assert perspective(ts, {"a"}, {"c"})
    assert co_events(ts, {"a"}) == frozenset({frozenset({"b"}), frozenset({"c"})})
    assert co_events(ts, {"c"}) == frozenset({frozenset({"b"}), frozenset({"a"})})


def test_coarse_graining_examples():
    one = coarse_graining(make_testspace([{"x", "y", "z"}]))
    assert len(one.tests) == 5 and len(one.outcomes) == 7
    single = coarse_graining(make_testspace([{"x"}]))
    assert len(single.tests) == 1 and len(single.outcomes) == 1
    two = coarse_graining(make_testspace([{"x", "y"}, {"z", "w"}]))
    assert len(two.tests) == 4


def test_coarse_graining_lifts_weights():
    ts = grid_testspace()
    sharp = coarse_graining(ts)
    for alpha in weight_polytope_vertices(ts):
        lifted = {ev: sum(alpha[x] for x in ev) for ev in sharp.outcomes}
        assert is_probability_weight(sharp, lifted)


def test_weight_polytope_vertices_examples():
    coin = make_testspace([{"x", "y"}])
    verts = weight_polytope_vertices(coin)
    assert sorted(tuple(sorted(v.items())) for v in verts) == [
        (("x", 0), ("y", 1)), (("x", 1), ("y", 0))]

    grid = grid_testspace()
    verts = weight_polytope_vertices(grid)
    assert len(verts) == 6
    # oracle: the vertices are exactly the permutation matrices
    perms = set()
    for sigma in permutations(range(3)):
        table = tuple(sorted((f"r{i}c{j}", F(1) if sigma[i] == j else F(0))
                             for i in range(3) for j in range(3)))
        perms.add(table)
    got = {tuple(sorted(v.items())) for v in verts}
    assert got == perms

    tri = weight_polytope_vertices(triangle_testspace())
    assert tri == [{"a": F(1, 2), "b": F(1, 2), "c": F(1, 2)}]


def test_weight_equality_bound_examples():
    coin = make_testspace([{"x", "y"}])
    assert weight_equality_bound(coin, "x", "y") == 1
    ts = two_overlapping_tests()
    assert weight_equality_bound(ts, "x", "z") == 0
    assert weight_equality_bound(ts, "z", "x") == 0
    grid = grid_testspace()
    assert weight_equality_bound(grid, "r0c0", "r0c1") == 1


def test_perspectivity_forces_weight_equality():
    for ts in (boolean_testspace(3), grid_testspace(), two_overlapping_tests()):
        evs = events(ts)
        for a in evs:
            for b in evs:
                if a != b and perspective(ts, a, b):
                    assert event_weight_bound(ts, a, b) == 0
                    assert event_weight_bound(ts, b, a) == 0


def test_outcome_must_be_covered():
    with pytest.raises(InputError):
        TestSpace(("x", "y", "zz"), (frozenset({"x", "y"}),))


def test_event_cap_env_override(monkeypatch):
    from gptk.errors import ResourceLimitError
    monkeypatch.setenv("GPTK_EVENT_CAP", "4")
    with pytest.raises(ResourceLimitError):
        events(make_testspace([{"a", "b", "c"}]))
    monkeypatch.setenv("GPTK_EVENT_CAP", "not-a-number")
    with pytest.raises(InputError):
        events(make_testspace([{"a", "b", "c"}]))
