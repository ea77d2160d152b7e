import random
from fractions import Fraction as F

import pytest
from conftest import rand_state, rand_valued_weight

from gptk.dacey import (
    approx_classes,
    dacey_cover,
    dacey_sum,
    derandomize,
    df_view,
    graph_of_morphism,
    simulate_check,
)
from gptk.errors import InputError
from gptk.linalg import vdot, vec
from gptk.systems import bit, dim1, square_bit, trit, worked_bit_weight
from gptk.testspace import is_probability_weight, make_testspace, weight_polytope_vertices
from gptk.vweight import ValuedWeight, is_valued_weight, pullback_state

HALF = F(1, 2)


def test_dacey_sum_examples():
    base = make_testspace([{"x", "y"}])
    point = make_testspace([{"p"}])
    ds = dacey_sum(base, {"x": point, "y": point})
    assert ds.tests == (frozenset({("x", "p"), ("y", "p")}),)

    single = make_testspace([{"x"}])
    two = make_testspace([{"a"}, {"b"}])  # two singleton tests
    ds = dacey_sum(single, {"x": two})
    assert len(ds.tests) == 2

    both = dacey_sum(base, {"x": two, "y": two})
    assert len(both.tests) == 4


def test_graph_of_morphism_examples():
    m = make_testspace([{"x", "y"}, {"y", "z"}])
    ident = graph_of_morphism({o: {o} for o in m.outcomes}, m)
    assert len(ident.tests) == len(m.tests)
    assert {frozenset(x for (x, _) in t) for t in ident.tests} == set(m.tests)

    const = graph_of_morphism({o: {"p", "q"} for o in m.outcomes}, m)
    for t in const.tests:
        assert all(y in ("p", "q") for (_, y) in t)

    with pytest.raises(InputError):
        graph_of_morphism({o: set() for o in m.outcomes}, m)


def test_dacey_cover_counts():
    cover = dacey_cover(make_testspace([{"x", "y", "z"}]))
    assert len(cover.m_sharp.tests) == 5 and len(cover.m_sharp.outcomes) == 7
    assert len(cover.cover.tests) == 5 and len(cover.cover.outcomes) == 12
    single = dacey_cover(make_testspace([{"x"}]))
    assert len(single.cover.tests) == 1 and len(single.cover.outcomes) == 1


def test_cover_morphism_properties():
    cover = dacey_cover(make_testspace([{"x", "y", "z"}]))
    # pi is outcome-surjective but not injective
    images = [cover.pi(p) for p in cover.cover.outcomes]
    assert set(images) == set(cover.source.outcomes)
    assert len(images) > len(set(images))
    # psi is injective, test-preserving, but not outcome-preserving
    cover_tests = set(cover.cover.tests)
    psis = {ev: cover.psi(ev) for ev in cover.m_sharp.outcomes}
    assert len(set(psis.values())) == len(psis)
    for t in cover.m_sharp.tests:
        image = frozenset().union(*(psis[ev] for ev in t))
        assert image in cover_tests
    assert any(psis[ev] not in cover.cover.outcomes for ev in cover.m_sharp.outcomes)
    # phi = pi o psi
    for ev in cover.m_sharp.outcomes:
        assert frozenset(cover.pi(p) for p in psis[ev]) == ev


def test_cover_weights_factor():
    cover = dacey_cover(make_testspace([{"x", "y", "z"}]))
    for beta in weight_polytope_vertices(cover.cover):
        alpha = {}
        for ev in cover.m_sharp.outcomes:
            alpha[ev] = sum(beta[(ev, x)] for x in ev)
        assert is_probability_weight(cover.m_sharp, alpha)
        for ev in cover.m_sharp.outcomes:
            if alpha[ev] == 0:
                assert all(beta[(ev, x)] == 0 for x in ev)
            else:
                die = {x: beta[(ev, x)] / alpha[ev] for x in ev}
                assert sum(die.values()) == 1
                for x in ev:
                    assert beta[(ev, x)] == alpha[ev] * die[x]


def test_approx_classes_scalar():
    f = ValuedWeight(dim1(), make_testspace([{"a", "b", "c"}]),
                     {"a": (F(1, 6),), "b": (F(1, 3),), "c": (F(1, 2),)})
    ac = approx_classes(f)
    assert ac.classes == (frozenset({"a", "b", "c"}),)
    assert ac.ratios == {"a": F(1), "b": F(2), "c": F(3)}


def test_approx_classes_worked_example():
    ac = approx_classes(worked_bit_weight())
    assert set(ac.classes) == {frozenset({"x", "y"}), frozenset({"z"})}
    assert ac.ratios["y"] / ac.ratios["x"] == HALF


def test_approx_classes_injective_weight():
    f = ValuedWeight(bit(), make_testspace([{"a", "b"}]),
                     {"a": (F(1), F(1, 4)), "b": (F(0), F(3, 4))})
    ac = approx_classes(f)
    assert all(len(c) == 1 for c in ac.classes)


def test_derandomize_worked_example():
    d = derandomize(worked_bit_weight())
    xy = frozenset({"x", "y"})
    z = frozenset({"z"})
    assert set(d.hat_testspace.outcomes) == {xy, z}
    assert d.hat_weight.values[xy] == (F(3, 4), F(3, 8))
    assert d.hat_weight.values[z] == (F(1, 4), F(5, 8))
    assert d.dice[xy] == {"x": F(2, 3), "y": F(1, 3)}
    assert d.dice[z] == {"z": F(1)}
    assert is_valued_weight(d.hat_weight)


def test_derandomize_all_singletons_trivial():
    f = ValuedWeight(bit(), make_testspace([{"a", "b"}]),
                     {"a": (F(1), F(1, 4)), "b": (F(0), F(3, 4))})
    d = derandomize(f)
    assert set(d.hat_testspace.outcomes) == {frozenset({"a"}), frozenset({"b"})}
    for x in ("a", "b"):
        assert d.dice[frozenset({x})] == {x: F(1)}
    # hat tests flatten back to the original tests (outcomes became blocks)
    assert {frozenset(b for block in t for b in block) for t in d.hat_testspace.tests} \
        == set(f.testspace.tests)


def test_derandomize_single_class_scalar():
    f = ValuedWeight(dim1(), make_testspace([{"a", "b", "c"}]),
                     {"a": (F(1, 6),), "b": (F(1, 3),), "c": (F(1, 2),)})
    d = derandomize(f)
    block = frozenset({"a", "b", "c"})
    assert d.hat_testspace.outcomes == (block,)
    assert d.hat_weight.values[block] == (F(1),)
    assert d.dice[block] == {"a": F(1, 6), "b": F(1, 3), "c": F(1, 2)}


def test_zero_value_rejected():
    ts = make_testspace([{"a", "b"}])
    f = ValuedWeight(bit(), ts, {"a": (0, 0), "b": (1, 1)})
    ac = approx_classes(f)
    assert ac.zero_outcomes == ("a",)
    with pytest.raises(InputError):
        derandomize(f)


def test_simulate_worked_example():
    w = worked_bit_weight()
    phi = vec([F(1, 3), F(2, 3)])
    alpha = pullback_state(w, phi)
    assert alpha["x"] == F(1, 3)
    d = derandomize(w)
    xy = frozenset({"x", "y"})
    assert vdot(phi, d.hat_weight.values[xy]) == HALF
    assert HALF * d.dice[xy]["x"] == F(1, 3)
    assert simulate_check(w, phi)


def test_simulate_random_sweep():
    rng = random.Random(51)
    for sp in (bit(), trit(), square_bit()):
        f = rand_valued_weight(rng, sp)
        d = derandomize(f)
        for _ in range(4):
            assert simulate_check(d, rand_state(rng, sp))


def test_hat_weight_totals():
    rng = random.Random(52)
    f = rand_valued_weight(rng, trit())
    d = derandomize(f)
    for t in d.hat_testspace.tests:
        assert d.hat_weight.event_value(t) == trit().unit


def test_df_view_is_two_stage():
    d = derandomize(worked_bit_weight())
    view = df_view(d)
    assert len(view.tests) == 1
    [t] = view.tests
    assert t == frozenset({(frozenset({"x", "y"}), "x"), (frozenset({"x", "y"}), "y"),
                           (frozenset({"z"}), "z")})
