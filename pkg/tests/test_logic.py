from fractions import Fraction as F
from itertools import product as iproduct

import pytest

from gptk.errors import InputError, StructureError
from gptk.linalg import vsum
from gptk.logic import (
    algebraicity_transfer_check,
    catalog_for_indexing,
    check_effect_algebra,
    ea_isomorphic,
    interval_effect_algebra,
    is_orthoalgebra,
    logic_of,
    make_effect_algebra,
    star_logic_iso_check,
    star_product,
)
from gptk.modj import boolean_testspace, build_modj
from gptk.systems import dim1, triangle_testspace
from gptk.testspace import complementary, events, is_algebraic, make_testspace


def chain(n):
    """The effect chain {k/n : k = 1..n} on the one-dimensional space."""
    return [(F(k, n),) for k in range(1, n + 1)]


def three_chain():
    # {0, h, 1} with h + h = 1
    return make_effect_algebra(
        ["0", "h", "1"], "0", "1",
        {("0", "0"): "0", ("0", "h"): "h", ("h", "0"): "h",
         ("0", "1"): "1", ("1", "0"): "1", ("h", "h"): "1"})


def two_element():
    return make_effect_algebra(["0", "1"], "0", "1",
                               {("0", "0"): "0", ("0", "1"): "1", ("1", "0"): "1"})


def test_effect_algebra_validation():
    assert check_effect_algebra(three_chain()) == []
    with pytest.raises(InputError):
        make_effect_algebra(["0", "1"], "0", "1", {("0", "0"): "0"})  # 0 lacks a partner


def test_logic_of_boolean_2():
    lg = logic_of(boolean_testspace(2))
    assert len(lg.classes) == 4
    assert is_orthoalgebra(lg.algebra)
    # Boolean 2^2: two atoms that sum to one
    atoms = [a for a in lg.algebra.elements
             if a not in (lg.algebra.zero, lg.algebra.one)]
    assert len(atoms) == 2
    assert lg.algebra.osum[(atoms[0], atoms[1])] == lg.algebra.one


def test_logic_of_single_test_is_powerset():
    for n in (2, 3):
        ts = make_testspace([set(range(1, n + 1))])
        lg = logic_of(ts)
        assert len(lg.classes) == 2 ** n


def test_logic_of_boolean_1():
    lg = logic_of(boolean_testspace(1))
    assert len(lg.classes) == 2


def test_logic_requires_algebraic():
    with pytest.raises(StructureError):
        logic_of(triangle_testspace())


def test_logic_of_boolean_is_boolean():
    # distributivity-definedness audit: in a Boolean logic, a+b is defined
    # exactly when the representatives are disjoint, and + distributes.
    lg = logic_of(boolean_testspace(2))
    ea = lg.algebra
    for a, b in iproduct(ea.elements, repeat=2):
        if (a, b) in ea.osum:
            s = ea.osum[(a, b)]
            for c in ea.elements:
                if (s, c) in ea.osum:
                    assert (b, c) in ea.osum and (a, ea.osum[(b, c)]) in ea.osum


def test_is_orthoalgebra_examples():
    assert is_orthoalgebra(two_element())
    assert not is_orthoalgebra(three_chain())
    lg = logic_of(boolean_testspace(2))
    assert is_orthoalgebra(lg.algebra)


def test_star_product_examples():
    t = two_element()
    p = star_product(t, t)
    assert sorted(p.elements) == [("0", "0"), ("1", "1")]

    c = three_chain()
    p = star_product(c, t)
    assert sorted(p.elements) == [("0", "0"), ("1", "1")]  # middle has no partner

    p = star_product(c, c)
    assert sorted(p.elements) == [("0", "0"), ("1", "1"), ("h", "h")]
    assert p.osum[(("h", "h"), ("h", "h"))] == ("1", "1")


def test_star_product_projections_surjective_homomorphisms():
    lg = logic_of(boolean_testspace(2)).algebra
    c = three_chain()
    p = star_product(lg, c)
    assert {a for (a, _) in p.elements} == set(lg.elements)
    assert {b for (_, b) in p.elements} <= set(c.elements)
    for ((a, b), (u, v)), (s, t) in p.osum.items():
        assert lg.osum[(a, u)] == s
        assert c.osum[(b, v)] == t


def test_star_preserves_orthoalgebra():
    lg = logic_of(boolean_testspace(2)).algebra
    assert is_orthoalgebra(lg)
    for other in (two_element(), three_chain()):
        assert is_orthoalgebra(star_product(lg, other))


def test_interval_effect_algebra_closure_enforced():
    with pytest.raises(InputError):
        interval_effect_algebra(dim1(), [(F(1, 3),)])  # not complement-closed


def test_fragment_enumeration_cap(monkeypatch):
    from gptk.errors import ResourceLimitError
    monkeypatch.setenv("GPTK_EVENT_CAP", "8")
    with pytest.raises(ResourceLimitError):
        catalog_for_indexing(dim1(), boolean_testspace(2), chain(3))


def test_lemma2_complementarity_characterization():
    # events are complementary in the fragment iff their index parts are
    # complementary in the indexing space and the effect sums add to the unit
    sp = dim1()
    for ts, effs in [(boolean_testspace(2), chain(2)),
                     (make_testspace([{"x", "y"}, {"y", "z"}]), chain(3)),
                     (triangle_testspace(), chain(4))]:
        cat = catalog_for_indexing(sp, ts, effs)
        frag = build_modj(sp, cat).testspace
        evs = events(frag)
        for a in evs:
            for b in evs:
                lhs = complementary(frag, a, b)
                a_o = frozenset(i for (i, _) in a)
                b_o = frozenset(i for (i, _) in b)
                sums_match = (vsum((e for (_, e) in b), 1)
                              == tuple(u - s for u, s in
                                       zip(sp.unit, vsum((e for (_, e) in a), 1))))
                rhs = complementary(ts, a_o, b_o) and sums_match \
                    and len(a_o) == len(a) and len(b_o) == len(b)
                assert lhs == rhs


def test_algebraicity_transfer_examples():
    sp = dim1()
    assert algebraicity_transfer_check(sp, boolean_testspace(2),
                                       [(F(1, 4),), (F(1, 2),), (F(3, 4),), (F(1),)])
    assert algebraicity_transfer_check(sp, triangle_testspace(),
                                       [(F(1, 4),), (F(1, 2),), (F(3, 4),), (F(1),)])
    assert algebraicity_transfer_check(sp, make_testspace([{"x", "y", "z"}]), chain(3))


def test_triangle_fragment_really_nonalgebraic():
    sp = dim1()
    cat = catalog_for_indexing(sp, triangle_testspace(),
                               [(F(1, 4),), (F(1, 2),), (F(3, 4),), (F(1),)])
    frag = build_modj(sp, cat).testspace
    assert not is_algebraic(frag)


def test_star_logic_iso_examples():
    sp = dim1()
    assert star_logic_iso_check(sp, boolean_testspace(2), chain(2))
    assert star_logic_iso_check(sp, make_testspace([{"x"}]), chain(1))
    assert star_logic_iso_check(sp, boolean_testspace(1), chain(3))


def test_iso_search_fallback():
    # same algebra with permuted labels, no hint
    a = three_chain()
    b = make_effect_algebra(
        ["z", "m", "u"], "z", "u",
        {("z", "z"): "z", ("z", "m"): "m", ("m", "z"): "m",
         ("z", "u"): "u", ("u", "z"): "u", ("m", "m"): "u"})
    iso = ea_isomorphic(a, b)
    assert iso == {"0": "z", "h": "m", "1": "u"}
    assert ea_isomorphic(a, logic_of(boolean_testspace(2)).algebra) is None
