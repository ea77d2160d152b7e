"""Finite effect algebras, test-space logics, and the paired product.

Effect algebras are given by explicit tables of a partial sum.  The axioms
validated here are the standard ones: commutativity, associativity in the
partial sense, a unique orthosupplement for every element, and the zero-one
law (a + 1 defined only for a = 0).  An orthoalgebra additionally forbids
a + a for nonzero a.

The logic of an algebraic test space organizes perspectivity classes of
events into an orthoalgebra; the class sum is induced by unions of disjoint
representatives and its independence from the choice of representatives is
re-verified during construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import ConsistencyError, InputError, ResourceLimitError, StructureError
from .linalg import is_zero_vec, vec, vsub, vsum
from .modj import Catalog, Observable, build_modj
from .ous import OrderUnitSpace, is_effect
from .testspace import TestSpace, canon_key, co_events, event_cap, events, is_algebraic


@dataclass(frozen=True, eq=False)
class EffectAlgebraTable:
    elements: tuple
    zero: object
    one: object
    osum: dict

    def defined(self, a, b) -> bool:
        return (a, b) in self.osum

    def plus(self, a, b):
        return self.osum[(a, b)]

    def orthosupplement(self, a):
        partners = [b for b in self.elements if self.osum.get((a, b)) == self.one]
        if len(partners) != 1:
            raise ConsistencyError("orthosupplement is not unique")
        return partners[0]


def check_effect_algebra(ea: EffectAlgebraTable) -> list:
    """All axiom violations, as human-readable strings (empty when valid)."""
    elems = set(ea.elements)
    bad = []
    if ea.zero not in elems or ea.one not in elems:
        bad.append("zero/one not among the elements")
        return bad
    for (a, b), c in ea.osum.items():
        if a not in elems or b not in elems or c not in elems:
            bad.append(f"table entry {(a, b)} -> {c} uses unknown elements")
    # commutativity
    for (a, b), c in ea.osum.items():
        if ea.osum.get((b, a)) != c:
            bad.append(f"commutativity fails at {(a, b)}")
    # associativity: b+c and a+(b+c) defined => a+b and (a+b)+c defined and equal
    for a, b, c in product(ea.elements, repeat=3):
        if (b, c) in ea.osum and (a, ea.osum[(b, c)]) in ea.osum:
            lhs = ea.osum[(a, ea.osum[(b, c)])]
            if (a, b) not in ea.osum or (ea.osum[(a, b)], c) not in ea.osum:
                bad.append(f"associativity definedness fails at {(a, b, c)}")
            elif ea.osum[(ea.osum[(a, b)], c)] != lhs:
                bad.append(f"associativity value fails at {(a, b, c)}")
    # unique orthosupplement
    for a in ea.elements:
        partners = [b for b in ea.elements if ea.osum.get((a, b)) == ea.one]
        if len(partners) != 1:
            bad.append(f"{a!r} has {len(partners)} orthosupplements")
    # zero-one law
    for a in ea.elements:
        if (a, ea.one) in ea.osum and a != ea.zero:
            bad.append(f"{a!r} + 1 is defined")
    return bad


def make_effect_algebra(elements, zero, one, osum) -> EffectAlgebraTable:
    ea = EffectAlgebraTable(tuple(elements), zero, one, dict(osum))
    bad = check_effect_algebra(ea)
    if bad:
        raise InputError("not an effect algebra: " + "; ".join(bad[:5]))
    return ea


def is_orthoalgebra(ea: EffectAlgebraTable) -> bool:
    """a + a defined forces a = 0."""
    return all(a == ea.zero for a in ea.elements if (a, a) in ea.osum)


@dataclass(eq=False)
class LogicClassMap:
    source: TestSpace
    classes: tuple
    class_of: dict
    algebra: EffectAlgebraTable


def logic_of(ts: TestSpace) -> LogicClassMap:
    """Perspectivity classes of events with the induced partial sum.

    Requires an algebraic test space; in that case sharing a complement is
    the same as having identical complement sets, which is the grouping used
    here.  Class labels are the least event of each class.
    """
    if not is_algebraic(ts):
        raise StructureError("logic is only defined for algebraic test spaces")
    comap = {}
    for ev in events(ts):
        comap.setdefault(co_events(ts, ev), []).append(ev)
    classes = []
    for _, evs in sorted(comap.items(),
                         key=lambda kv: min(canon_key(tuple(sorted(e, key=canon_key))) for e in kv[1])):
        classes.append(frozenset(evs))
    class_of = {ev: cls for cls in classes for ev in cls}
    label = {cls: min(cls, key=lambda e: canon_key(tuple(sorted(e, key=canon_key))))
             for cls in classes}

    zero = label[class_of[frozenset()]]
    one_class = class_of[ts.tests[0]]
    if any(class_of[t] != one_class for t in ts.tests):
        raise ConsistencyError("tests do not form a single perspectivity class")

    test_set = set(ts.tests)
    osum = {}
    for ca, cb in product(classes, repeat=2):
        results = set()
        for a in ca:
            for b in cb:
                if a & b:
                    continue
                union = a | b
                if any(union <= t for t in test_set):
                    results.add(label[class_of[union]])
        if len(results) > 1:
            raise ConsistencyError("class sum depends on the choice of representatives")
        if results:
            osum[(label[ca], label[cb])] = results.pop()

    algebra = make_effect_algebra([label[c] for c in classes], zero,
                                  label[one_class], osum)
    if not is_orthoalgebra(algebra):
        raise ConsistencyError("logic of an algebraic test space must be an orthoalgebra")
    return LogicClassMap(ts, tuple(classes), class_of, algebra)


def star_product(l: EffectAlgebraTable, m: EffectAlgebraTable) -> EffectAlgebraTable:
    """Pairs matching zeros with zeros and ones with ones, with pointwise sum.

    The sum of two pairs is defined when both coordinate sums are defined and
    the resulting pair stays inside the carrier."""
    carrier = []
    for a, b in product(l.elements, m.elements):
        if ((a == l.zero) == (b == m.zero)) and ((a == l.one) == (b == m.one)):
            carrier.append((a, b))
    carrier_set = set(carrier)
    osum = {}
    for (a, b), (u, v) in product(carrier, repeat=2):
        if (a, u) in l.osum and (b, v) in m.osum:
            s = (l.osum[(a, u)], m.osum[(b, v)])
            if s in carrier_set:
                osum[((a, b), (u, v))] = s
    ea = EffectAlgebraTable(tuple(carrier), (l.zero, m.zero), (l.one, m.one), osum)
    bad = check_effect_algebra(ea)
    if bad:
        raise ConsistencyError("star product failed validation: " + bad[0])
    return ea


def interval_effect_algebra(space: OrderUnitSpace, effect_list) -> EffectAlgebraTable:
    """The finite sub-effect-algebra of [0, unit] on the given effects.

    The list must be closed under a -> unit - a and under addition whenever
    the sum is again an effect; the partial sum is then vector addition."""
    elems = {vec(e) for e in effect_list}
    zero = vec([0] * space.dim)
    elems.add(zero)
    elems.add(space.unit)
    for e in elems:
        if not is_effect(space, e):
            raise InputError("list entries must be effects")
        if vsub(space.unit, e) not in elems:
            raise InputError("effect list is not closed under complement")
    for a, b in product(elems, repeat=2):
        s = vsum([a, b])
        if is_effect(space, s) and s not in elems:
            raise InputError("effect list is not closed under defined sums")
    osum = {}
    for a, b in product(elems, repeat=2):
        s = vsum([a, b])
        if s in elems and is_effect(space, s):
            osum[(a, b)] = s
    return make_effect_algebra(sorted(elems), zero, space.unit, osum)


def catalog_for_indexing(space: OrderUnitSpace, indexing_ts: TestSpace,
                         effect_list) -> Catalog:
    """All observables mapping a test of the indexing space into the list.

    This is the finite fragment of the construction indexed by a test space:
    index sets are its tests, values are drawn from the effect list, and a
    map qualifies when its values sum to the unit."""
    effects = []
    for e in effect_list:
        v = vec(e)
        if is_zero_vec(v) or not is_effect(space, v):
            raise InputError("list entries must be nonzero effects")
        if v not in effects:
            effects.append(v)
    effects.sort()
    cap = event_cap()
    if sum(len(effects) ** len(t) for t in indexing_ts.tests) > cap:
        raise ResourceLimitError("observable enumeration exceeds the cap")
    obs = []
    for t in indexing_ts.tests:
        members = sorted(t, key=canon_key)
        for combo in product(effects, repeat=len(members)):
            if vsum(combo) == space.unit:
                obs.append(Observable(space, tuple(members),
                                      dict(zip(members, combo))))
    if not obs:
        raise InputError("no observable over the indexing tests sums to the unit")
    return Catalog(space, tuple(obs))


def algebraicity_transfer_check(space: OrderUnitSpace, indexing_ts: TestSpace,
                                effect_list) -> bool:
    """The fragment is algebraic exactly when the indexing space is."""
    catalog = catalog_for_indexing(space, indexing_ts, effect_list)
    fragment = build_modj(space, catalog).testspace
    return is_algebraic(fragment) == is_algebraic(indexing_ts)


def _iso_respects(l: EffectAlgebraTable, m: EffectAlgebraTable, fwd: dict) -> bool:
    if fwd[l.zero] != m.zero or fwd[l.one] != m.one:
        return False
    inv = {v: k for k, v in fwd.items()}
    if len(inv) != len(fwd):
        return False
    for (a, b), c in l.osum.items():
        if m.osum.get((fwd[a], fwd[b])) != fwd[c]:
            return False
    for (a, b), c in m.osum.items():
        if l.osum.get((inv[a], inv[b])) != inv[c]:
            return False
    return True


def ea_isomorphic(l: EffectAlgebraTable, m: EffectAlgebraTable,
                  hint: dict | None = None) -> dict | None:
    """An isomorphism as a dict, trying ``hint`` before backtracking."""
    if len(l.elements) != len(m.elements):
        return None
    if hint is not None and set(hint) == set(l.elements) and _iso_respects(l, m, hint):
        return hint

    def degree(ea, a):
        return (sum(1 for k in ea.osum if k[0] == a),
                a == ea.zero, a == ea.one,
                (a, a) in ea.osum)

    l_elems = sorted(l.elements, key=lambda a: (degree(l, a), str(a)))
    m_by_deg = {}
    for b in m.elements:
        m_by_deg.setdefault(degree(m, b), []).append(b)

    assignment = {}
    used = set()

    def extend(k):
        if k == len(l_elems):
            return _iso_respects(l, m, dict(assignment))
        a = l_elems[k]
        for b in m_by_deg.get(degree(l, a), []):
            if b in used:
                continue
            assignment[a] = b
            used.add(b)
            ok = True
            for a2, b2 in list(assignment.items()):
                if (a, a2) in l.osum:
                    c = l.osum[(a, a2)]
                    if c in assignment and m.osum.get((b, b2)) != assignment[c]:
                        ok = False
                        break
                elif (b, b2) in m.osum and (a, a2) not in l.osum:
                    pass  # definedness can still be refuted at the final check
            if ok and extend(k + 1):
                return True
            used.discard(b)
            del assignment[a]
        return False

    if extend(0):
        return dict(assignment)
    return None


def star_logic_iso_check(space: OrderUnitSpace, indexing_ts: TestSpace,
                         effect_list) -> bool:
    """Compare the fragment's logic with the paired product of the factor logics.

    Both sides are computed independently; the canonical candidate (the
    class of the index part, paired with the event's effect sum) is tried
    first and a backtracking search is the fallback."""
    if not is_algebraic(indexing_ts):
        raise StructureError("indexing test space must be algebraic")
    catalog = catalog_for_indexing(space, indexing_ts, effect_list)
    fragment = build_modj(space, catalog).testspace
    frag_logic = logic_of(fragment)
    idx_logic = logic_of(indexing_ts)
    interval = interval_effect_algebra(space, effect_list)
    target = star_product(idx_logic.algebra, interval)

    idx_label = {}
    for cls in idx_logic.classes:
        lab = min(cls, key=lambda e: canon_key(tuple(sorted(e, key=canon_key))))
        for ev in cls:
            idx_label[ev] = lab

    hint = {}
    for cls in frag_logic.classes:
        lab = min(cls, key=lambda e: canon_key(tuple(sorted(e, key=canon_key))))
        images = set()
        for ev in cls:
            ev_index = frozenset(i for (i, _) in ev)
            sigma = vsum((a for (_, a) in ev), space.dim)
            images.add((idx_label[ev_index], sigma))
        if len(images) != 1:
            raise ConsistencyError("canonical map is not constant on a class")
        hint[lab] = images.pop()

    return ea_isomorphic(frag_logic.algebra, target, hint) is not None
