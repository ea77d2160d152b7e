"""Two-stage test spaces and the de-randomization of a valued weight.

The Dacey sum glues fiber test spaces over the outcomes of a base test; the
graph of an event-valued morphism is the special case of singleton fibers.
Applying the graph construction to the canonical coarse-graining morphism
yields the Dacey cover, whose outcomes are (event, member) pairs.

De-randomization splits a valued weight into a coarse weight on
proportionality classes and per-class classical dice.  Outcomes x, y fall in
one class when F(x) is a positive rational multiple of F(y); the die entry
for x inside a class-intersection D is t(x)/T_D, which is independent of the
chosen class representative.  The dice depend only on the weight: the
simulation identity alpha(x) = alpha_hat(D) * p_D(x) holds for every state,
with all the state dependence in the first factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

from .errors import ConsistencyError, InputError, ResourceLimitError
from .linalg import is_zero_vec, vdot, vec
from .testspace import TestSpace, canon_key, coarse_graining, event_cap, make_testspace
from .vweight import ValuedWeight, is_valued_weight, pullback_state


def dacey_sum(m: TestSpace, fiber: dict) -> TestSpace:
    """Two-stage tests: run E, then the chosen fiber test over the outcome.

    ``fiber`` maps each outcome of the base to a TestSpace; a test of the sum
    picks one fiber test per outcome of a base test."""
    for x in m.outcomes:
        if x not in fiber:
            raise InputError(f"fiber missing for outcome {x!r}")
        if not isinstance(fiber[x], TestSpace):
            raise InputError("fibers must be test spaces")
    cap = event_cap()
    tests = []
    count = 0
    for e in m.tests:
        members = sorted(e, key=canon_key)
        choices = [fiber[x].tests for x in members]
        size = 1
        for c in choices:
            size *= len(c)
        count += size
        if count > cap:
            raise ResourceLimitError("fiber-choice enumeration exceeds the cap")
        for pick in iproduct(*choices):
            two_stage = set()
            for x, fx in zip(members, pick):
                two_stage.update((x, y) for y in fx)
            tests.append(frozenset(two_stage))
    return make_testspace(tests)


def graph_of_morphism(phi: dict, m: TestSpace) -> TestSpace:
    """Dacey sum with singleton fibers {phi(x)}: tests U_{x in E} {x} x phi(x)."""
    fibers = {}
    for x in m.outcomes:
        if x not in phi:
            raise InputError(f"morphism missing outcome {x!r}")
        ev = frozenset(phi[x])
        if not ev:
            raise InputError(f"morphism image at {x!r} is empty")
        fibers[x] = make_testspace([ev])
    return dacey_sum(m, fibers)


@dataclass(eq=False)
class DaceyCover:
    source: TestSpace
    m_sharp: TestSpace
    cover: TestSpace

    def pi(self, pair):
        """(A, x) -> x: outcome-preserving, not injective."""
        ev, x = pair
        return x

    def psi(self, ev):
        """A -> {(A, x) : x in A}: injective, not outcome-preserving."""
        return frozenset((ev, x) for x in ev)


def dacey_cover(m: TestSpace) -> DaceyCover:
    """Graph of the canonical coarse-graining morphism.

    Outcomes are (event, member) pairs; tests follow the partitions of the
    source tests.  The factorization of the canonical morphism through the
    cover (phi = pi after psi, eventwise) is audited on every outcome."""
    sharp = coarse_graining(m)
    phi = {ev: ev for ev in sharp.outcomes}
    cover_ts = graph_of_morphism(phi, sharp)
    cover = DaceyCover(m, sharp, cover_ts)
    for ev in sharp.outcomes:
        image = frozenset(cover.pi(p) for p in cover.psi(ev))
        if image != ev:
            raise ConsistencyError("cover morphisms do not factor the coarse-graining")
    return cover


@dataclass(eq=False)
class ApproxClasses:
    weight: ValuedWeight
    classes: tuple  # frozensets of outcomes
    ratios: dict    # outcome -> t(x) relative to the least outcome of its class
    zero_outcomes: tuple

    def class_of(self, x):
        for c in self.classes:
            if x in c:
                return c
        raise InputError(f"unknown outcome {x!r}")


def _proportionality(v, w):
    """t > 0 with v = t*w, or None."""
    pivot = next((i for i, e in enumerate(w) if e != 0), None)
    if pivot is None:
        return None
    t = v[pivot] / w[pivot]
    if t <= 0:
        return None
    return t if all(a == t * b for a, b in zip(v, w)) else None


def approx_classes(f: ValuedWeight) -> ApproxClasses:
    """Partition outcomes by positive proportionality of their values.

    Zero-valued outcomes are isolated into singleton diagnostic classes: the
    proportionality relation lives on (0, u] and has no ratio for them."""
    outcomes = list(f.testspace.outcomes)
    zero = tuple(x for x in outcomes if is_zero_vec(f.values[x]))
    classes = []
    ratios = {}
    for x in outcomes:
        if x in zero:
            classes.append({x})
            continue
        placed = False
        for cls in classes:
            rep = next(iter(cls))
            if rep in zero:
                continue
            t = _proportionality(f.values[x], f.values[rep])
            if t is not None:
                cls.add(x)
                placed = True
                break
        if not placed:
            classes.append({x})
    out_classes = []
    for cls in classes:
        members = sorted(cls, key=canon_key)
        rep = members[0]
        out_classes.append(frozenset(members))
        if rep in zero:
            continue
        for x in members:
            ratios[x] = _proportionality(f.values[x], f.values[rep])
    return ApproxClasses(f, tuple(out_classes), ratios, zero)


@dataclass(eq=False)
class Derandomization:
    weight: ValuedWeight
    classes: ApproxClasses
    hat_testspace: TestSpace
    hat_weight: ValuedWeight
    dice: dict  # hat outcome (frozenset) -> {x: p(x)}
    equal_sum_diagnostics: tuple

    def hat_outcome(self, x, test) -> frozenset:
        return frozenset(self.classes.class_of(x) & test)


def derandomize(f: ValuedWeight) -> Derandomization:
    """Coarse tests of class-intersections plus state-independent dice.

    The hat weight assigns each class-intersection the sum of F over it; the
    die for an intersection D gives x the fraction t(x)/T_D.  Independence of
    the representative choice is re-audited by recomputing each die from
    every alternative base point."""
    if not is_valued_weight(f):
        raise InputError("derandomization needs a valid valued weight")
    ac = approx_classes(f)
    if ac.zero_outcomes:
        raise InputError(
            f"outcomes with zero value have no proportionality class: {list(ac.zero_outcomes)!r}")
    hat_tests = []
    for e in f.testspace.tests:
        blocks = {frozenset(cls & e) for cls in ac.classes}
        blocks.discard(frozenset())
        hat_tests.append(frozenset(blocks))
    hat_ts = make_testspace(hat_tests)
    hat_values = {d: f.event_value(d) for d in hat_ts.outcomes}
    hat_weight = ValuedWeight(f.space, hat_ts, hat_values)
    if not is_valued_weight(hat_weight):
        raise ConsistencyError("hat weight failed validation")

    dice = {}
    for d in hat_ts.outcomes:
        total = sum(ac.ratios[x] for x in d)
        die = {x: ac.ratios[x] / total for x in d}
        if sum(die.values()) != 1:
            raise ConsistencyError("die does not normalize")
        for x0 in d:
            t0 = {x: _proportionality(f.values[x], f.values[x0]) for x in d}
            tot0 = sum(t0.values())
            if any(t0[x] / tot0 != die[x] for x in d):
                raise ConsistencyError("die depends on the class representative")
        dice[d] = die

    diagnostics = []
    for t in hat_ts.tests:
        members = sorted(t, key=canon_key)
        for i, d1 in enumerate(members):
            for d2 in members[i + 1:]:
                if hat_values[d1] == hat_values[d2]:
                    diagnostics.append((d1, d2))
    return Derandomization(f, ac, hat_ts, hat_weight, dice, tuple(diagnostics))


def df_view(d: Derandomization) -> TestSpace:
    """The two-stage cover restricted to the hat tests (a filtered Dacey cover)."""
    phi = {ev: ev for ev in d.hat_testspace.outcomes}
    return graph_of_morphism(phi, d.hat_testspace)


def simulate_check(f, phi) -> bool:
    """alpha(x) must equal alpha_hat(D) * p_D(x) for every test and member.

    Accepts a ValuedWeight (derandomized on the fly) or a Derandomization.
    The dice table is only read here; all state dependence enters through
    the coarse weight."""
    d = f if isinstance(f, Derandomization) else derandomize(f)
    weight = d.weight
    alpha = pullback_state(weight, phi)
    phi = vec(phi)
    for e in weight.testspace.tests:
        for x in e:
            block = d.hat_outcome(x, e)
            lhs = alpha[x]
            rhs = vdot(phi, d.hat_weight.values[block]) * d.dice[block][x]
            if lhs != rhs:
                return False
    return True
