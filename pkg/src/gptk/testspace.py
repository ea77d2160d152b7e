"""Finite test spaces (hypergraphs of tests) and their event calculus.

Outcomes are arbitrary hashable tokens: strings, integers, rationals,
tuples of tokens (observable-graph outcomes) or frozensets (events used as
outcomes of coarse-grainings).  ``canon_key`` gives them a total order so
every derived listing is deterministic.

Tests are frozensets of outcomes.  Irredundance (no test properly inside
another) is definitional and enforced at construction; candidate families
can be screened first with :func:`is_irredundant`.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import ConsistencyError, InputError, ResourceLimitError, StructureError
from .lp import LinProb, EQ, OPTIMAL
from .polyhedra import polytope_vertices

DEFAULT_EVENT_CAP = 2 ** 20


def event_cap() -> int:
    """Enumeration cap for events/partitions; override with GPTK_EVENT_CAP."""
    raw = os.environ.get("GPTK_EVENT_CAP")
    if raw is None:
        return DEFAULT_EVENT_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise InputError(f"GPTK_EVENT_CAP must be an integer, got {raw!r}") from exc
    if cap < 1:
        raise InputError("GPTK_EVENT_CAP must be positive")
    return cap


def canon_key(o):
    """Total order on outcome tokens (numbers, strings, tuples, frozensets)."""
    if isinstance(o, bool):
        raise InputError("booleans are not outcome tokens")
    if isinstance(o, (int, Fraction)):
        return (0, Fraction(o))
    if isinstance(o, str):
        return (1, o)
    if isinstance(o, tuple):
        return (2, tuple(canon_key(e) for e in o))
    if isinstance(o, frozenset):
        return (3, tuple(sorted(canon_key(e) for e in o)))
    raise InputError(f"unsupported outcome token {o!r}")


def sort_outcomes(outcomes):
    return tuple(sorted(set(outcomes), key=canon_key))


def _test_key(t):
    return tuple(sorted(canon_key(x) for x in t))


def is_irredundant(tests) -> bool:
    """No test properly contains another.  Accepts a TestSpace or a family."""
    if isinstance(tests, TestSpace):
        fam = tests.tests
    else:
        fam = [frozenset(t) for t in tests]
    for a, b in combinations(fam, 2):
        if a < b or b < a:
            return False
    return True


@dataclass(frozen=True)
class TestSpace:
    __test__ = False  # keep pytest from collecting this as a test class

    outcomes: tuple
    tests: tuple

    def __post_init__(self):
        tests = tuple(sorted({frozenset(t) for t in self.tests}, key=_test_key))
        if not tests:
            raise InputError("a test space needs at least one test")
        if any(not t for t in tests):
            raise InputError("tests must be nonempty")
        covered = frozenset().union(*tests)
        outcomes = sort_outcomes(self.outcomes) if self.outcomes else sort_outcomes(covered)
        if set(outcomes) != set(covered):
            raise InputError("outcome set must equal the union of the tests")
        if not is_irredundant(tests):
            raise StructureError("redundant test family: one test contains another")
        object.__setattr__(self, "outcomes", outcomes)
        object.__setattr__(self, "tests", tests)

    def __repr__(self):
        return f"TestSpace({len(self.outcomes)} outcomes, {len(self.tests)} tests)"


def make_testspace(tests) -> TestSpace:
    fam = tuple(frozenset(t) for t in tests)
    return TestSpace(tuple(frozenset().union(*fam)) if fam else (), fam)


def is_event(ts: TestSpace, a) -> bool:
    a = frozenset(a)
    return any(a <= t for t in ts.tests)


def _require_event(ts, a):
    a = frozenset(a)
    if not is_event(ts, a):
        raise InputError(f"{set(a)!r} is not an event (not inside any test)")
    return a


def events(ts: TestSpace):
    """All events (subsets of tests), the empty event included."""
    total = sum(2 ** len(t) for t in ts.tests)
    if total > event_cap():
        raise ResourceLimitError(
            f"event enumeration needs {total} subsets, cap is {event_cap()}")
    seen = {frozenset()}
    out = [frozenset()]
    for t in ts.tests:
        members = sorted(t, key=canon_key)
        for r in range(1, len(members) + 1):
            for combo in combinations(members, r):
                ev = frozenset(combo)
                if ev not in seen:
                    seen.add(ev)
                    out.append(ev)
    return out


def complementary(ts: TestSpace, a, b) -> bool:
    """Events are complementary when disjoint with union a test."""
    a = _require_event(ts, a)
    b = _require_event(ts, b)
    return not (a & b) and (a | b) in set(ts.tests)


def co_events(ts: TestSpace, a) -> frozenset:
    """All complements of an event: E \\ a over tests E containing a."""
    a = _require_event(ts, a)
    return frozenset(t - a for t in ts.tests if a <= t)


def perspective(ts: TestSpace, a, b) -> bool:
    """Events sharing some complementary event."""
    return bool(co_events(ts, a) & co_events(ts, b))


def is_algebraic(ts: TestSpace) -> bool:
    """Perspective events must share exactly the same complementary events."""
    comap = {}
    for ev in events(ts):
        comap.setdefault(co_events(ts, ev), []).append(ev)
    groups = list(comap.keys())
    for ca, cb in combinations(groups, 2):
        if ca & cb:
            return False
    return True


def set_partitions(items):
    """All partitions of a sequence into nonempty blocks, deterministically."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def coarse_graining(ts: TestSpace) -> TestSpace:
    """Tests become partitions of the original tests into nonempty events."""
    cap = event_cap()
    new_tests = []
    count = 0
    for t in ts.tests:
        members = sorted(t, key=canon_key)
        for part in set_partitions(members):
            count += 1
            if count > cap:
                raise ResourceLimitError(f"partition enumeration exceeds the cap {cap}")
            new_tests.append(frozenset(frozenset(block) for block in part))
    return make_testspace(new_tests)


def is_probability_weight(ts: TestSpace, alpha) -> bool:
    """Exact nonnegativity plus unit sums on every test."""
    for x in ts.outcomes:
        if x not in alpha:
            raise InputError(f"weight is missing outcome {x!r}")
    if any(Fraction(alpha[x]) < 0 for x in ts.outcomes):
        return False
    return all(sum(Fraction(alpha[x]) for x in t) == 1 for t in ts.tests)


def weight_polytope_vertices(ts: TestSpace) -> list:
    """Exact vertices of {alpha >= 0 : sum over each test = 1}, as dicts."""
    order = list(ts.outcomes)
    pos = {x: i for i, x in enumerate(order)}
    n = len(order)
    eqs = []
    for t in ts.tests:
        row = [Fraction(0)] * n
        for x in t:
            row[pos[x]] = Fraction(1)
        eqs.append((tuple(row), Fraction(1)))
    ineqs = [(tuple(Fraction(1) if j == i else Fraction(0) for j in range(n)), Fraction(0))
             for i in range(n)]
    verts = polytope_vertices(ineqs, eqs, n)
    return [dict(zip(order, v)) for v in verts]


def _weight_polytope_prob(ts: TestSpace) -> LinProb:
    prob = LinProb()
    for x in ts.outcomes:
        prob.var(("a", x))
    for t in ts.tests:
        prob.add({("a", x): 1 for x in t}, EQ, 1)
    return prob


def weight_equality_bound(ts: TestSpace, x, y) -> Fraction:
    """max of alpha(x) - alpha(y) over the weight polytope (exact LP)."""
    if x not in set(ts.outcomes) or y not in set(ts.outcomes):
        raise InputError("outcomes not in the test space")
    prob = _weight_polytope_prob(ts)
    status, value, _ = prob.maximize({("a", x): 1, ("a", y): -1})
    if status != OPTIMAL:
        if prob.certificate is not None:
            raise StructureError("weight polytope is empty")
        raise ConsistencyError("weight polytope cannot be unbounded")
    return value


def event_weight_bound(ts: TestSpace, a, b) -> Fraction:
    """max of alpha(A) - alpha(B) over the weight polytope, for events."""
    a = _require_event(ts, a)
    b = _require_event(ts, b)
    prob = _weight_polytope_prob(ts)
    obj = {}
    for x in a:
        obj[("a", x)] = obj.get(("a", x), 0) + 1
    for x in b:
        obj[("a", x)] = obj.get(("a", x), 0) - 1
    status, value, _ = prob.maximize(obj)
    if status != OPTIMAL:
        if prob.certificate is not None:
            raise StructureError("weight polytope is empty")
        raise ConsistencyError("weight polytope cannot be unbounded")
    return value
