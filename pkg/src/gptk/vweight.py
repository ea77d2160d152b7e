"""Vector-valued weights on test spaces and the canonical factorization.

A valued weight sends each outcome into the positive cone of an order-unit
space so that every test sums exactly to the order unit.  Pulling such a
weight back along a state yields an ordinary probability weight; conversely,
a probabilistic model determines a canonical weight into the dual of the
span of its states, and every valued weight factors through it.  The
factorization check verifies the well-definedness that makes this work:
every rational linear relation among the evaluation functionals must be
satisfied by the weight's values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ConsistencyError, InputError
from .linalg import is_zero_vec, nullspace, rref, vdot, vec, vsum, zeros
from .ous import OrderUnitSpace, cone_contains, is_state, state_polytope_vertices
from .testspace import TestSpace, canon_key, is_probability_weight


@dataclass(frozen=True, eq=False)
class ValuedWeight:
    space: OrderUnitSpace
    testspace: TestSpace
    values: dict

    def __post_init__(self):
        unknown = set(self.values) - set(self.testspace.outcomes)
        if unknown:
            raise InputError(f"values given for unknown outcomes {sorted(map(str, unknown))}")
        vals = {}
        for x in self.testspace.outcomes:
            if x not in self.values:
                raise InputError(f"valued weight is missing outcome {x!r}")
            v = vec(self.values[x])
            if len(v) != self.space.dim:
                raise InputError(f"value at {x!r} has wrong dimension")
            vals[x] = v
        object.__setattr__(self, "values", vals)

    def __call__(self, x):
        return self.values[x]

    def event_value(self, ev):
        """F(A) means the sum of F over the event's outcomes."""
        return vsum((self.values[x] for x in ev), self.space.dim)


@dataclass(eq=False)
class Model:
    """A test space with a distinguished finite list of generating states."""

    testspace: TestSpace
    states: tuple

    def __post_init__(self):
        seen = set()
        out = []
        for alpha in self.states:
            if not is_probability_weight(self.testspace, alpha):
                raise InputError("model state is not a probability weight")
            table = tuple(Fraction(alpha[x]) for x in self.testspace.outcomes)
            if table not in seen:
                seen.add(table)
                out.append({x: Fraction(alpha[x]) for x in self.testspace.outcomes})
        if not out:
            raise InputError("model needs at least one state")
        self.states = tuple(out)


def is_valued_weight(f: ValuedWeight) -> bool:
    """Cone membership of every value and exact per-test sums to the unit."""
    if not all(cone_contains(f.space, v) for v in f.values.values()):
        return False
    return all(f.event_value(t) == f.space.unit for t in f.testspace.tests)


def pullback_state(f: ValuedWeight, phi) -> dict:
    """The probability weight x -> phi(F(x)) induced by a state phi."""
    phi = vec(phi)
    if not is_state(f.space, phi):
        raise InputError("pullback requires a valid state")
    return {x: vdot(phi, v) for x, v in f.values.items()}


def _state_matrix(model: Model):
    order = list(model.testspace.outcomes)
    rows = [tuple(alpha[x] for x in order) for alpha in model.states]
    return order, rows


def canonical_weight(model: Model) -> ValuedWeight:
    """The weight sending each outcome to its evaluation functional.

    The target space is the dual of the span of the model's states: fix the
    reduced row-echelon basis B of the state matrix; the evaluation
    functional of outcome x has coordinates given by column x of B.  Its cone
    is generated by the nonzero evaluation functionals and its unit is the
    common per-test sum of them.
    """
    order, rows = _state_matrix(model)
    basis, _ = rref(rows)
    dim = len(basis)
    if dim == 0:
        raise InputError("model states span nothing")
    hats = {x: tuple(basis[k][j] for k in range(dim)) for j, x in enumerate(order)}
    sums = {t: vsum((hats[x] for x in t), dim) for t in model.testspace.tests}
    unit = next(iter(sums.values()))
    if any(s != unit for s in sums.values()):
        raise ConsistencyError("per-test sums of evaluation functionals differ")
    gens = []
    for x in sorted(hats, key=canon_key):
        h = hats[x]
        if not is_zero_vec(h) and h not in gens:
            gens.append(h)
    target = OrderUnitSpace(dim, tuple(gens), unit)
    return ValuedWeight(target, model.testspace, hats)


def factorization_check(f: ValuedWeight) -> bool:
    """Every valued weight factors through the canonical weight of its model.

    Build the model whose states are the pullbacks of the state-polytope
    vertices, compute its canonical weight F', and check that assigning
    F(x) to the evaluation functional of x is well-defined: each basis
    relation sum_j c_j x_hat_j = 0 must force sum_j c_j F(x_j) = 0.
    """
    if not is_valued_weight(f):
        raise InputError("factorization check needs a valid valued weight")
    verts = state_polytope_vertices(f.space)
    states = [pullback_state(f, phi) for phi in verts]
    model = Model(f.testspace, tuple(states))
    fprime = canonical_weight(model)
    order = list(model.testspace.outcomes)
    columns = [fprime.values[x] for x in order]
    hat_matrix = [tuple(col[k] for col in columns) for k in range(fprime.space.dim)]
    for c in nullspace(hat_matrix, len(order)):
        combo = zeros(f.space.dim)
        for cj, x in zip(c, order):
            if cj != 0:
                combo = vec(a + cj * b for a, b in zip(combo, f.values[x]))
        if not is_zero_vec(combo):
            return False
    return True
