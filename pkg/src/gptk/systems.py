"""Stock spaces, test spaces, models and catalogs used across tests and the CLI.

The square-bit ("gbit") is the standard non-simplex example: a dim-3 space
whose states form a square, needed as the entanglement witness instance.
"""

from __future__ import annotations

from fractions import Fraction

from .linalg import basis_vec, vec
from .modj import Catalog, observable
from .ous import OrderUnitSpace
from .testspace import TestSpace, make_testspace
from .vweight import Model, ValuedWeight

F = Fraction
HALF = F(1, 2)


def classical(n: int) -> OrderUnitSpace:
    """n-outcome classical system: orthant cone, all-ones unit."""
    gens = tuple(basis_vec(n, i) for i in range(n))
    return OrderUnitSpace(n, gens, tuple(F(1) for _ in range(n)))


def dim1() -> OrderUnitSpace:
    return classical(1)


def bit() -> OrderUnitSpace:
    return classical(2)


def trit() -> OrderUnitSpace:
    return classical(3)


def square_bit() -> OrderUnitSpace:
    """Effect space of the square: states are (1, s, t) with s, t in {-1, 1}."""
    gens = (vec([HALF, HALF, 0]), vec([HALF, -HALF, 0]),
            vec([HALF, 0, HALF]), vec([HALF, 0, -HALF]))
    return OrderUnitSpace(3, gens, vec([1, 0, 0]))


def square_state_space() -> OrderUnitSpace:
    """The dual picture: cone over the square's vertices (the gbit state side)."""
    gens = (vec([1, 1, 1]), vec([1, 1, -1]), vec([1, -1, 1]), vec([1, -1, -1]))
    return OrderUnitSpace(3, gens, vec([1, 0, 0]))


def coin_testspace() -> TestSpace:
    return make_testspace([{"x", "y"}])


def triangle_testspace() -> TestSpace:
    return make_testspace([{"a", "b"}, {"b", "c"}, {"c", "a"}])


def two_overlapping_tests() -> TestSpace:
    return make_testspace([{"x", "y"}, {"y", "z"}])


def grid_testspace() -> TestSpace:
    """Rows and columns of a 3x3 grid: outcomes ('r<i>c<j>')."""
    rows = [{f"r{i}c{j}" for j in range(3)} for i in range(3)]
    cols = [{f"r{i}c{j}" for i in range(3)} for j in range(3)]
    return make_testspace(rows + cols)


def gbit_testspace() -> TestSpace:
    return make_testspace([{"X0", "X1"}, {"Y0", "Y1"}])


def gbit_model() -> Model:
    """Two binary measurements with the full square of states."""
    states = []
    for p in (0, 1):
        for q in (0, 1):
            states.append({"X0": F(p), "X1": F(1 - p), "Y0": F(q), "Y1": F(1 - q)})
    return Model(gbit_testspace(), tuple(states))


def classical_bit_model() -> Model:
    return Model(coin_testspace(), ({"x": F(1), "y": F(0)}, {"x": F(0), "y": F(1)}))


def pr_box() -> dict:
    """The extremal non-signalling correlation on a pair of gbits.

    Outcomes (s i) and (t j) correlate as i xor j = [s = Y][t = Y], each
    admissible pair carrying weight 1/2."""
    table = {}
    for s in "XY":
        for i in (0, 1):
            for t in "XY":
                for j in (0, 1):
                    hit = (i ^ j) == (1 if (s == "Y" and t == "Y") else 0)
                    table[(f"{s}{i}", f"{t}{j}")] = HALF if hit else F(0)
    return table


def delta_catalog(n: int = 2) -> Catalog:
    """The sharp n-outcome observable on the classical n-level system."""
    sp = classical(n)
    f = observable(sp, {str(i + 1): basis_vec(n, i) for i in range(n)})
    return Catalog(sp, (f,))


def permutation_catalog(values=(F(1, 6), F(1, 3), F(1, 2))) -> Catalog:
    """All permutations of three distinct scalars over indices 1..3 (dim-1).

    The graphs of these six observables tile the rows and columns of a 3x3
    grid."""
    from itertools import permutations

    sp = dim1()
    obs = []
    for perm in permutations(values):
        obs.append(observable(sp, {str(i + 1): (perm[i],) for i in range(3)}))
    return Catalog(sp, tuple(obs))


def sharp_binary_family(space: OrderUnitSpace, a, indices=("i", "j", "k")) -> Catalog:
    """All binary observables {(s, a), (t, unit - a)} over three indices.

    Closed for the weight-extension audit; with a sharp effect a (one taking
    both values 0 and 1 on states) every weight-polytope vertex extends."""
    a = vec(a)
    aprime = vec(u - x for u, x in zip(space.unit, a))
    obs = []
    for s in indices:
        for t in indices:
            if s != t:
                obs.append(observable(space, {s: a, t: aprime}))
    return Catalog(space, tuple(obs))


def gbit_sharp_effect():
    return vec([HALF, HALF, 0])


def grid_valued_weight() -> ValuedWeight:
    """The scalar weight (1/6, 1/3, 1/2) per row/column of the grid."""
    sp = dim1()
    values = {}
    scalars = {0: F(1, 6), 1: F(1, 3), 2: F(1, 2)}
    for i in range(3):
        for j in range(3):
            values[f"r{i}c{j}"] = (scalars[(j - i) % 3],)
    return ValuedWeight(sp, grid_testspace(), values)


def worked_bit_weight() -> ValuedWeight:
    """The three-outcome bit weight whose first two values are proportional."""
    sp = bit()
    ts = make_testspace([{"x", "y", "z"}])
    values = {"x": vec([HALF, F(1, 4)]),
              "y": vec([F(1, 4), F(1, 8)]),
              "z": vec([F(1, 4), F(5, 8)])}
    return ValuedWeight(sp, ts, values)
