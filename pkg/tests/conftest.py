"""Shared oracles and samplers for the test suite.

The vertex/ray oracles here are deliberately independent of the package's
double-description implementation: they enumerate active constraint subsets
by brute force and solve exactly.  Frozen expected values in the tests were
computed with these.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from gptk.linalg import nullspace, rank, solve_linear, vdot, vec
from gptk.ous import cone_contains, is_effect, state_polytope_vertices

F = Fraction


def brute_polytope_vertices(ineqs, eqs, dim):
    """Oracle: vertices of {x : a.x >= b, c.x = d} by active-set enumeration."""
    ineqs = [(vec(a), F(b)) for a, b in ineqs]
    eqs = [(vec(c), F(d)) for c, d in eqs]
    eq_rows = [c for c, _ in eqs]
    eq_rhs = [d for _, d in eqs]
    base_rank = rank(eq_rows)
    need = dim - base_rank
    verts = set()
    for active in combinations(range(len(ineqs)), need):
        rows = eq_rows + [ineqs[i][0] for i in active]
        rhs = eq_rhs + [ineqs[i][1] for i in active]
        if rank(rows) != dim:
            continue
        x = solve_linear(rows, rhs)
        if x is None:
            continue
        if all(vdot(a, x) >= b for a, b in ineqs):
            verts.add(x)
    return sorted(verts)


def brute_extreme_rays(normals, dim):
    """Oracle: extreme rays by rank-(dim-1) active subsets, primitive form."""
    from gptk.linalg import primitive

    normals = [vec(a) for a in normals]
    rays = set()
    for active in combinations(range(len(normals)), max(dim - 1, 0)):
        rows = [normals[i] for i in active]
        if rank(rows) != dim - 1:
            continue
        null = nullspace(rows, dim)
        if len(null) != 1:
            continue
        for cand in (null[0], tuple(-x for x in null[0])):
            if all(vdot(a, cand) >= 0 for a in normals):
                rays.add(primitive(cand))
    return sorted(rays)


def rand_fraction(rng: random.Random, lo=-2, hi=2, den=6) -> F:
    d = rng.randint(1, den)
    n = rng.randint(lo * d, hi * d)
    return F(n, d)


def rand_cone_element(rng, space, scale=F(1)):
    """Random nonnegative combination of the cone generators."""
    out = vec([0] * space.dim)
    for g in space.cone_generators:
        c = F(rng.randint(0, 4), rng.randint(1, 5)) * scale
        out = vec(o + c * gi for o, gi in zip(out, g))
    return out


def rand_effect(rng, space, tries=50):
    """Random nonzero effect, by shrinking a random cone element under the unit."""
    for _ in range(tries):
        v = rand_cone_element(rng, space)
        if all(x == 0 for x in v):
            continue
        for k in range(6):
            w = vec(x / (2 ** k) for x in v)
            if is_effect(space, w):
                return w
    raise AssertionError("failed to sample an effect")


def rand_state(rng, space):
    """Random rational convex combination of the state-polytope vertices."""
    verts = state_polytope_vertices(space)
    weights = [F(rng.randint(0, 6)) for _ in verts]
    if sum(weights) == 0:
        weights[rng.randrange(len(verts))] = F(1)
    total = sum(weights)
    out = vec([0] * space.dim)
    for w, v in zip(weights, verts):
        out = vec(o + (w / total) * vi for o, vi in zip(out, v))
    return out


def rand_valued_weight(rng, space, testspace=None):
    """Random valued weight on a single test or on the 3x3 grid.

    Built as sum_j beta_j(x) w_j with effects w_j summing to the unit, which
    makes per-test sums land on the unit exactly.
    """
    from gptk.systems import grid_testspace
    from gptk.testspace import make_testspace
    from gptk.vweight import ValuedWeight

    if testspace is None:
        n = rng.randint(2, 4)
        testspace = make_testspace([{f"o{i}" for i in range(n)}])
    tests = testspace.tests
    if len(tests) == 1:
        test = sorted(next(iter(tests)), key=str)
        small = []
        for _ in test[:-1]:
            w = rand_cone_element(rng, space, scale=F(1, 8 * len(test)))
            small.append(w)
        rest = space.unit
        for w in small:
            rest = vec(r - wi for r, wi in zip(rest, w))
        if not cone_contains(space, rest):
            return rand_valued_weight(rng, space, testspace)
        values = dict(zip(test[:-1], small))
        values[test[-1]] = rest
        return ValuedWeight(space, testspace, values)
    # grid: combine permutation masks sigma with effects w_sigma summing to u
    assert testspace == grid_testspace()
    from itertools import permutations

    perms = list(permutations(range(3)))
    small = {}
    for sigma in perms[1:]:
        small[sigma] = rand_cone_element(rng, space, scale=F(1, 60))
    rest = space.unit
    for w in small.values():
        rest = vec(r - wi for r, wi in zip(rest, w))
    if not cone_contains(space, rest):
        return rand_valued_weight(rng, space, testspace)
    small[perms[0]] = rest
    values = {}
    for i in range(3):
        for j in range(3):
            acc = vec([0] * space.dim)
            for sigma, w in small.items():
                if sigma[i] == j:
                    acc = vec(a + wi for a, wi in zip(acc, w))
            values[f"r{i}c{j}"] = acc
    return ValuedWeight(space, testspace, values)
