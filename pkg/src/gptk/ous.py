"""Finite-dimensional order-unit spaces with polyhedral cones.

A space is given by its dimension, a generating set of cone rays and an
order unit.  Construction validates the whole package contract: the cone is
pointed and spanning, the unit lies in the cone and dominates every basis
direction.  States are functionals in dual coordinates, effects are vectors
between 0 and the unit; both are plain tuples of Fractions.

Sub-spaces built from an effect interval carry ``ambient_basis``, the row
basis embedding their coordinates back into the parent space.  Closedness of
these polyhedral cones is what makes every order unit Archimedean here; that
is a property of the representation, not something a finite test can probe.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import InputError, StructureError
from .lp import LinProb, EQ
from .linalg import (
    Vec,
    basis_vec,
    is_zero_vec,
    rank,
    rref,
    vdot,
    vec,
    vsub,
    vsum,
)
from .polyhedra import extreme_rays, in_cone, polytope_vertices

_ONE = Fraction(1)


@dataclass(frozen=True)
class OrderUnitSpace:
    dim: int
    cone_generators: tuple
    unit: Vec
    ambient_basis: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "cone_generators",
                           tuple(vec(g) for g in self.cone_generators))
        object.__setattr__(self, "unit", vec(self.unit))
        if self.ambient_basis is not None:
            object.__setattr__(self, "ambient_basis",
                               tuple(vec(b) for b in self.ambient_basis))
        _validate_space(self)

    def __repr__(self):
        return f"OrderUnitSpace(dim={self.dim}, generators={len(self.cone_generators)})"


def _validate_space(space: OrderUnitSpace):
    d = space.dim
    if d < 1:
        raise InputError("dimension must be positive")
    if not space.cone_generators:
        raise InputError("cone needs at least one generator")
    for g in space.cone_generators:
        if len(g) != d:
            raise InputError("generator dimension mismatch")
        if is_zero_vec(g):
            raise InputError("zero vector is not a cone ray")
    if len(space.unit) != d:
        raise InputError("unit dimension mismatch")
    if rank(space.cone_generators) != d:
        raise StructureError("cone generators do not span the space")
    if _has_nontrivial_zero_combination(space.cone_generators):
        raise StructureError("cone is not pointed")
    if not in_cone(space.cone_generators, space.unit):
        raise StructureError("unit does not lie in the cone")
    if not is_order_unit(space, space.unit, _validated=True):
        raise StructureError("unit is not an order unit")


def _has_nontrivial_zero_combination(gens) -> bool:
    # The cone contains a line iff 0 is a nontrivial nonnegative combination
    # of the generators; normalizing the coefficients to sum 1 rules out the
    # trivial combination.
    dim = len(gens[0])
    prob = LinProb()
    for i, _ in enumerate(gens):
        prob.var(("l", i))
    for coord in range(dim):
        prob.add({("l", i): g[coord] for i, g in enumerate(gens)}, EQ, 0)
    prob.add({("l", i): 1 for i in range(len(gens))}, EQ, 1)
    return prob.feasible() is not None


def space(generators, unit, dim=None) -> OrderUnitSpace:
    gens = tuple(vec(g) for g in generators)
    u = vec(unit)
    return OrderUnitSpace(dim if dim is not None else len(u), gens, u)


def _check_dim(space: OrderUnitSpace, v) -> Vec:
    v = vec(v)
    if len(v) != space.dim:
        raise InputError(f"vector of length {len(v)} in a dim-{space.dim} space")
    return v


def cone_contains(space: OrderUnitSpace, v) -> bool:
    """Exact LP feasibility of v = sum_i lambda_i g_i with lambda >= 0."""
    return in_cone(space.cone_generators, _check_dim(space, v))


def is_effect(space: OrderUnitSpace, v) -> bool:
    v = _check_dim(space, v)
    return cone_contains(space, v) and cone_contains(space, vsub(space.unit, v))


def is_state(space: OrderUnitSpace, f) -> bool:
    f = _check_dim(space, f)
    if any(vdot(f, g) < 0 for g in space.cone_generators):
        return False
    return vdot(f, space.unit) == 1


@lru_cache(maxsize=None)
def dual_rays(space: OrderUnitSpace) -> tuple:
    """Extreme rays of {f : f(g) >= 0 on all cone generators}.

    These are the facet normals of the cone, i.e. its H-representation."""
    return tuple(extreme_rays(space.cone_generators, space.dim))


@lru_cache(maxsize=None)
def _state_vertices(space: OrderUnitSpace) -> tuple:
    ineqs = [(g, 0) for g in space.cone_generators]
    eqs = [(space.unit, 1)]
    try:
        verts = polytope_vertices(ineqs, eqs, space.dim)
    except StructureError as exc:
        raise StructureError("state set unbounded: unit is not an order unit") from exc
    return tuple(verts)


def state_polytope_vertices(space: OrderUnitSpace) -> list:
    """The extreme points of {f : f >= 0 on the cone, f(unit) = 1}."""
    return list(_state_vertices(space))


def is_order_unit(space: OrderUnitSpace, v, _validated=False) -> bool:
    """True iff each basis direction e_i satisfies -t v <= e_i <= t v for some t > 0."""
    v = v if _validated else _check_dim(space, v)
    gens = space.cone_generators
    for i in range(space.dim):
        e = basis_vec(space.dim, i)
        prob = LinProb()
        prob.var("t")
        for k, _ in enumerate(gens):
            prob.var(("p", k))
            prob.var(("m", k))
        for coord in range(space.dim):
            row = {("p", k): -g[coord] for k, g in enumerate(gens)}
            row["t"] = v[coord]
            prob.add(row, EQ, e[coord])
            row = {("m", k): -g[coord] for k, g in enumerate(gens)}
            row["t"] = v[coord]
            prob.add(row, EQ, -e[coord])
        if prob.feasible() is None:
            return False
    return True


def interval_vertices(space: OrderUnitSpace, v) -> list:
    """Vertices of the order interval [0, v] = {x : x >= 0 and v - x >= 0}."""
    v = _check_dim(space, v)
    facets = dual_rays(space)
    ineqs = [(f, 0) for f in facets]
    ineqs += [(tuple(-x for x in f), -vdot(f, v)) for f in facets]
    return polytope_vertices(ineqs, [], space.dim)


def sub_ous(space: OrderUnitSpace, v) -> OrderUnitSpace:
    """The sub-order-unit space spanned by [0, v], with order unit v.

    Cone generators are the nonzero vertices of [0, v] pruned to extreme
    rays; coordinates are taken relative to the reduced row-echelon basis of
    their span, which is stored as ``ambient_basis`` on the result.
    """
    v = _check_dim(space, v)
    if is_zero_vec(v):
        raise InputError("sub-space of the zero effect is empty")
    if not is_effect(space, v):
        raise InputError("sub-space base must be an effect")
    verts = [w for w in interval_vertices(space, v) if not is_zero_vec(w)]
    gens = [g for i, g in enumerate(verts)
            if not in_cone(verts[:i] + verts[i + 1:], g)]
    basis, _ = rref(gens)
    coords = [_coords_in_basis(basis, g) for g in gens]
    unit = _coords_in_basis(basis, v)
    return OrderUnitSpace(len(basis), tuple(coords), unit, ambient_basis=basis)


def _coords_in_basis(basis, x) -> Vec:
    # basis rows are in RREF, so the coefficient on row k is just the value
    # of x at that row's pivot column; verify the residual to catch inputs
    # outside the span.
    pivots = [next(i for i, e in enumerate(row) if e != 0) for row in basis]
    coeffs = tuple(x[p] for p in pivots)
    recon = vsum((tuple(c * e for e in row) for c, row in zip(coeffs, basis)), len(x))
    if recon != tuple(x):
        raise InputError("vector lies outside the sub-space span")
    return coeffs


def to_ambient(space: OrderUnitSpace, x) -> Vec:
    """Embed sub-space coordinates back into the parent space."""
    if space.ambient_basis is None:
        return vec(x)
    x = _check_dim(space, x)
    return vsum((tuple(c * e for e in row) for c, row in zip(x, space.ambient_basis)),
                len(space.ambient_basis[0]))


def from_ambient(space: OrderUnitSpace, x) -> Vec:
    """Express an ambient vector in sub-space coordinates (must lie in the span)."""
    if space.ambient_basis is None:
        return _check_dim(space, x)
    return _coords_in_basis(space.ambient_basis, vec(x))
