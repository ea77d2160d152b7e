"""Polyhedral conversions: H-representation to extreme rays and vertices.

``extreme_rays`` is an incremental double-description pass over a pointed
cone given by inequality normals; adjacency of rays is decided by the exact
algebraic rank test on their common active constraints.  ``polytope_vertices``
reduces a bounded H-polytope to a cone by eliminating equality constraints
and homogenizing, then normalizes the rays back to vertices.

Everything is exact; ray outputs are primitive integer vectors and vertex
lists are canonically sorted, so the results are deterministic.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import StructureError
from .lp import LinProb, EQ, GE
from .linalg import (
    basis_vec,
    invert,
    is_zero_vec,
    nullspace,
    primitive,
    rank,
    solve_linear,
    vadd,
    vdot,
    vec,
    vscale,
    vsub,
    zeros,
)

_ZERO = Fraction(0)


def _independent_subset(rows, dim):
    picked = []
    idx = []
    for i, r in enumerate(rows):
        if rank(picked + [r]) > len(picked):
            picked.append(r)
            idx.append(i)
            if len(picked) == dim:
                return idx
    return None


def extreme_rays(normals, dim: int) -> list:
    """Extreme rays of the pointed cone {x : a.x >= 0 for a in normals}.

    Raises StructureError when the normals do not have full rank (the cone
    then contains a line and has no extreme-ray description).
    """
    rows = [vec(a) for a in normals if not is_zero_vec(vec(a))]
    seen = set()
    uniq = []
    for r in rows:
        p = primitive(r)
        if p not in seen:
            seen.add(p)
            uniq.append(p)
    rows = uniq
    base = _independent_subset(rows, dim)
    if base is None:
        raise StructureError("cone is not pointed (inequality normals do not span)")
    inv = invert([rows[i] for i in base])
    rays = [primitive(tuple(inv[i][j] for i in range(dim))) for j in range(dim)]
    processed = list(base)
    remaining = [i for i in range(len(rows)) if i not in set(base)]

    for t in remaining:
        a = rows[t]
        vals = [vdot(a, r) for r in rays]
        pos = [(r, v) for r, v in zip(rays, vals) if v > 0]
        zer = [r for r, v in zip(rays, vals) if v == 0]
        neg = [(r, v) for r, v in zip(rays, vals) if v < 0]
        if not neg:
            processed.append(t)
            continue
        new_rays = [r for r, _ in pos] + zer
        new_set = set(new_rays)
        for p, vp in pos:
            for q, vq in neg:
                if not _adjacent(rows, processed, p, q, dim):
                    continue
                w = primitive(vsub(vscale(vp, q), vscale(vq, p)))
                if not is_zero_vec(w) and w not in new_set:
                    new_set.add(w)
                    new_rays.append(w)
        rays = new_rays
        processed.append(t)
    return sorted(rays)


def _adjacent(rows, processed, p, q, dim):
    if dim < 2:
        return False
    active = [rows[i] for i in processed if vdot(rows[i], p) == 0 and vdot(rows[i], q) == 0]
    return rank(active) == dim - 2


def polytope_vertices(ineqs, eqs, dim: int) -> list:
    """Vertices of {x in R^dim : a.x >= b for (a,b) in ineqs, c.x = d for (c,d) in eqs}.

    Returns [] when the polytope is empty and raises StructureError when it
    is unbounded (a recession ray survives homogenization).
    """
    ineqs = [(vec(a), Fraction(b)) for a, b in ineqs]
    eqs = [(vec(c), Fraction(d)) for c, d in eqs]

    prob = LinProb()
    for i in range(dim):
        prob.var(("x", i), nonneg=False)
    for a, b in ineqs:
        prob.add({("x", i): a[i] for i in range(dim)}, GE, b)
    for c, d in eqs:
        prob.add({("x", i): c[i] for i in range(dim)}, EQ, d)
    if prob.feasible() is None:
        return []

    if eqs:
        c_rows = [c for c, _ in eqs]
        x0 = solve_linear(c_rows, [d for _, d in eqs])
        if x0 is None:  # pragma: no cover - feasibility already established
            return []
        basis = nullspace(c_rows, dim)
    else:
        x0 = zeros(dim)
        basis = [basis_vec(dim, i) for i in range(dim)]

    k = len(basis)
    if k == 0:
        return [x0]

    rows = []
    for a, b in ineqs:
        rows.append(tuple(vdot(a, n) for n in basis) + (vdot(a, x0) - b,))
    rows.append(zeros(k) + (Fraction(1),))
    rays = extreme_rays(rows, k + 1)

    verts = []
    for r in rays:
        t = r[-1]
        if t == 0:
            raise StructureError("polytope is unbounded")
        y = [x / t for x in r[:-1]]
        v = x0
        for yi, n in zip(y, basis):
            v = vadd(v, vscale(yi, n))
        verts.append(v)
    return sorted(set(verts))


def in_cone(generators, v) -> bool:
    """Membership of v in the cone nonnegatively generated by ``generators``."""
    gens = [vec(g) for g in generators]
    target = vec(v)
    dim = len(target)
    prob = LinProb()
    for i, _ in enumerate(gens):
        prob.var(("l", i))
    for coord in range(dim):
        prob.add({("l", i): g[coord] for i, g in enumerate(gens)}, EQ, target[coord])
    return prob.feasible() is not None


def hull_membership(points, target):
    """Membership of ``target`` in the convex hull of ``points``.

    Returns (True, weights) with an exact convex combination, or
    (False, (prob, farkas)) where ``farkas`` refutes membership and can be
    re-verified with :func:`gptk.lp.verify_farkas`.
    """
    pts = [vec(p) for p in points]
    tgt = vec(target)
    dim = len(tgt)
    prob = LinProb()
    for i, _ in enumerate(pts):
        prob.var(("l", i))
    for coord in range(dim):
        prob.add({("l", i): p[coord] for i, p in enumerate(pts)}, EQ, tgt[coord])
    prob.add({("l", i): 1 for i in range(len(pts))}, EQ, 1)
    sol = prob.feasible()
    if sol is None:
        return False, (prob, prob.certificate)
    return True, tuple(sol[("l", i)] for i in range(len(pts)))
