"""Exact-rational linear programming.

A two-phase primal simplex over ``Fraction`` with Bland's anti-cycling rule.
The low-level entry point works on the standard form

    max c.x   subject to   A x = b,  x >= 0,

and reports an exact Farkas certificate on infeasibility.  ``LinProb`` is a
small named-variable builder on top of it (free variables are split, slack
columns are added for inequality rows) used by every membership and
feasibility check in the package.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ConsistencyError, InputError
from .linalg import frac

_ZERO = Fraction(0)
_ONE = Fraction(1)

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


def _pivot(tableau, obj, basis, prow, pcol):
    row = tableau[prow]
    pv = row[pcol]
    row = [x / pv for x in row]
    tableau[prow] = row
    for i, other in enumerate(tableau):
        if i != prow and other[pcol] != 0:
            f = other[pcol]
            tableau[i] = [x - f * y for x, y in zip(other, row)]
    if obj[pcol] != 0:
        f = obj[pcol]
        obj[:] = [x - f * y for x, y in zip(obj, row)]
    basis[prow] = pcol


def _run(tableau, obj, basis, enterable):
    """Bland's rule: enter the smallest column with positive reduced cost,
    leave on the minimum ratio with ties broken by smallest basis variable."""
    while True:
        enter = next((j for j in range(enterable) if obj[j] > 0), None)
        if enter is None:
            return OPTIMAL
        best = None
        best_row = None
        for i, row in enumerate(tableau):
            coef = row[enter]
            if coef > 0:
                key = (row[-1] / coef, basis[i])
                if best is None or key < best:
                    best, best_row = key, i
        if best_row is None:
            return UNBOUNDED
        _pivot(tableau, obj, basis, best_row, enter)


def solve_standard(a_rows, b, c=None):
    """Solve max c.x over {x >= 0 : A x = b}; c=None means pure feasibility.

    Returns (status, x, value, farkas).  On infeasibility, farkas is a vector
    y (one entry per row of A) with y.A <= 0 componentwise and y.b > 0.
    """
    m = len(a_rows)
    n = len(a_rows[0]) if m else (len(c) if c else 0)
    signs = [1 if frac(bi) >= 0 else -1 for bi in b]
    tableau = []
    for i in range(m):
        row = [signs[i] * frac(x) for x in a_rows[i]]
        row += [_ONE if j == i else _ZERO for j in range(m)]
        row.append(signs[i] * frac(b[i]))
        tableau.append(row)
    basis = [n + i for i in range(m)]
    total = n + m

    # Phase 1: maximize -sum(artificials); initial reduced costs are the
    # column sums over the original columns, zero on the artificial block.
    obj = [sum((tableau[i][j] for i in range(m)), _ZERO) for j in range(n)]
    obj += [_ZERO] * m
    obj.append(sum((tableau[i][-1] for i in range(m)), _ZERO))
    status = _run(tableau, obj, basis, total)
    if status != OPTIMAL:  # pragma: no cover - phase 1 is always bounded
        raise ConsistencyError("phase-1 simplex cannot be unbounded")
    if obj[-1] != 0:
        farkas = tuple(signs[i] * (_ONE + obj[n + i]) for i in range(m))
        return INFEASIBLE, None, None, farkas

    # Drive artificial variables out of the basis; drop redundant rows.
    keep = []
    for i in range(m):
        if basis[i] >= n:
            col = next((j for j in range(n) if tableau[i][j] != 0), None)
            if col is None:
                continue  # redundant constraint
            _pivot(tableau, obj, basis, i, col)
        keep.append(i)
    tableau = [tableau[i] for i in keep]
    basis = [basis[i] for i in keep]

    if c is None:
        x = _extract(tableau, basis, n)
        return OPTIMAL, x, _ZERO, None

    c = [frac(x) for x in c]
    obj = []
    for j in range(n):
        red = c[j] - sum((c[basis[i]] * tableau[i][j] for i in range(len(basis))), _ZERO)
        obj.append(red)
    obj += [_ZERO] * m
    obj.append(-sum((c[basis[i]] * tableau[i][-1] for i in range(len(basis))), _ZERO))
    status = _run(tableau, obj, basis, n)
    if status == UNBOUNDED:
        return UNBOUNDED, None, None, None
    x = _extract(tableau, basis, n)
    return OPTIMAL, x, -obj[-1], None


def _extract(tableau, basis, n):
    x = [_ZERO] * n
    for i, bv in enumerate(basis):
        if bv < n:
            x[bv] = tableau[i][-1]
    return tuple(x)


EQ = "=="
GE = ">="
LE = "<="


@dataclass
class LinProb:
    """Named-variable LP builder.

    Variables default to nonnegative; declare ``nonneg=False`` for free
    variables (they are split into positive and negative parts internally).
    """

    _vars: dict = field(default_factory=dict)
    _rows: list = field(default_factory=list)
    certificate: tuple | None = None

    def var(self, name, nonneg=True):
        if name in self._vars:
            if self._vars[name] != nonneg:
                raise InputError(f"variable {name!r} redeclared with a different sign")
        else:
            self._vars[name] = nonneg
        return name

    def add(self, coeffs, rel, rhs):
        if rel not in (EQ, GE, LE):
            raise InputError(f"unknown relation {rel!r}")
        row = {}
        for name, c in coeffs.items():
            c = frac(c)
            if c == 0:
                continue
            if name not in self._vars:
                self._vars[name] = True
            row[name] = c
        self._rows.append((row, rel, frac(rhs)))

    def _build(self, objective):
        columns = {}
        ncols = 0
        for name, nonneg in self._vars.items():
            if nonneg:
                columns[name] = ((ncols, _ONE),)
                ncols += 1
            else:
                columns[name] = ((ncols, _ONE), (ncols + 1, -_ONE))
                ncols += 2
        nslack = sum(1 for _, rel, _ in self._rows if rel != EQ)
        total = ncols + nslack
        a_rows, b = [], []
        slack = ncols
        for row, rel, rhs in self._rows:
            arow = [_ZERO] * total
            for name, c in row.items():
                for col, s in columns[name]:
                    arow[col] = c * s
            if rel == GE:
                arow[slack] = -_ONE
                slack += 1
            elif rel == LE:
                arow[slack] = _ONE
                slack += 1
            a_rows.append(arow)
            b.append(rhs)
        cvec = None
        if objective is not None:
            cvec = [_ZERO] * total
            for name, c in objective.items():
                if name not in columns:
                    raise InputError(f"objective names unknown variable {name!r}")
                for col, s in columns[name]:
                    cvec[col] = frac(c) * s
        return a_rows, b, cvec, columns

    def _assignment(self, x, columns):
        out = {}
        for name, cols in columns.items():
            out[name] = sum((s * x[col] for col, s in cols), _ZERO)
        return out

    def feasible(self):
        """A feasible assignment dict, or None (with ``certificate`` set)."""
        self.certificate = None
        a_rows, b, _, columns = self._build(None)
        status, x, _, farkas = solve_standard(a_rows, b, None)
        if status == INFEASIBLE:
            self.certificate = farkas
            return None
        return self._assignment(x, columns)

    def maximize(self, objective):
        """Returns (status, value, assignment)."""
        self.certificate = None
        a_rows, b, cvec, columns = self._build(objective)
        status, x, value, farkas = solve_standard(a_rows, b, cvec)
        if status == INFEASIBLE:
            self.certificate = farkas
            return INFEASIBLE, None, None
        if status == UNBOUNDED:
            return UNBOUNDED, None, None
        return OPTIMAL, value, self._assignment(x, columns)


def verify_farkas(prob: LinProb, y) -> bool:
    """Check a Farkas certificate against the problem's own rows.

    Conditions: for every nonnegative variable the y-combination of its
    coefficients is <= 0 (== 0 for free variables); y_r >= 0 on '>=' rows and
    y_r <= 0 on '<=' rows; and y.rhs > 0.  Together these refute feasibility.
    """
    if y is None or len(y) != len(prob._rows):
        return False
    for name, nonneg in prob._vars.items():
        s = sum((yr * row.get(name, _ZERO) for yr, (row, _, _) in zip(y, prob._rows)), _ZERO)
        if nonneg and s > 0:
            return False
        if not nonneg and s != 0:
            return False
    for yr, (_, rel, _) in zip(y, prob._rows):
        if rel == GE and yr < 0:
            return False
        if rel == LE and yr > 0:
            return False
    total = sum((yr * rhs for yr, (_, _, rhs) in zip(y, prob._rows)), _ZERO)
    return total > 0
