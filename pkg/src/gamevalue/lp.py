"""Exact two-phase simplex over :class:`fractions.Fraction`.

The solver works on a dense tableau and uses Bland's rule in both phases, so
it terminates on degenerate problems.  Dual values are read off the final
tableau and checked against the primal before an outcome is returned.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

LE, EQ, GE = "<=", "=", ">="
_RELATIONS = (LE, EQ, GE)


class LPStructureError(ValueError):
    """Raised for malformed linear programs or points of the wrong length."""


class Status(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError(f"refusing float {value!r}; pass int, str or Fraction")
    return Fraction(value)


@dataclass(frozen=True)
class Constraint:
    coefficients: tuple[Fraction, ...]
    relation: str
    rhs: Fraction

    def lhs(self, point: Sequence[Fraction]) -> Fraction:
        return sum((a * x for a, x in zip(self.coefficients, point) if a), Fraction(0))

    def holds(self, point: Sequence[Fraction]) -> bool:
        value = self.lhs(point)
        if self.relation == LE:
            return value <= self.rhs
        if self.relation == GE:
            return value >= self.rhs
        return value == self.rhs


@dataclass(frozen=True)
class LinearProgram:
    """maximize ``objective . x`` subject to ``constraints``.

    ``free`` lists the indices of variables without a sign restriction; every
    other variable is nonnegative.
    """

    objective: tuple[Fraction, ...]
    constraints: tuple[Constraint, ...]
    free: frozenset[int] = frozenset()

    @classmethod
    def build(cls, objective, constraints, free=()) -> "LinearProgram":
        obj = tuple(as_fraction(c) for c in objective)
        n = len(obj)
        rows = []
        for k, con in enumerate(constraints):
            if isinstance(con, Constraint):
                coeffs, rel, rhs = con.coefficients, con.relation, con.rhs
            else:
                coeffs, rel, rhs = con
            coeffs = tuple(as_fraction(a) for a in coeffs)
            if len(coeffs) != n:
                raise LPStructureError(
                    f"constraint {k} has {len(coeffs)} coefficients, expected {n}"
                )
            if rel not in _RELATIONS:
                raise LPStructureError(f"constraint {k}: unknown relation {rel!r}")
            rows.append(Constraint(coeffs, rel, as_fraction(rhs)))
        free_set = frozenset(free)
        if any(not 0 <= j < n for j in free_set):
            raise LPStructureError("free variable index out of range")
        return cls(obj, tuple(rows), free_set)

    @property
    def variable_count(self) -> int:
        return len(self.objective)


@dataclass(frozen=True)
class LPOutcome:
    status: Status
    primal: tuple[Fraction, ...] | None = None
    objective_value: Fraction | None = None
    dual: tuple[Fraction, ...] | None = None
    pivots: int = field(default=0, compare=False)

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


def check_point(lp: LinearProgram, point: Sequence) -> bool:
    """True iff ``point`` satisfies every constraint and sign restriction exactly."""
    if len(point) != lp.variable_count:
        raise LPStructureError(
            f"point has {len(point)} entries, LP has {lp.variable_count} variables"
        )
    pt = [as_fraction(x) for x in point]
    if any(x < 0 for j, x in enumerate(pt) if j not in lp.free):
        return False
    return all(con.holds(pt) for con in lp.constraints)


def dual_objective(lp: LinearProgram, dual: Sequence[Fraction]) -> Fraction:
    return sum((con.rhs * y for con, y in zip(lp.constraints, dual)), Fraction(0))


def check_dual(lp: LinearProgram, dual: Sequence) -> bool:
    """Feasibility of ``dual`` for the dual of ``lp``.

    Dual of max c.x:  min b.y  with  y >= 0 on <= rows, y <= 0 on >= rows,
    y free on = rows;  A^T y >= c on nonnegative columns and A^T y = c on
    free columns.
    """
    if len(dual) != len(lp.constraints):
        raise LPStructureError("dual vector length does not match constraint count")
    ys = [as_fraction(y) for y in dual]
    for con, y in zip(lp.constraints, ys):
        if con.relation == LE and y < 0:
            return False
        if con.relation == GE and y > 0:
            return False
    for j, c in enumerate(lp.objective):
        col = sum((con.coefficients[j] * y for con, y in zip(lp.constraints, ys)), Fraction(0))
        if j in lp.free:
            if col != c:
                return False
        elif col < c:
            return False
    return True


class _Tableau:
    """Dense simplex tableau, rows ``[a_1 .. a_N | b]``, maximization form."""

    def __init__(self, rows, basis):
        self.rows = rows
        self.basis = basis
        self.pivots = 0

    def pivot(self, r: int, col: int, obj: list[Fraction]) -> None:
        prow = self.rows[r]
        pv = prow[col]
        if pv != 1:
            inv = 1 / pv
            prow[:] = [a * inv if a else a for a in prow]
        for k, row in enumerate(self.rows):
            if k != r:
                f = row[col]
                if f:
                    row[:] = [a - f * b if b else a for a, b in zip(row, prow)]
        f = obj[col]
        if f:
            obj[:] = [a - f * b if b else a for a, b in zip(obj, prow)]
        self.basis[r] = col
        self.pivots += 1

    def run(self, obj: list[Fraction], allowed: Sequence[bool]) -> bool:
        """Bland's-rule iterations on reduced-cost row ``obj``.

        ``obj[j]`` holds z_j - c_j; a negative entry improves a maximization.
        Returns False if unbounded.
        """
        while True:
            col = next((j for j, d in enumerate(obj[:-1]) if d < 0 and allowed[j]), None)
            if col is None:
                return True
            best = None
            for r, row in enumerate(self.rows):
                a = row[col]
                if a > 0:
                    ratio = row[-1] / a
                    key = (ratio, self.basis[r])
                    if best is None or key < best[0]:
                        best = (key, r)
            if best is None:
                return False
            self.pivot(best[1], col, obj)


def solve(lp: LinearProgram) -> LPOutcome:
    """Solve ``lp`` exactly.

    On an optimal outcome the primal point is feasible, the dual vector (one
    entry per constraint, in the caller's orientation) is dual feasible, and
    both objectives are equal; all three are verified before returning.
    """
    n = lp.variable_count
    cons = lp.constraints
    m = len(cons)

    # Column layout: structural (free vars split in two), one slack/surplus per
    # inequality row, one artificial per = or >= row.
    split = sorted(lp.free)
    neg_col = {j: n + k for k, j in enumerate(split)}
    n_struct = n + len(split)

    signs = []
    norm = []
    for con in cons:
        sign = -1 if con.rhs < 0 else 1
        rel = con.relation
        if sign < 0 and rel != EQ:
            rel = GE if rel == LE else LE
        signs.append(sign)
        norm.append(rel)

    slack_col = {}
    col = n_struct
    for i, rel in enumerate(norm):
        if rel != EQ:
            slack_col[i] = col
            col += 1
    art_col = {}
    for i, rel in enumerate(norm):
        if rel != LE:
            art_col[i] = col
            col += 1
    width = col

    zero = Fraction(0)
    rows = []
    basis = []
    for i, con in enumerate(cons):
        row = [zero] * (width + 1)
        s = signs[i]
        for j, a in enumerate(con.coefficients):
            if a:
                row[j] = s * a
                if j in neg_col:
                    row[neg_col[j]] = -s * a
        if i in slack_col:
            row[slack_col[i]] = Fraction(1) if norm[i] == LE else Fraction(-1)
        if i in art_col:
            row[art_col[i]] = Fraction(1)
        row[-1] = s * con.rhs
        rows.append(row)
        basis.append(art_col.get(i, slack_col.get(i)))
    # the initial basic column of each row carries B^{-1} e_i at the end
    unit_col = list(basis)

    tab = _Tableau(rows, basis)
    is_art = [False] * width
    for c in art_col.values():
        is_art[c] = True

    if art_col:
        # phase 1: maximize -sum(artificials)
        obj = [zero] * (width + 1)
        for c in art_col.values():
            obj[c] = Fraction(1)
        for r, b in enumerate(tab.basis):
            if is_art[b]:
                obj[:] = [a - x for a, x in zip(obj, tab.rows[r])]
        tab.run(obj, [True] * width)
        if obj[-1] != 0:
            return LPOutcome(Status.INFEASIBLE, pivots=tab.pivots)
        # drive zero-level artificials out of the basis where possible
        for r in range(m):
            if is_art[tab.basis[r]]:
                j = next(
                    (j for j in range(width) if not is_art[j] and tab.rows[r][j] != 0),
                    None,
                )
                if j is not None:
                    tab.pivot(r, j, obj)

    cost = [zero] * width
    for j, c in enumerate(lp.objective):
        cost[j] = c
        if j in neg_col:
            cost[neg_col[j]] = -c
    obj = [-c for c in cost] + [zero]
    for r, b in enumerate(tab.basis):
        cb = cost[b]
        if cb:
            obj[:] = [a + cb * x for a, x in zip(obj, tab.rows[r])]
    allowed = [not a for a in is_art]
    if not tab.run(obj, allowed):
        return LPOutcome(Status.UNBOUNDED, pivots=tab.pivots)

    values = [zero] * width
    for r, b in enumerate(tab.basis):
        values[b] = tab.rows[r][-1]
    primal = tuple(values[j] - (values[neg_col[j]] if j in neg_col else 0) for j in range(n))
    # z_j - c_j over a unit column with zero cost is (c_B B^-1)_i
    dual = tuple(signs[i] * obj[unit_col[i]] for i in range(m))
    value = obj[-1]

    if not check_point(lp, primal):
        raise ArithmeticError("simplex produced an infeasible primal point")
    if not check_dual(lp, dual):
        raise ArithmeticError("simplex produced an infeasible dual point")
    if sum((c * x for c, x in zip(lp.objective, primal)), zero) != value:
        raise ArithmeticError("objective row out of sync with primal point")
    if dual_objective(lp, dual) != value:
        raise ArithmeticError("primal and dual objectives differ")
    return LPOutcome(Status.OPTIMAL, primal, value, dual, tab.pivots)


def solve_linear_system(matrix, rhs) -> tuple[tuple[Fraction, ...], int] | None:
    """Exact Gauss-Jordan elimination on ``matrix . x = rhs``.

    Returns ``(x, nullity)`` where ``x`` is the solution with free variables
    set to zero, or ``None`` when the system is inconsistent.
    """
    rows = [[as_fraction(a) for a in row] + [as_fraction(b)] for row, b in zip(matrix, rhs)]
    n = len(matrix[0]) if matrix else 0
    pivot_cols = []
    r = 0
    for c in range(n):
        p = next((k for k in range(r, len(rows)) if rows[k][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pv = rows[r][c]
        rows[r] = [a / pv for a in rows[r]]
        for k in range(len(rows)):
            if k != r and rows[k][c] != 0:
                f = rows[k][c]
                rows[k] = [a - f * b for a, b in zip(rows[k], rows[r])]
        pivot_cols.append(c)
        r += 1
        if r == len(rows):
            break
    if any(row[-1] != 0 for row in rows[r:]):
        return None
    x = [Fraction(0)] * n
    for k, c in enumerate(pivot_cols):
        x[c] = rows[k][-1]
    return tuple(x), n - len(pivot_cols)
