"""Exact two-phase simplex over the rationals with Bland's rule.

The problem layout follows ``scipy.optimize.linprog``::

    minimize    c @ x
    subject to  A_ub @ x <= b_ub
                A_eq @ x == b_eq
                lo <= x <= hi          (None = unbounded side)

Internally the tableau holds ``gmpy2.mpq`` values, which are exact and an
order of magnitude faster than ``Fraction``; everything crossing the API
boundary is a ``Fraction``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from gmpy2 import mpq

from .vectors import as_rational


class LPStructureError(ValueError):
    """Inconsistent dimensions in an LPProblem."""


class LPStatus(str, enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


def _frac(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


@dataclass(frozen=True)
class LPProblem:
    c: Sequence
    A_ub: Sequence[Sequence] = ()
    b_ub: Sequence = ()
    A_eq: Sequence[Sequence] = ()
    b_eq: Sequence = ()
    bounds: Optional[Sequence[tuple]] = None

    def __post_init__(self):
        n = len(self.c)
        conv = lambda rows: tuple(tuple(as_rational(x) for x in r) for r in rows)
        object.__setattr__(self, "c", tuple(as_rational(x) for x in self.c))
        object.__setattr__(self, "A_ub", conv(self.A_ub))
        object.__setattr__(self, "A_eq", conv(self.A_eq))
        object.__setattr__(self, "b_ub", tuple(as_rational(x) for x in self.b_ub))
        object.__setattr__(self, "b_eq", tuple(as_rational(x) for x in self.b_eq))
        if self.bounds is None:
            bounds = ((Fraction(0), None),) * n
        else:
            bounds = tuple(
                (None if lo is None else as_rational(lo), None if hi is None else as_rational(hi))
                for lo, hi in self.bounds
            )
        object.__setattr__(self, "bounds", bounds)
        if len(self.bounds) != n:
            raise LPStructureError(f"{len(self.bounds)} bounds for {n} variables")
        for name, A, rhs in (("A_ub", self.A_ub, self.b_ub), ("A_eq", self.A_eq, self.b_eq)):
            if len(A) != len(rhs):
                raise LPStructureError(f"{name} has {len(A)} rows but its right-hand side has {len(rhs)}")
            for r in A:
                if len(r) != n:
                    raise LPStructureError(f"{name} row of length {len(r)}, expected {n}")

    @property
    def n(self) -> int:
        return len(self.c)

    def is_feasible_point(self, x) -> bool:
        for row, rhs in zip(self.A_ub, self.b_ub):
            if sum(a * xi for a, xi in zip(row, x)) > rhs:
                return False
        for row, rhs in zip(self.A_eq, self.b_eq):
            if sum(a * xi for a, xi in zip(row, x)) != rhs:
                return False
        for (lo, hi), xi in zip(self.bounds, x):
            if (lo is not None and xi < lo) or (hi is not None and xi > hi):
                return False
        return True

    def objective(self, x) -> Fraction:
        return sum((ci * xi for ci, xi in zip(self.c, x)), Fraction(0))


@dataclass(frozen=True)
class LPSolution:
    status: LPStatus
    value: Optional[Fraction] = None
    x: Optional[tuple] = None
    # unbounded: feasible x plus a ray d with c @ d < 0
    ray: Optional[tuple] = None
    # infeasible: multipliers (lam >= 0 on A_ub rows, mu on A_eq rows)
    farkas: Optional[tuple] = None
    pivots: int = 0
    notes: dict = field(default_factory=dict)


def box_min(g, bounds) -> Optional[Fraction]:
    """min g @ x over lo <= x <= hi, or None for -infinity."""
    total = Fraction(0)
    for gj, (lo, hi) in zip(g, bounds):
        if gj > 0:
            if lo is None:
                return None
            total += gj * lo
        elif gj < 0:
            if hi is None:
                return None
            total += gj * hi
    return total


def check_certificate(problem: LPProblem, sol: LPSolution) -> bool:
    """Exact verification of whatever the solver claims."""
    if sol.status is LPStatus.OPTIMAL:
        return problem.is_feasible_point(sol.x) and problem.objective(sol.x) == sol.value
    if sol.status is LPStatus.UNBOUNDED:
        d = sol.ray
        if not problem.is_feasible_point(sol.x) or problem.objective(d) >= 0:
            return False
        for row in problem.A_ub:
            if sum(a * di for a, di in zip(row, d)) > 0:
                return False
        for row in problem.A_eq:
            if sum(a * di for a, di in zip(row, d)) != 0:
                return False
        for (lo, hi), dj in zip(problem.bounds, d):
            if (lo is not None and dj < 0) or (hi is not None and dj > 0):
                return False
        return True
    if any(lo is not None and hi is not None and lo > hi for lo, hi in problem.bounds):
        return True  # an empty box is its own certificate
    lam, mu = sol.farkas
    if any(l < 0 for l in lam):
        return False
    n = problem.n
    g = [Fraction(0)] * n
    rhs = Fraction(0)
    for l, row, bi in zip(lam, problem.A_ub, problem.b_ub):
        rhs += l * bi
        for j in range(n):
            g[j] += l * row[j]
    for m_, row, bi in zip(mu, problem.A_eq, problem.b_eq):
        rhs += m_ * bi
        for j in range(n):
            g[j] += m_ * row[j]
    lo_box = box_min(g, problem.bounds)
    if lo_box is None:
        return False
    return lo_box > rhs


class _Tableau:
    """Dense simplex tableau; row i is ``[coeffs..., rhs]``, basis[i] its basic column."""

    def __init__(self, rows, basis, n_cols, blocked):
        self.rows = rows
        self.basis = basis
        self.n_cols = n_cols
        self.blocked = blocked  # columns never allowed to enter
        self.obj = None
        self.pivots = 0

    def set_costs(self, costs):
        obj = [mpq(0)] * (self.n_cols + 1)
        for j, cj in costs.items():
            obj[j] = mpq(cj)
        for i, bcol in enumerate(self.basis):
            cb = obj[bcol]
            if cb:
                row = self.rows[i]
                for j, v in enumerate(row):
                    if v:
                        obj[j] -= cb * v
        self.obj = obj

    def pivot(self, r, s):
        prow = self.rows[r]
        pv = prow[s]
        if pv != 1:
            inv = 1 / pv
            for j, v in enumerate(prow):
                if v:
                    prow[j] = v * inv
        nz = [j for j, v in enumerate(prow) if v]
        for i, row in enumerate(self.rows):
            if i != r:
                f = row[s]
                if f:
                    for j in nz:
                        row[j] -= f * prow[j]
        f = self.obj[s]
        if f:
            obj = self.obj
            for j in nz:
                obj[j] -= f * prow[j]
        self.basis[r] = s
        self.pivots += 1

    def run(self):
        """Bland's rule until optimal; returns the unbounded entering column or None."""
        obj = self.obj
        while True:
            s = next((j for j in range(self.n_cols) if obj[j] < 0 and j not in self.blocked), None)
            if s is None:
                return None
            best = None
            for i, row in enumerate(self.rows):
                a_is = row[s]
                if a_is > 0:
                    ratio = row[-1] / a_is
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return s
            self.pivot(best[1], s)


def lp_min_decomposition(problem: LPProblem) -> LPSolution:
    """Solve ``problem`` exactly. Never rounds; terminates by Bland's rule."""
    n = problem.n
    empty = [j for j, (lo, hi) in enumerate(problem.bounds) if lo is not None and hi is not None and lo > hi]
    if empty:
        return LPSolution(LPStatus.INFEASIBLE, farkas=((Fraction(0),) * len(problem.b_ub),
                                                      (Fraction(0),) * len(problem.b_eq)),
                          notes={"empty_box": empty})
    # x_j = x0_j + sum(sign * Y_col) over the columns assigned to j
    x0 = []
    cols_of: list[list[tuple[int, int]]] = []
    ncol = 0
    bound_rows = []  # (col, width) for Y_col <= width
    for lo, hi in problem.bounds:
        if lo is not None:
            x0.append(lo)
            cols_of.append([(ncol, 1)])
            if hi is not None:
                bound_rows.append((ncol, hi - lo))
            ncol += 1
        elif hi is not None:
            x0.append(hi)
            cols_of.append([(ncol, -1)])
            ncol += 1
        else:
            x0.append(Fraction(0))
            cols_of.append([(ncol, 1), (ncol + 1, -1)])
            ncol += 2
    n_struct = ncol

    def expand(row):
        out = [mpq(0)] * n_struct
        for j, a_j in enumerate(row):
            if a_j:
                for col, sgn in cols_of[j]:
                    out[col] += sgn * mpq(a_j)
        return out

    # (kind, source index, structural coeffs, rhs)
    std = []
    for i, (row, bi) in enumerate(zip(problem.A_ub, problem.b_ub)):
        std.append(("ub", i, expand(row), mpq(bi - sum(a * x for a, x in zip(row, x0)))))
    for col, width in bound_rows:
        coeffs = [mpq(0)] * n_struct
        coeffs[col] = mpq(1)
        std.append(("bound", col, coeffs, mpq(width)))
    for k, (row, bk) in enumerate(zip(problem.A_eq, problem.b_eq)):
        std.append(("eq", k, expand(row), mpq(bk - sum(a * x for a, x in zip(row, x0)))))

    n_slack = sum(1 for s in std if s[0] != "eq")
    n_rows = len(std)
    art_rows = [i for i, s in enumerate(std) if s[0] == "eq" or s[3] < 0]
    n_art = len(art_rows)
    n_cols = n_struct + n_slack + n_art
    art_col = {}
    slack_col = {}
    rows, basis, sigma = [], [], []
    si = 0
    for i, (kind, _, coeffs, rhs) in enumerate(std):
        sg = -1 if rhs < 0 else 1
        sigma.append(sg)
        row = [mpq(0)] * (n_cols + 1)
        for j, v in enumerate(coeffs):
            if v:
                row[j] = sg * v
        if kind != "eq":
            slack_col[i] = n_struct + si
            row[n_struct + si] = mpq(sg)
            si += 1
        row[-1] = sg * rhs
        rows.append(row)
    for t, i in enumerate(art_rows):
        art_col[i] = n_struct + n_slack + t
        rows[i][art_col[i]] = mpq(1)
    for i in range(n_rows):
        basis.append(art_col[i] if i in art_col else slack_col[i])

    tab = _Tableau(rows, basis, n_cols, blocked=set())
    if n_art:
        tab.set_costs({art_col[i]: 1 for i in art_rows})
        tab.blocked = set(art_col.values())  # artificials never re-enter
        tab.run()
        infeas = -tab.obj[-1]
        if infeas > 0:
            # phase-1 duals y_i from reduced costs of the initial basis columns
            y = []
            for i in range(n_rows):
                if i in art_col:
                    y.append(1 - tab.obj[art_col[i]])
                else:
                    y.append(-tab.obj[slack_col[i]])
            lam = [Fraction(0)] * len(problem.A_ub)
            mu = [Fraction(0)] * len(problem.A_eq)
            for i, (kind, src, _, _) in enumerate(std):
                w = -_frac(y[i] * sigma[i])
                if kind == "ub":
                    lam[src] = w
                elif kind == "eq":
                    mu[src] = w
            sol = LPSolution(LPStatus.INFEASIBLE, farkas=(tuple(lam), tuple(mu)), pivots=tab.pivots,
                             notes={"phase1_infeasibility": _frac(infeas)})
            if not check_certificate(problem, sol):
                raise AssertionError("internal error: Farkas certificate failed verification")
            return sol
        # drive zero-level artificials out of the basis, dropping redundant rows
        arts = set(art_col.values())
        r = 0
        while r < len(tab.rows):
            if tab.basis[r] in arts:
                row = tab.rows[r]
                s = next((j for j in range(n_struct + n_slack) if row[j]), None)
                if s is None:
                    del tab.rows[r]
                    del tab.basis[r]
                    continue
                tab.pivot(r, s)
            r += 1

    costs = {}
    for j, cj in enumerate(problem.c):
        if cj:
            for col, sgn in cols_of[j]:
                costs[col] = costs.get(col, 0) + sgn * mpq(cj)
    tab.blocked = set(range(n_struct + n_slack, n_cols))
    tab.set_costs(costs)
    unbounded_col = tab.run()

    yval = [mpq(0)] * n_cols
    for i, bcol in enumerate(tab.basis):
        yval[bcol] = tab.rows[i][-1]

    def to_x(vec):
        return tuple(
            x0j + sum((sgn * _frac(vec[col]) for col, sgn in cols_of[j]), Fraction(0))
            for j, x0j in enumerate(x0)
        )

    x = to_x(yval)
    if unbounded_col is not None:
        d = [mpq(0)] * n_cols
        d[unbounded_col] = mpq(1)
        for i, bcol in enumerate(tab.basis):
            d[bcol] = -tab.rows[i][unbounded_col]
        ray = tuple(sum((sgn * _frac(d[col]) for col, sgn in cols_of[j]), Fraction(0)) for j in range(n))
        sol = LPSolution(LPStatus.UNBOUNDED, x=x, ray=ray, pivots=tab.pivots)
    else:
        sol = LPSolution(LPStatus.OPTIMAL, value=problem.objective(x), x=x, pivots=tab.pivots)
    if not check_certificate(problem, sol):
        raise AssertionError(f"internal error: {sol.status.value} result failed exact verification")
    return sol


solve_lp = lp_min_decomposition
