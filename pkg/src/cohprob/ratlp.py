"""Exact linear programming over the rationals.

A small two-phase simplex, specialized for the tiny systems the coherence
machinery produces (tens of variables, a handful of constraints).  All
arithmetic is exact: constraint rows are kept as integer vectors (scaled by
the lcm of their denominators, gcd-reduced after every pivot) and reduced
costs as Fractions.  No floating point enters any code path.

Pivoting uses Bland's least-index rule for both the entering column and the
leaving-row tie break, which rules out cycling.  With fixed input order the
solver is fully deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence

LE = "<="
GE = ">="
EQ = "="

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[Fraction, ...]
    rel: str
    rhs: Fraction


def constraint(coeffs: Iterable, rel: str, rhs) -> Constraint:
    """Convenience constructor coercing entries to Fraction."""
    if rel not in (LE, GE, EQ):
        raise ValueError(f"unknown relation {rel!r}")
    return Constraint(tuple(Fraction(c) for c in coeffs), rel, Fraction(rhs))


@dataclass(frozen=True)
class LinearProgram:
    """max or min of objective . x subject to constraints and x >= 0."""

    num_vars: int
    constraints: tuple[Constraint, ...]
    objective: tuple[Fraction, ...]
    sense: str = "max"


def program(num_vars, constraints, objective=None, sense="max") -> LinearProgram:
    if objective is None:
        objective = [0] * num_vars
    if sense not in ("max", "min"):
        raise ValueError(f"unknown sense {sense!r}")
    return LinearProgram(
        num_vars, tuple(constraints), tuple(Fraction(c) for c in objective), sense
    )


@dataclass(frozen=True)
class Solution:
    status: str
    value: Optional[Fraction] = None
    point: Optional[tuple[Fraction, ...]] = None


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def _reduce_row(row: list[int]) -> None:
    g = 0
    for a in row:
        g = gcd(g, a)
        if g == 1:
            return
    if g > 1:
        for j, a in enumerate(row):
            row[j] = a // g


def _pivot(T: list[list[int]], basis: list[int], R: Optional[list[Fraction]],
           i: int, c: int) -> None:
    """Bring column c into the basis at row i.  T[i][c] must be positive."""
    piv = T[i]
    v = piv[c]
    if R is not None and R[c]:
        f = R[c]
        for j in range(len(R)):
            R[j] -= f * piv[j] / v
        R[c] = Fraction(0)
    for k, row in enumerate(T):
        if k == i:
            continue
        a = row[c]
        if a:
            for j in range(len(row)):
                row[j] = v * row[j] - a * piv[j]
            _reduce_row(row)
    _reduce_row(piv)
    basis[i] = c


def _run(T: list[list[int]], basis: list[int], R: list[Fraction],
         blocked: set[int]) -> str:
    """Maximize with Bland's rule; R holds reduced costs per column."""
    ncols = len(R)
    while True:
        enter = -1
        for j in range(ncols):
            if R[j] > 0 and j not in blocked:
                enter = j
                break
        if enter < 0:
            return OPTIMAL
        best = None
        leave = -1
        for i, row in enumerate(T):
            a = row[enter]
            if a > 0:
                ratio = Fraction(row[-1], a)
                if best is None or ratio < best or (
                    ratio == best and basis[i] < basis[leave]
                ):
                    best = ratio
                    leave = i
        if leave < 0:
            return UNBOUNDED
        _pivot(T, basis, R, leave, enter)


def solve(lp: LinearProgram) -> Solution:
    n = lp.num_vars
    if len(lp.objective) != n:
        raise ValueError("objective length does not match num_vars")

    # Scale every constraint to integers with nonnegative right-hand side.
    scaled: list[tuple[list[int], str, int]] = []
    for con in lp.constraints:
        if len(con.coeffs) != n:
            raise ValueError("constraint length does not match num_vars")
        den = con.rhs.denominator
        for c in con.coeffs:
            den = _lcm(den, c.denominator)
        ints = [int(c * den) for c in con.coeffs]
        rhs = int(con.rhs * den)
        rel = con.rel
        if rhs < 0:
            ints = [-a for a in ints]
            rhs = -rhs
            rel = {LE: GE, GE: LE, EQ: EQ}[rel]
        scaled.append((ints, rel, rhs))

    # Column layout: structural | slack/surplus | artificial.
    n_slack = sum(1 for _, rel, _ in scaled if rel != EQ)
    art_start = n + n_slack
    n_art = sum(1 for _, rel, _ in scaled if rel != LE)
    ncols = art_start + n_art

    T: list[list[int]] = []
    basis: list[int] = []
    slack_at = n
    art_at = art_start
    art_rows: list[int] = []
    for ints, rel, rhs in scaled:
        row = ints + [0] * (ncols - n) + [rhs]
        if rel == LE:
            row[slack_at] = 1
            basis.append(slack_at)
            slack_at += 1
        else:
            if rel == GE:
                row[slack_at] = -1
                slack_at += 1
            row[art_at] = 1
            basis.append(art_at)
            art_rows.append(len(T))
            art_at += 1
        T.append(row)

    blocked: set[int] = set()

    if n_art:
        # Phase 1: maximize minus the sum of artificials, i.e. reduced costs
        # are the column sums over artificial-basic rows.
        R1 = [Fraction(0)] * ncols
        for i in art_rows:
            row = T[i]
            v = row[basis[i]]
            for j in range(ncols):
                if row[j]:
                    R1[j] += Fraction(row[j], v)
        for j in range(art_start, ncols):
            R1[j] -= 1
        blocked = set(range(art_start, ncols))  # artificials never re-enter
        _run(T, basis, R1, blocked)
        residue = sum(
            (Fraction(T[i][-1], T[i][basis[i]]) for i in range(len(T))
             if basis[i] >= art_start),
            Fraction(0),
        )
        if residue > 0:
            return Solution(INFEASIBLE)
        # Drive zero-level artificials out of the basis, dropping rows that
        # turned out redundant.
        keep: list[int] = []
        for i in range(len(T)):
            if basis[i] < art_start:
                keep.append(i)
                continue
            row = T[i]
            enter = next((j for j in range(art_start) if row[j]), None)
            if enter is None:
                continue  # 0 = 0 row
            if row[enter] < 0:
                for j in range(len(row)):
                    row[j] = -row[j]
            _pivot(T, basis, None, i, enter)
            keep.append(i)
        T = [T[i][:art_start] + [T[i][-1]] for i in keep]
        basis = [basis[i] for i in keep]
        ncols = art_start

    # Phase 2 over the real objective.
    internal = list(lp.objective)
    if lp.sense == "min":
        internal = [-c for c in internal]
    cfull = [Fraction(c) for c in internal] + [Fraction(0)] * (ncols - n)
    R = list(cfull)
    for i, row in enumerate(T):
        cb = cfull[basis[i]]
        if cb:
            v = row[basis[i]]
            for j in range(ncols):
                if row[j]:
                    R[j] -= cb * Fraction(row[j], v)
    status = _run(T, basis, R, set())
    if status == UNBOUNDED:
        return Solution(UNBOUNDED)

    point = [Fraction(0)] * n
    for i, row in enumerate(T):
        if basis[i] < n:
            point[basis[i]] = Fraction(row[-1], row[basis[i]])
    value = sum((c * x for c, x in zip(lp.objective, point)), Fraction(0))
    return Solution(OPTIMAL, value, tuple(point))


def feasible_point_with_max_support(
    num_vars: int,
    constraints: Sequence[Constraint],
    groups: Sequence[Sequence[int]],
) -> Optional[tuple[tuple[Fraction, ...], frozenset[int]]]:
    """A feasible point giving positive total mass to every group that can.

    For each group of variable indices, maximizes the group's total mass;
    the returned point is the equal-weight average of the per-group optima,
    which by convexity is feasible and keeps every achievable positivity.
    Returns (point, indices of groups with positive mass), or None when the
    constraints are infeasible.
    """
    cons = tuple(constraints)
    if not groups:
        sol = solve(program(num_vars, cons))
        if sol.status != OPTIMAL:
            return None
        return sol.point, frozenset()

    points: list[tuple[Fraction, ...]] = []
    positive: set[int] = set()
    for gi, group in enumerate(groups):
        obj = [Fraction(0)] * num_vars
        for j in group:
            obj[j] = Fraction(1)
        sol = solve(program(num_vars, cons, obj, "max"))
        if sol.status == INFEASIBLE:
            return None
        if sol.status == UNBOUNDED:
            # cap the group so a concrete positive-mass point comes back
            capped = cons + (Constraint(tuple(obj), LE, Fraction(1)),)
            sol = solve(program(num_vars, capped, obj, "max"))
        points.append(sol.point)
        if sol.value > 0:
            positive.add(gi)
    k = len(points)
    avg = tuple(
        sum((p[j] for p in points), Fraction(0)) / k for j in range(num_vars)
    )
    return avg, frozenset(positive)
