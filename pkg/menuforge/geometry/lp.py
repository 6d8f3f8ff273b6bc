"""
Exact Linear Programming

Two-phase simplex over Fractions with Bland's rule (smallest-index entering
and leaving variables), so it always terminates and never rounds.

CRITICAL RESPONSIBILITIES:
1. Bring an arbitrary HalfspaceSystem into standard form (split free variables, add slacks)
2. Phase 1 with artificials decides feasibility and drops redundant equality rows
3. Phase 2 optimizes or reports unboundedness
4. Every optimal point is checked by exact substitution before it is returned
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from menuforge.core.exceptions import InputError, LPCertificateError
from menuforge.geometry.models import HalfspaceSystem
from menuforge.geometry.rational import Vector, as_vector, dot, ZERO, ONE


logger = logging.getLogger(__name__)


class LPStatus(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


class Sense(str, Enum):
    MAX = "max"
    MIN = "min"


@dataclass(frozen=True)
class LPResult:
    status: LPStatus
    value: Optional[Fraction] = None
    point: Optional[Vector] = None

    @property
    def optimal(self) -> bool:
        return self.status == LPStatus.OPTIMAL


# ============================================================================
# STANDARD FORM
# ============================================================================

@dataclass
class _StandardForm:
    """max c.z s.t. A z = b, z >= 0 together with the map back to x"""

    A: List[List[Fraction]]
    b: List[Fraction]
    # column index of x_k's positive part, and of its negative part (None when x_k >= 0 is explicit)
    plus: List[int]
    minus: List[Optional[int]]
    n_columns: int


def _nonnegative_variables(system: HalfspaceSystem) -> Tuple[set, List[int]]:
    """Variables bounded below by an explicit row -x_k <= 0; such rows are absorbed"""
    bounded = set()
    absorbed = []
    for i, (a, b) in enumerate(system.rows):
        if b != 0:
            continue
        support = [k for k, v in enumerate(a) if v != 0]
        if len(support) == 1 and a[support[0]] < 0:
            bounded.add(support[0])
            absorbed.append(i)
    return bounded, absorbed


def _standard_form(system: HalfspaceSystem) -> _StandardForm:
    bounded, absorbed = _nonnegative_variables(system)
    absorbed_rows = set(absorbed)

    plus: List[int] = []
    minus: List[Optional[int]] = []
    col = 0
    for k in range(system.dim):
        plus.append(col)
        col += 1
        if k in bounded:
            minus.append(None)
        else:
            minus.append(col)
            col += 1
    n_structural = col

    inequalities = [row for i, row in enumerate(system.rows) if i not in absorbed_rows]
    n_columns = n_structural + len(inequalities)

    def expand(a: Vector) -> List[Fraction]:
        row = [ZERO] * n_columns
        for k, v in enumerate(a):
            if v:
                row[plus[k]] = v
                if minus[k] is not None:
                    row[minus[k]] = -v
        return row

    A: List[List[Fraction]] = []
    b: List[Fraction] = []
    for s, (a, offset) in enumerate(inequalities):
        row = expand(a)
        row[n_structural + s] = ONE
        A.append(row)
        b.append(offset)
    for a, offset in system.equalities:
        A.append(expand(a))
        b.append(offset)

    for i in range(len(A)):
        if b[i] < 0:
            A[i] = [-v for v in A[i]]
            b[i] = -b[i]

    return _StandardForm(A=A, b=b, plus=plus, minus=minus, n_columns=n_columns)


# ============================================================================
# TABLEAU
# ============================================================================

class _Tableau:
    """Dense simplex tableau; ``cost`` row holds reduced costs and -objective in the last slot"""

    def __init__(self, rows: List[List[Fraction]], basis: List[int]):
        self.rows = rows
        self.basis = basis
        self.cost: List[Fraction] = []

    def set_objective(self, c: Sequence[Fraction]) -> None:
        width = len(self.rows[0]) if self.rows else len(c) + 1
        cost = list(c) + [ZERO] * (width - len(c))
        for i, j in enumerate(self.basis):
            cj = c[j] if j < len(c) else ZERO
            if cj:
                cost = [v - cj * r if r else v for v, r in zip(cost, self.rows[i])]
        self.cost = cost

    def pivot(self, r: int, c: int) -> None:
        lead = self.rows[r]
        piv = lead[c]
        lead = [v / piv for v in lead]
        self.rows[r] = lead
        for i, row in enumerate(self.rows):
            f = row[c]
            if i != r and f:
                self.rows[i] = [v - f * w if w else v for v, w in zip(row, lead)]
        f = self.cost[c]
        if f:
            self.cost = [v - f * w if w else v for v, w in zip(self.cost, lead)]
        self.basis[r] = c

    def run(self, eligible: int) -> LPStatus:
        """Bland's rule on the first ``eligible`` columns"""
        while True:
            entering = next((j for j in range(eligible) if self.cost[j] > 0), None)
            if entering is None:
                return LPStatus.OPTIMAL
            best = None
            for i, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    key = (row[-1] / a, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return LPStatus.UNBOUNDED
            self.pivot(best[1], entering)

    @property
    def objective_value(self) -> Fraction:
        return -self.cost[-1]


# ============================================================================
# SOLVER
# ============================================================================

def _phase_one(form: _StandardForm) -> Optional[_Tableau]:
    m, n = len(form.A), form.n_columns
    rows = []
    for i in range(m):
        artificial = [ZERO] * m
        artificial[i] = ONE
        rows.append(form.A[i] + artificial + [form.b[i]])
    tableau = _Tableau(rows, basis=[n + i for i in range(m)])
    tableau.set_objective([ZERO] * n + [-ONE] * m)
    tableau.run(eligible=n + m)
    if tableau.objective_value < 0:
        return None

    # Drive artificials out of the basis; rows where that is impossible are redundant
    redundant = []
    for i in range(m):
        if tableau.basis[i] < n:
            continue
        column = next((j for j in range(n) if tableau.rows[i][j] != 0), None)
        if column is None:
            redundant.append(i)
        else:
            tableau.pivot(i, column)
    keep = [i for i in range(m) if i not in set(redundant)]
    tableau.rows = [tableau.rows[i][:n] + [tableau.rows[i][-1]] for i in keep]
    tableau.basis = [tableau.basis[i] for i in keep]
    return tableau


def solve_lp(objective: Sequence, constraints: HalfspaceSystem, sense: Sense = Sense.MAX) -> LPResult:
    """
    Optimize objective.x over the polyhedron described by constraints

    Returns status, exact optimal value and an optimal basic point.
    """
    c = as_vector(objective)
    if len(c) != constraints.dim:
        raise InputError(f"Objective has dimension {len(c)}, constraints have dimension {constraints.dim}")
    sense = Sense(sense)

    form = _standard_form(constraints)
    tableau = _phase_one(form)
    if tableau is None:
        logger.debug("LP infeasible", extra={"dim": constraints.dim, "rows": len(constraints.rows)})
        return LPResult(status=LPStatus.INFEASIBLE)

    sign = ONE if sense == Sense.MAX else -ONE
    z_cost = [ZERO] * form.n_columns
    for k, v in enumerate(c):
        if v:
            z_cost[form.plus[k]] = sign * v
            if form.minus[k] is not None:
                z_cost[form.minus[k]] = -sign * v
    if not tableau.rows:
        tableau.rows = []
        tableau.cost = z_cost + [ZERO]
    else:
        tableau.set_objective(z_cost)

    status = tableau.run(eligible=form.n_columns)
    if status == LPStatus.UNBOUNDED:
        return LPResult(status=LPStatus.UNBOUNDED)

    z = [ZERO] * form.n_columns
    for i, j in enumerate(tableau.basis):
        z[j] = tableau.rows[i][-1]
    point = tuple(
        z[form.plus[k]] - (z[form.minus[k]] if form.minus[k] is not None else ZERO)
        for k in range(constraints.dim)
    )

    if not constraints.satisfied_by(point):
        raise LPCertificateError("Simplex returned a point that violates its constraints")
    value = dot(c, point)
    if value != sign * tableau.objective_value:
        raise LPCertificateError("Objective value disagrees with the substituted point")
    return LPResult(status=LPStatus.OPTIMAL, value=value, point=point)


def find_feasible_point(constraints: HalfspaceSystem) -> Optional[Vector]:
    """Any point of the polyhedron, or None when it is empty"""
    result = solve_lp((ZERO,) * constraints.dim, constraints)
    return result.point if result.optimal else None
