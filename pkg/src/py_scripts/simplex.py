#!/usr/bin/env python3
"""
Exact rational simplex module.
Dense tableau over Fractions with reusable bases for warm starts.

Variables x_j >= l_j are shifted to y_j = x_j - l_j >= 0. Every constraint
row is brought into "<=" form (">=" rows negated, "=" rows split) and gets its
own slack column, so the slack basis is always a valid starting basis.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from settings import SolverConfig


dump_logger = logging.getLogger(__name__ + ".dump")

Number = Union[int, Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)


class SimplexError(RuntimeError):
    """Pivot ceiling exceeded or an internal consistency check failed."""


class Relation(Enum):
    """Constraint relation."""
    LE = "<="
    GE = ">="
    EQ = "="


class LPStatus(Enum):
    """Outcome status of a solve."""
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class Constraint:
    """One row: coefficients . x (relation) rhs."""
    coefficients: Tuple[Fraction, ...]
    relation: Relation
    rhs: Fraction
    name: str = ""

    @classmethod
    def make(cls, coefficients: Sequence[Number], relation: Relation, rhs: Number,
             name: str = "") -> "Constraint":
        return cls(tuple(Fraction(a) for a in coefficients), relation, Fraction(rhs), name)

    def activity(self, x: Sequence[Fraction]) -> Fraction:
        return sum((a * v for a, v in zip(self.coefficients, x) if a), ZERO)

    def is_satisfied_by(self, x: Sequence[Fraction]) -> bool:
        lhs = self.activity(x)
        if self.relation is Relation.LE:
            return lhs <= self.rhs
        if self.relation is Relation.GE:
            return lhs >= self.rhs
        return lhs == self.rhs


@dataclass
class RationalLP:
    """Minimize objective . x subject to constraint rows and x >= lower_bounds."""
    num_vars: int
    objective: Tuple[Fraction, ...]
    constraints: List[Constraint] = field(default_factory=list)
    lower_bounds: Tuple[Fraction, ...] = ()
    var_names: Tuple[str, ...] = ()

    def __post_init__(self):
        self.objective = tuple(Fraction(c) for c in self.objective)
        if not self.lower_bounds:
            self.lower_bounds = (ZERO,) * self.num_vars
        self.lower_bounds = tuple(Fraction(l) for l in self.lower_bounds)
        if not self.var_names:
            self.var_names = tuple(f"x{j + 1}" for j in range(self.num_vars))
        if len(self.objective) != self.num_vars or len(self.lower_bounds) != self.num_vars:
            raise ValueError("objective and lower bounds must have one entry per variable")
        self.constraints = list(self.constraints)
        for row in self.constraints:
            self._check_row(row)

    def _check_row(self, row: Constraint) -> None:
        if len(row.coefficients) != self.num_vars:
            raise ValueError(f"constraint {row.name or row} has {len(row.coefficients)} "
                             f"coefficients, expected {self.num_vars}")

    def with_constraints(self, rows: Sequence[Constraint]) -> "RationalLP":
        return RationalLP(self.num_vars, self.objective, self.constraints + list(rows),
                          self.lower_bounds, self.var_names)

    def with_objective(self, objective: Sequence[Number]) -> "RationalLP":
        return RationalLP(self.num_vars, tuple(objective), list(self.constraints),
                          self.lower_bounds, self.var_names)

    def is_feasible_point(self, x: Sequence[Fraction]) -> bool:
        if any(v < l for v, l in zip(x, self.lower_bounds)):
            return False
        return all(row.is_satisfied_by(x) for row in self.constraints)

    def objective_value(self, x: Sequence[Fraction]) -> Fraction:
        return sum((c * v for c, v in zip(self.objective, x) if c), ZERO)


@dataclass(frozen=True)
class LPOutcome:
    """Solve result."""
    status: LPStatus
    solution: Optional[Tuple[Fraction, ...]] = None
    value: Optional[Fraction] = None

    @property
    def is_optimal(self) -> bool:
        return self.status is LPStatus.OPTIMAL

    @property
    def is_infeasible(self) -> bool:
        return self.status is LPStatus.INFEASIBLE


def format_term(coefficient: Fraction, name: str, first: bool) -> str:
    magnitude = abs(coefficient)
    body = name if magnitude == 1 else f"{magnitude} {name}"
    if first:
        return f"-{body}" if coefficient < 0 else body
    return f"{'-' if coefficient < 0 else '+'} {body}"


def format_lp(lp: RationalLP) -> str:
    """Plain-text inequality dump of an LP."""
    def expr(coefficients: Sequence[Fraction]) -> str:
        terms = [(c, name) for c, name in zip(coefficients, lp.var_names) if c]
        if not terms:
            return "0"
        return " ".join(format_term(c, name, k == 0) for k, (c, name) in enumerate(terms))

    lines = [f"minimize {expr(lp.objective)}", "subject to"]
    for row in lp.constraints:
        label = f"{row.name}: " if row.name else ""
        lines.append(f"  {label}{expr(row.coefficients)} {row.relation.value} {row.rhs}")
    bounds = ", ".join(f"{name} >= {l}" for name, l in zip(lp.var_names, lp.lower_bounds))
    lines.append(f"bounds {bounds}")
    return "\n".join(lines)


class SimplexState:
    """Tableau, basis and status of one LP; single owner, copy before sharing."""

    def __init__(self, lp: RationalLP, config: Optional[SolverConfig] = None):
        self.config = config or SolverConfig()
        self.lp = lp
        self.status: Optional[LPStatus] = None
        self.total_pivots = 0
        self.last_pivots = 0
        self.warm = False
        self.rows: List[List[Fraction]] = []
        self.rhs: List[Fraction] = []
        self.basis: List[int] = []
        self.origin: List[Tuple[int, int]] = []  # (constraint index, sign) per tableau row
        self.cost: List[Fraction] = []
        self.reduced: List[Fraction] = []
        self._certificate: Optional[List[Fraction]] = None

    # ---------------------------------------------------------------- setup

    @property
    def num_vars(self) -> int:
        return self.lp.num_vars

    @property
    def num_cols(self) -> int:
        return len(self.cost)

    def copy(self) -> "SimplexState":
        other = SimplexState.__new__(SimplexState)
        other.config = self.config
        other.lp = self.lp
        other.status = self.status
        other.total_pivots = self.total_pivots
        other.last_pivots = 0
        other.warm = self.warm
        other.rows = [row[:] for row in self.rows]
        other.rhs = self.rhs[:]
        other.basis = self.basis[:]
        other.origin = self.origin[:]
        other.cost = self.cost[:]
        other.reduced = self.reduced[:]
        other._certificate = None if self._certificate is None else self._certificate[:]
        return other

    def _internal_rows(self, row: Constraint) -> List[Tuple[int, List[Fraction], Fraction]]:
        """Shifted "<=" rows (sign, coefficients, rhs) for one constraint."""
        shift = sum((a * l for a, l in zip(row.coefficients, self.lp.lower_bounds) if a), ZERO)
        b = row.rhs - shift
        signs = {Relation.LE: (1,), Relation.GE: (-1,), Relation.EQ: (1, -1)}[row.relation]
        return [(s, [a if s == 1 else -a for a in row.coefficients], b if s == 1 else -b)
                for s in signs]

    def _reset_tableau(self) -> None:
        m = self.num_vars
        internal = []
        for index, row in enumerate(self.lp.constraints):
            for sign, coefficients, b in self._internal_rows(row):
                internal.append((index, sign, coefficients, b))
        count = len(internal)
        self.rows = []
        self.rhs = []
        self.basis = []
        self.origin = []
        for i, (index, sign, coefficients, b) in enumerate(internal):
            slack = [ZERO] * count
            slack[i] = ONE
            self.rows.append(list(coefficients) + slack)
            self.rhs.append(b)
            self.basis.append(m + i)
            self.origin.append((index, sign))
        self.cost = list(self.lp.objective) + [ZERO] * count
        self.reduced = self.cost[:]
        self._certificate = None

    def _append_slack_column(self) -> int:
        for row in self.rows:
            row.append(ZERO)
        self.cost.append(ZERO)
        self.reduced.append(ZERO)
        return len(self.cost) - 1

    def _add_row(self, index: int, sign: int, coefficients: List[Fraction], b: Fraction) -> None:
        col = self._append_slack_column()
        new = list(coefficients) + [ZERO] * (col - self.num_vars) + [ONE]
        # express the row in the current basis
        for i, k in enumerate(self.basis):
            f = new[k]
            if f:
                pivot_row = self.rows[i]
                for j, v in enumerate(pivot_row):
                    if v:
                        new[j] -= f * v
                b -= f * self.rhs[i]
        self.rows.append(new)
        self.rhs.append(b)
        self.basis.append(col)
        self.origin.append((index, sign))

    def _price(self) -> None:
        """Recompute reduced costs from the current basis."""
        reduced = self.cost[:]
        for i, k in enumerate(self.basis):
            ck = self.cost[k]
            if ck:
                for j, v in enumerate(self.rows[i]):
                    if v:
                        reduced[j] -= ck * v
        self.reduced = reduced

    # -------------------------------------------------------------- pivoting

    def _pivot(self, r: int, k: int) -> None:
        row_r = self.rows[r]
        p = row_r[k]
        if p != ONE:
            row_r = [v / p if v else ZERO for v in row_r]
            self.rows[r] = row_r
            self.rhs[r] /= p
        nz = [j for j, v in enumerate(row_r) if v]
        b_r = self.rhs[r]
        for i, row in enumerate(self.rows):
            if i == r:
                continue
            f = row[k]
            if f:
                for j in nz:
                    row[j] -= f * row_r[j]
                if b_r:
                    self.rhs[i] -= f * b_r
        f = self.reduced[k]
        if f:
            for j in nz:
                self.reduced[j] -= f * row_r[j]
        self.basis[r] = k
        self.total_pivots += 1
        self.last_pivots += 1
        if self.last_pivots > self.config.PIVOT_LIMIT:
            raise SimplexError(f"pivot limit {self.config.PIVOT_LIMIT} exceeded on an LP with "
                               f"{len(self.rows)} rows and {self.num_cols} columns")

    def _bland(self, run_pivots: int) -> bool:
        return run_pivots >= self.config.BLAND_THRESHOLD

    def _primal(self, allowed_cols: Optional[int] = None) -> LPStatus:
        """Primal simplex from a primal feasible basis."""
        limit = self.num_cols if allowed_cols is None else allowed_cols
        start = self.last_pivots
        while True:
            bland = self._bland(self.last_pivots - start)
            k = -1
            best = ZERO
            for j in range(limit):
                d = self.reduced[j]
                if d < 0:
                    if bland:
                        k = j
                        break
                    if d < best:
                        best = d
                        k = j
            if k < 0:
                return LPStatus.OPTIMAL
            r = -1
            ratio = None
            for i, row in enumerate(self.rows):
                a = row[k]
                if a > 0:
                    t = self.rhs[i] / a
                    if ratio is None or t < ratio or (t == ratio and self.basis[i] < self.basis[r]):
                        ratio = t
                        r = i
            if r < 0:
                return LPStatus.UNBOUNDED
            self._pivot(r, k)

    def _dual(self) -> LPStatus:
        """Dual simplex from a dual feasible basis."""
        start = self.last_pivots
        while True:
            bland = self._bland(self.last_pivots - start)
            r = -1
            for i, b in enumerate(self.rhs):
                if b < 0:
                    if r < 0:
                        r = i
                    elif bland:
                        if self.basis[i] < self.basis[r]:
                            r = i
                    elif b < self.rhs[r] or (b == self.rhs[r] and self.basis[i] < self.basis[r]):
                        r = i
            if r < 0:
                return LPStatus.OPTIMAL
            row = self.rows[r]
            k = -1
            ratio = None
            for j, a in enumerate(row):
                if a < 0:
                    t = self.reduced[j] / -a
                    if ratio is None or t < ratio:
                        ratio = t
                        k = j
            if k < 0:
                m = self.num_vars
                self._certificate = [row[m + i] for i in range(len(self.rows))]
                return LPStatus.INFEASIBLE
            self._pivot(r, k)

    def _phase_one(self) -> bool:
        """Drive an artificial column to zero; False if the LP is infeasible."""
        art = self._append_slack_column()
        negative = [i for i, b in enumerate(self.rhs) if b < 0]
        for i in negative:
            self.rows[i][art] = -ONE
        saved_cost = self.cost[:-1]
        self.cost = [ZERO] * self.num_cols
        self.cost[art] = ONE
        r = min(negative, key=lambda i: (self.rhs[i], i))
        self._pivot(r, art)
        self._price()
        self._primal()
        value = sum((self.cost[k] * self.rhs[i] for i, k in enumerate(self.basis)), ZERO)
        if value > 0:
            m = self.num_vars
            self._certificate = [self.reduced[m + i] for i in range(len(self.rows))]
            self.cost = saved_cost + [ZERO]
            return False
        if art in self.basis:
            r = self.basis.index(art)
            k = next(j for j, v in enumerate(self.rows[r]) if v and j != art)
            self._pivot(r, k)
        for row in self.rows:
            row.pop()
        self.cost = saved_cost
        self.reduced.pop()
        self._price()
        return True

    # ---------------------------------------------------------------- solves

    def _finish(self, status: LPStatus) -> LPOutcome:
        self.status = status
        if status is not LPStatus.OPTIMAL:
            return LPOutcome(status)
        x = list(self.lp.lower_bounds)
        m = self.num_vars
        for i, k in enumerate(self.basis):
            if k < m:
                x[k] += self.rhs[i]
        solution = tuple(x)
        if self.config.VERIFY and not self.lp.is_feasible_point(solution):
            raise SimplexError("returned point violates a constraint")
        return LPOutcome(status, solution, self.lp.objective_value(solution))

    def _dump(self, reason: str) -> None:
        if self.config.DUMP_LPS:
            dump_logger.debug("%s\n%s", reason, format_lp(self.lp))

    def solve_cold(self) -> LPOutcome:
        """Solve from the slack basis."""
        self.last_pivots = 0
        self.warm = False
        self._dump("cold solve")
        self._reset_tableau()
        if all(b >= 0 for b in self.rhs):
            return self._finish(self._primal())
        if all(d >= 0 for d in self.reduced):
            return self._finish(self._dual())
        if not self._phase_one():
            return self._finish(LPStatus.INFEASIBLE)
        return self._finish(self._primal())

    def add_constraints(self, rows: Sequence[Constraint], warm_start: bool = True) -> LPOutcome:
        """Add rows in place and re-optimize, repairing the basis by dual simplex."""
        for row in rows:
            self.lp._check_row(row)
        start = len(self.lp.constraints)
        self.lp = self.lp.with_constraints(rows)
        if not warm_start or self.status is not LPStatus.OPTIMAL:
            return self.solve_cold()
        self.last_pivots = 0
        self.warm = True
        self._dump("warm start with added rows")
        for offset, row in enumerate(rows):
            for sign, coefficients, b in self._internal_rows(row):
                self._add_row(start + offset, sign, coefficients, b)
        self._certificate = None
        return self._finish(self._dual())

    def set_objective(self, objective: Sequence[Number], warm_start: bool = True) -> LPOutcome:
        """Replace the objective in place and re-optimize from the current basis."""
        self.lp = self.lp.with_objective(objective)
        if not warm_start or self.status is not LPStatus.OPTIMAL:
            return self.solve_cold()
        self.last_pivots = 0
        self.warm = True
        self._dump("warm start with new objective")
        extra = self.num_cols - self.num_vars
        self.cost = list(self.lp.objective) + [ZERO] * extra
        self._price()
        return self._finish(self._primal())

    def outcome(self) -> LPOutcome:
        """Outcome of the last solve without pivoting."""
        if self.status is None:
            raise SimplexError("state has not been solved")
        return self._finish(self.status)

    def farkas_certificate(self) -> Optional[List[Fraction]]:
        """Per-constraint multipliers proving infeasibility.

        y_i >= 0 on "<=" rows, y_i <= 0 on ">=" rows; sum y_i a_i >= 0 and
        sum y_i (b_i - a_i . l) < 0.
        """
        if self.status is not LPStatus.INFEASIBLE or self._certificate is None:
            return None
        y = [ZERO] * len(self.lp.constraints)
        for (index, sign), lam in zip(self.origin, self._certificate):
            if lam:
                y[index] += sign * lam
        return y


def solve(lp: RationalLP, config: Optional[SolverConfig] = None) -> Tuple[LPOutcome, SimplexState]:
    """Cold solve of an LP."""
    state = SimplexState(lp, config)
    return state.solve_cold(), state


def resolve_with_added_constraints(state: SimplexState, rows: Sequence[Constraint],
                                   warm_start: bool = True) -> Tuple[LPOutcome, SimplexState]:
    """Solve the LP plus rows on a copy of state; the given state is left untouched."""
    child = state.copy()
    return child.add_constraints(rows, warm_start), child


def resolve_with_objective(state: SimplexState, objective: Sequence[Number],
                           warm_start: bool = True) -> Tuple[LPOutcome, SimplexState]:
    """Re-optimize a copy of state under a new objective."""
    child = state.copy()
    return child.set_objective(objective, warm_start), child
