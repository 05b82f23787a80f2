#!/usr/bin/env python3
"""
Weightedness module.
Builds partial losing sets for search nodes, the feasibility LPs over
(w_1..w_n, q), and decides whether a game is weighted.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from coalition import Coalition, CoalitionError, check_voters, iter_bits, shift_lattice, voter_bit
from simple_game import CompleteGame, EquivalenceClasses
from simplex import Constraint, LPOutcome, RationalLP, Relation, SimplexState, solve
from settings import SolverConfig


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PartialNode:
    """Search node: current minimal winning coalitions and the partial losing set."""
    n: int
    W: Tuple[int, ...]
    L_hat: Tuple[int, ...]

    @classmethod
    def build(cls, W: Sequence[int], n: int, candidates: Optional[int] = None) -> "PartialNode":
        return cls(n, tuple(W), tuple(partial_losing_masks(W, n, candidates)))

    @property
    def w(self) -> int:
        """Lexicographically smallest element of W."""
        return min(self.W)


@dataclass(frozen=True)
class RationalRep:
    """Rational quota and non-increasing weights."""
    quota: Fraction
    weights: Tuple[Fraction, ...]

    @classmethod
    def from_solution(cls, solution: Sequence[Fraction]) -> "RationalRep":
        return cls(solution[-1], tuple(solution[:-1]))

    def to_integer(self) -> Tuple[int, Tuple[int, ...]]:
        """Scale by the lcm of all denominators."""
        scale = math.lcm(self.quota.denominator, *(w.denominator for w in self.weights))
        return int(self.quota * scale), tuple(int(w * scale) for w in self.weights)

    def render(self) -> str:
        return f"{self.quota}: " + " ".join(str(w) for w in self.weights)


def variable_names(n: int) -> Tuple[str, ...]:
    return tuple(f"w{i}" for i in range(1, n + 1)) + ("q",)


def indicator(mask: int, n: int) -> List[int]:
    return [1 if mask & voter_bit(n, i) else 0 for i in range(1, n + 1)]


def winning_rows(masks: Iterable[int], n: int) -> List[Constraint]:
    """sum u_i w_i >= q for each winning coalition."""
    return [Constraint.make(indicator(u, n) + [-1], Relation.GE, 0, f"win {u:0{n}b}")
            for u in masks]


def losing_rows(masks: Iterable[int], n: int) -> List[Constraint]:
    """1 + sum v_i w_i <= q for each losing coalition."""
    return [Constraint.make(indicator(v, n) + [-1], Relation.LE, -1, f"lose {v:0{n}b}")
            for v in masks]


def monotonicity_rows(n: int) -> List[Constraint]:
    """w_i >= w_{i+1}."""
    rows = []
    for i in range(1, n):
        coefficients = [0] * (n + 1)
        coefficients[i - 1] = 1
        coefficients[i] = -1
        rows.append(Constraint.make(coefficients, Relation.GE, 0, f"mono {i}"))
    return rows


def class_equality_rows(classes: EquivalenceClasses, n: int) -> List[Constraint]:
    """w_i = w_j for consecutive voters of one class."""
    rows = []
    for block in classes:
        for a, b in zip(block, block[1:]):
            coefficients = [0] * (n + 1)
            coefficients[a - 1] = 1
            coefficients[b - 1] = -1
            rows.append(Constraint.make(coefficients, Relation.EQ, 0, f"type {a}={b}"))
    return rows


def lower_bound_row(voter: int, bound: int, n: int) -> Constraint:
    coefficients = [0] * (n + 1)
    coefficients[voter - 1] = 1
    return Constraint.make(coefficients, Relation.GE, bound, f"lb {voter}")


def upper_bound_row(voter: int, bound: int, n: int) -> Constraint:
    coefficients = [0] * (n + 1)
    coefficients[voter - 1] = 1
    return Constraint.make(coefficients, Relation.LE, bound, f"ub {voter}")


def partial_losing_masks(W: Sequence[int], n: int, candidates: Optional[int] = None) -> List[int]:
    """Maximal elements of the partial losing set as masks, decreasing.

    candidates is a bitset of coalitions that may still be added below the
    node; None means every nonzero coalition lexicographically below min(W).
    """
    if not W:
        raise CoalitionError("partial losing set needs a nonempty W")
    lattice = shift_lattice(n)
    if candidates is None:
        # nonzero coalitions x <lex w
        candidates = ((1 << min(W)) - 1) & ~1
    below = lattice.strictly_below(W)
    blocked = lattice.up_closure(list(W) + list(iter_bits(candidates)))
    undecided_free = lattice.full & ~blocked
    return lattice.maximal(below | undecided_free)


def compute_partial_losing(W: Sequence[Coalition], n: int,
                           candidates: Optional[Iterable[Coalition]] = None) -> Tuple[Coalition, ...]:
    """Coalitions losing in every completion of a search node (maximal ones)."""
    check_voters(n)
    masks = [c.mask for c in W]
    bitset = None
    if candidates is not None:
        bitset = 0
        for c in candidates:
            bitset |= 1 << c.mask
    return tuple(Coalition(m, n) for m in partial_losing_masks(masks, n, bitset))


def feasibility_lp(W: Sequence[int], L_hat: Sequence[int], n: int) -> RationalLP:
    """Rows over (w_1..w_n, q): W rows, losing rows, monotonicity; w, q >= 0."""
    rows = winning_rows(W, n) + losing_rows(L_hat, n) + monotonicity_rows(n)
    return RationalLP(n + 1, (0,) * (n + 1), rows, var_names=variable_names(n))


def is_weighted(g: CompleteGame, config: Optional[SolverConfig] = None) -> Optional[RationalRep]:
    """Rational representation of the game, or None if it is not weighted."""
    lp = feasibility_lp(g.masks, g.maximal_losing_masks(), g.n)
    outcome, _ = solve(lp, config)
    if not outcome.is_optimal:
        logger.debug("game %s is not weighted", g)
        return None
    return RationalRep.from_solution(outcome.solution)


def violated_losing(solution: Sequence[Fraction], losing: Iterable[int], n: int) -> List[int]:
    """Losing coalitions whose weight reaches the quota - 1 bound."""
    weights = solution[:-1]
    quota = solution[-1]
    out = []
    for v in losing:
        total = sum((weights[i - 1] for i in range(1, n + 1) if v & voter_bit(n, i)), Fraction(0))
        if total + 1 > quota:
            out.append(v)
    return out


def accept_with_losing(state: SimplexState, losing: Sequence[int], present: set,
                       n: int, warm_start: bool = True) -> Tuple[LPOutcome, SimplexState]:
    """Re-check a node LP against the full losing set by adding violated rows.

    Works on a copy of state; the result equals a solve with every losing row.
    """
    outcome = state.outcome()
    work = None
    while outcome.is_optimal:
        missing = [v for v in violated_losing(outcome.solution, losing, n) if v not in present]
        if not missing:
            break
        if work is None:
            work = state.copy()
            present = set(present)
        present.update(missing)
        outcome = work.add_constraints(losing_rows(missing, n), warm_start)
    return outcome, (work or state)
