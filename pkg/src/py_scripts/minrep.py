#!/usr/bin/env python3
"""
Minimum-sum representation module.
Integer lower bounds from LPs, realization checks, exact branch-and-bound
and enumeration of every optimal weight vector, plain or type-preserving.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, Iterator, List, Optional, Sequence, Tuple

from simple_game import (CompleteGame, EquivalenceClasses, InvalidGameError, coalition_weights,
                         desirability_classes)
from simplex import Constraint, RationalLP, Relation, SimplexState, resolve_with_added_constraints
from weightedness import (RationalRep, class_equality_rows, losing_rows, lower_bound_row,
                          monotonicity_rows, upper_bound_row, variable_names, winning_rows)
from settings import MinRepConfig, SolverConfig


logger = logging.getLogger(__name__)


class MinRepError(RuntimeError):
    """A representation failed its self-check or the search hit its node limit."""


@dataclass(frozen=True, order=True)
class WeightRep:
    """Integer weights with the smallest winning weight as quota."""
    weights: Tuple[int, ...]
    quota: int

    @property
    def total(self) -> int:
        return sum(self.weights)

    def render(self) -> str:
        return f"{self.quota}: " + " ".join(str(w) for w in self.weights)


@dataclass(frozen=True)
class LowerBounds:
    """Integer lower bounds u for every sorted integer representation."""
    u: Tuple[int, ...]
    converged: bool = True
    rounds: int = 0
    fractional: bool = False
    denominators: FrozenSet[int] = frozenset()

    @property
    def total(self) -> int:
        return sum(self.u)


@dataclass(frozen=True)
class MinRepResult:
    """All minimum-sum representations of one game."""
    min_sum: int
    reps: Tuple[WeightRep, ...]
    preserve_types: bool = False
    bounds: Optional[LowerBounds] = None

    @property
    def unique(self) -> bool:
        return len(self.reps) == 1

    @property
    def max_w1(self) -> int:
        return max(r.weights[0] for r in self.reps)


def quota_range(weights: Sequence[int], g: CompleteGame) -> Optional[Tuple[int, int]]:
    """(max losing weight + 1, min winning weight) if the weights realize g."""
    if len(weights) != g.n:
        raise InvalidGameError(f"expected {g.n} weights, got {len(weights)}")
    if any(w < 0 for w in weights):
        raise InvalidGameError(f"weights must be non-negative: {list(weights)}")
    flags = g.winning_flags
    sums = coalition_weights(weights)
    m_win = min(s for s, f in zip(sums, flags) if f == "1")
    m_lose = max(s for s, f in zip(sums, flags) if f == "0")
    if m_win <= m_lose:
        return None
    return m_lose + 1, m_win


def realizes(weights: Sequence[int], g: CompleteGame) -> Optional[int]:
    """Quota (smallest winning weight) if the weights realize g, else None."""
    window = quota_range(weights, g)
    return None if window is None else window[1]


def _checked(weights: Sequence[int], g: CompleteGame) -> WeightRep:
    q = realizes(weights, g)
    if q is None:
        raise MinRepError(f"weights {list(weights)} do not realize {g}")
    return WeightRep(tuple(weights), q)


def representation_lp(g: CompleteGame, classes: Optional[EquivalenceClasses] = None) -> RationalLP:
    """Feasibility rows for the full game, optionally with equal weights per class."""
    n = g.n
    rows = winning_rows(g.masks, n) + losing_rows(g.maximal_losing_masks(), n) + monotonicity_rows(n)
    if classes is not None:
        rows += class_equality_rows(classes, n)
    return RationalLP(n + 1, (0,) * (n + 1), rows, var_names=variable_names(n))


def _unit_objective(n: int, voter: int, sign: int = 1) -> List[int]:
    objective = [0] * (n + 1)
    objective[voter - 1] = sign
    return objective


def _sum_objective(n: int) -> List[int]:
    return [1] * n + [0]


def _sum_row(n: int, bound: int) -> Constraint:
    return Constraint.make(_sum_objective(n), Relation.LE, bound, "sum")


def _raise_bounds(state: SimplexState, u: List[int], max_rounds: int, label: str) -> LowerBounds:
    """Sweep voters n..1 raising u_i to the ceiling of min w_i, at most max_rounds times."""
    n = len(u)
    fractional = False
    denominators = set()
    rounds = 0
    changed = True
    while changed and rounds < max_rounds:
        changed = False
        rounds += 1
        for voter in range(n, 0, -1):
            outcome = state.set_objective(_unit_objective(n, voter))
            if not outcome.is_optimal:
                raise InvalidGameError(f"lower bound LP for voter {voter} of {label} is {outcome.status.value}")
            value = outcome.value
            if value.denominator != 1:
                fractional = True
                denominators.add(value.denominator)
            bound = math.ceil(value)
            if bound > u[voter - 1]:
                u[voter - 1] = bound
                state.add_constraints([lower_bound_row(voter, bound, n)])
                changed = True
    return LowerBounds(tuple(u), not changed, rounds, fractional, frozenset(denominators))


def lower_bound_iteration(g: CompleteGame, preserve_types: bool = False,
                          config: Optional[MinRepConfig] = None,
                          solver: Optional[SolverConfig] = None,
                          start: Optional[Sequence[int]] = None) -> LowerBounds:
    """Raise u_i to the ceiling of min w_i, for i = n..1, until nothing changes.

    start holds bounds already known to hold for every sorted integer
    representation of g, for instance those passed down the search tree.
    """
    config = config or MinRepConfig()
    n = g.n
    classes = desirability_classes(g) if preserve_types else None
    nulls = g.null_voters()
    u = [0 if voter in nulls else 1 for voter in range(1, n + 1)]
    if start is not None:
        if len(start) != n:
            raise InvalidGameError(f"expected {n} starting bounds, got {len(start)}")
        u = [max(a, b) for a, b in zip(u, start)]
    lp = representation_lp(g, classes).with_constraints(
        [lower_bound_row(i + 1, b, n) for i, b in enumerate(u) if b])
    state = SimplexState(lp, solver)
    if not state.solve_cold().is_optimal:
        raise InvalidGameError(f"game {g} is not weighted")
    bounds = _raise_bounds(state, u, config.MAX_ROUNDS, str(g))
    if not bounds.converged:
        logger.warning("lower bounds of %s did not converge in %d rounds", g, bounds.rounds)
    return bounds


def node_bounds(state: SimplexState, n: int, start: Optional[Sequence[int]] = None,
                config: Optional[MinRepConfig] = None) -> LowerBounds:
    """Lower bounds valid for every game below a search node.

    state is the node's feasibility LP over its winning rows and partial
    losing rows; it is copied, not changed.
    """
    config = config or MinRepConfig()
    u = list(start) if start is not None else [0] * n
    work = state.copy()
    rows = [lower_bound_row(i + 1, b, n) for i, b in enumerate(u) if b]
    if rows and not work.add_constraints(rows).is_optimal:
        raise InvalidGameError("inherited bounds cut off the node's feasible region")
    return _raise_bounds(work, u, config.INHERIT_ROUNDS, "search node")


def _most_fractional(values: Sequence[Fraction]) -> Optional[int]:
    best = None
    best_gap = None
    half = Fraction(1, 2)
    for i, v in enumerate(values):
        if v.denominator == 1:
            continue
        gap = abs(v - math.floor(v) - half)
        if best_gap is None or gap < best_gap:
            best, best_gap = i, gap
    return best


def _branch_and_bound(g: CompleteGame, bounds: LowerBounds, classes: Optional[EquivalenceClasses],
                      config: MinRepConfig, solver: Optional[SolverConfig]) -> WeightRep:
    n = g.n
    lp = representation_lp(g, classes).with_constraints(
        [lower_bound_row(i + 1, b, n) for i, b in enumerate(bounds.u) if b]).with_objective(_sum_objective(n))
    state = SimplexState(lp, solver)
    root = state.solve_cold()
    if not root.is_optimal:
        raise InvalidGameError(f"game {g} is not weighted")
    # scaled relaxation optimum as incumbent; bounds the search region
    _, scaled = RationalRep.from_solution(root.solution).to_integer()
    best = _checked(scaled, g)
    outcome, state = resolve_with_added_constraints(state, [_sum_row(n, best.total)])
    nodes = 0
    stack = [(outcome, state)]
    while stack:
        outcome, state = stack.pop()
        nodes += 1
        if nodes > config.NODE_LIMIT:
            raise MinRepError(f"branch and bound on {g} exceeded {config.NODE_LIMIT} nodes")
        if not outcome.is_optimal or math.ceil(outcome.value) >= best.total:
            continue
        weights = outcome.solution[:-1]
        i = _most_fractional(weights)
        if i is None:
            best = _checked(tuple(int(w) for w in weights), g)
            continue
        v = weights[i]
        for row in (lower_bound_row(i + 1, math.ceil(v), n), upper_bound_row(i + 1, math.floor(v), n)):
            stack.append(resolve_with_added_constraints(state, [row]))
    logger.debug("branch and bound on %s: %d nodes, sum %d", g, nodes, best.total)
    return best


def min_sum_rep(g: CompleteGame, preserve_types: bool = False,
                config: Optional[MinRepConfig] = None,
                solver: Optional[SolverConfig] = None,
                start: Optional[Sequence[int]] = None) -> Tuple[WeightRep, LowerBounds]:
    """One sorted minimum-sum representation and the lower bounds behind it."""
    config = config or MinRepConfig()
    bounds = lower_bound_iteration(g, preserve_types, config, solver, start)
    q = realizes(bounds.u, g)
    if q is not None:
        return WeightRep(bounds.u, q), bounds
    classes = desirability_classes(g) if preserve_types else None
    return _branch_and_bound(g, bounds, classes, config, solver), bounds


def min_sum(g: CompleteGame) -> int:
    """Minimum total weight over integer representations."""
    rep, _ = min_sum_rep(g)
    return rep.total


def _class_ranges(g: CompleteGame, classes: EquivalenceClasses, bounds: LowerBounds, total: int,
                  preserve_types: bool, solver: Optional[SolverConfig]) -> List[Tuple[int, int]]:
    """Per class: smallest and largest weight any representation of this sum can use."""
    n = g.n
    lp = representation_lp(g, classes if preserve_types else None).with_constraints(
        [lower_bound_row(i + 1, b, n) for i, b in enumerate(bounds.u) if b] + [_sum_row(n, total)])
    state = SimplexState(lp, solver)
    state.solve_cold()
    ranges = []
    for block in classes:
        outcome = state.set_objective(_unit_objective(n, block[0], -1))
        if not outcome.is_optimal:
            raise MinRepError(f"range LP for voter {block[0]} of {g} is {outcome.status.value}")
        ranges.append((bounds.u[block[-1] - 1], math.floor(-outcome.value)))
    return ranges


def _arrangements(values: Sequence[int]) -> Iterator[Tuple[int, ...]]:
    """Distinct orderings of a multiset, in decreasing lexicographic order."""
    if not values:
        yield ()
        return
    for v in sorted(set(values), reverse=True):
        rest = list(values)
        rest.remove(v)
        for tail in _arrangements(rest):
            yield (v,) + tail


def _permutations_within_classes(weights: Tuple[int, ...], classes: EquivalenceClasses) -> Iterator[Tuple[int, ...]]:
    def rec(k: int, prefix: Tuple[int, ...]):
        if k == len(classes):
            yield prefix
            return
        block = classes.blocks[k]
        for part in _arrangements([weights[v - 1] for v in block]):
            yield from rec(k + 1, prefix + part)

    yield from rec(0, ())


def _search_plain(g: CompleteGame, classes: EquivalenceClasses, ranges: List[Tuple[int, int]],
                  total: int) -> List[WeightRep]:
    """Every weight vector of the given sum realizing g.

    Weights fall strictly from one class to the next; inside a class any
    order is allowed.
    """
    n = g.n
    class_of = classes.class_index()
    lows = [ranges[c][0] for c in class_of]
    suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + lows[i]
    found: List[WeightRep] = []
    values = [0] * n

    def rec(i: int, used: int, prev_min: Optional[int], cur_min: Optional[int]) -> None:
        if i == n:
            q = realizes(values, g)
            if q is not None:
                found.append(WeightRep(tuple(values), q))
            return
        c = class_of[i]
        if i > 0 and class_of[i - 1] != c:
            prev_min, cur_min = cur_min, None
        lo, hi = ranges[c]
        hi = min(hi, total - used - suffix[i + 1])
        if prev_min is not None:
            hi = min(hi, prev_min - 1)
        if i == n - 1:
            lo = max(lo, total - used)
        for v in range(lo, hi + 1):
            values[i] = v
            rec(i + 1, used + v, prev_min, v if cur_min is None else min(cur_min, v))

    rec(0, 0, None, None)
    return found


def _search_types(g: CompleteGame, classes: EquivalenceClasses, ranges: List[Tuple[int, int]],
                  total: int) -> List[WeightRep]:
    """Every class-constant weight vector of the given sum realizing g."""
    sizes = classes.sizes()
    k = len(sizes)
    suffix = [0] * (k + 1)
    for c in range(k - 1, -1, -1):
        suffix[c] = suffix[c + 1] + sizes[c] * ranges[c][0]
    found: List[WeightRep] = []
    chosen = [0] * k

    def rec(c: int, used: int) -> None:
        if c == k:
            if used != total:
                return
            weights = tuple(chosen[b] for b, size in enumerate(sizes) for _ in range(size))
            q = realizes(weights, g)
            if q is not None:
                found.append(WeightRep(weights, q))
            return
        lo, hi = ranges[c]
        hi = min(hi, (total - used - suffix[c + 1]) // sizes[c])
        if c > 0:
            hi = min(hi, chosen[c - 1] - 1)
        for v in range(lo, hi + 1):
            chosen[c] = v
            rec(c + 1, used + sizes[c] * v)

    rec(0, 0)
    return found


def _all_reps(g: CompleteGame, preserve_types: bool, config: Optional[MinRepConfig],
              solver: Optional[SolverConfig], start: Optional[Sequence[int]]) -> MinRepResult:
    classes = desirability_classes(g)
    best, bounds = min_sum_rep(g, preserve_types, config, solver, start)
    if best.weights == bounds.u:
        # every optimum sorts to u
        if preserve_types:
            reps = [best]
        else:
            reps = [_checked(w, g) for w in _permutations_within_classes(bounds.u, classes)]
    else:
        ranges = _class_ranges(g, classes, bounds, best.total, preserve_types, solver)
        search = _search_types if preserve_types else _search_plain
        reps = search(g, classes, ranges, best.total)
        if best not in reps:
            raise MinRepError(f"search on {g} missed the representation {best.render()}")
    return MinRepResult(best.total, tuple(sorted(reps)), preserve_types, bounds)


def all_min_sum_reps(g: CompleteGame, config: Optional[MinRepConfig] = None,
                     solver: Optional[SolverConfig] = None,
                     start: Optional[Sequence[int]] = None) -> MinRepResult:
    """Every integer weight vector of minimum sum realizing g."""
    return _all_reps(g, False, config, solver, start)


def all_min_sum_reps_preserving_types(g: CompleteGame, config: Optional[MinRepConfig] = None,
                                      solver: Optional[SolverConfig] = None,
                                      start: Optional[Sequence[int]] = None) -> MinRepResult:
    """Same as all_min_sum_reps with equal weights inside each desirability class."""
    return _all_reps(g, True, config, solver, start)


def min_quota(result: MinRepResult, g: CompleteGame) -> int:
    """Smallest quota any of the representations admits."""
    return min(quota_range(r.weights, g)[0] for r in result.reps)
