#!/usr/bin/env python3
"""
Enumerator module.
Orderly generation of complete simple games and, with LP pruning, of
weighted voting games; static prefix splitting for parallel runs.
"""

import logging
import time
from dataclasses import dataclass, field, fields, replace
from enum import Enum
from typing import Callable, Iterator, List, Optional, Set, Tuple

from joblib import Parallel, delayed
from tqdm import tqdm

from coalition import CoalitionError, check_voters, iter_bits_desc, parse_mask, render_mask, shift_lattice
from minrep import node_bounds
from simple_game import CompleteGame
from simplex import RationalLP, SimplexState, resolve_with_added_constraints
from weightedness import (PartialNode, accept_with_losing, losing_rows, monotonicity_rows,
                          variable_names, winning_rows)
from settings import SearchConfig, SolverConfig


logger = logging.getLogger(__name__)

# Bumped whenever the child order of the search tree changes; stored in checkpoints.
CANONICAL_ORDER_VERSION = 1


class GameClass(Enum):
    """Which games an enumeration visits."""
    COMPLETE = "complete"
    WEIGHTED = "weighted"


class Action(Enum):
    """What a run does with visited games; picks the default visitor."""
    COUNT = "count"
    EMIT = "emit"
    CLASSIFY = "classify"


@dataclass(frozen=True)
class SearchPrefix:
    """Root path of a subtree: coalitions added in order, lex-decreasing.

    With whole_subtree False only the node at the end of the path is visited.
    """
    coalitions: Tuple[int, ...]
    whole_subtree: bool = True

    def render(self, n: int) -> str:
        return ",".join(render_mask(c, n) for c in self.coalitions)

    @classmethod
    def parse(cls, text: str, n: int) -> "SearchPrefix":
        """Create prefix from comma separated 0/1 strings."""
        parts = [p for p in text.replace(" ", "").split(",") if p]
        return cls(tuple(parse_mask(p, n) for p in parts))


@dataclass
class EnumerationConfig:
    """Parameters of one enumeration run."""
    n: int
    target: GameClass = GameClass.WEIGHTED
    action: Action = Action.COUNT
    prefix: Optional[SearchPrefix] = None
    jobs: int = field(default_factory=lambda: SearchConfig().DEFAULT_JOBS)
    split_depth: int = SearchConfig.SPLIT_DEPTH
    warm_start: bool = True
    # pass weight lower bounds from each node to its children
    inherit_bounds: bool = False
    progress: bool = False
    solver: SolverConfig = field(default_factory=SolverConfig)

    def __post_init__(self):
        check_voters(self.n)
        if self.jobs < 1:
            raise ValueError(f"worker count must be positive, got {self.jobs}")
        if self.split_depth < 1:
            raise ValueError(f"split depth must be positive, got {self.split_depth}")
        if self.action is Action.CLASSIFY and self.target is not GameClass.WEIGHTED:
            raise ValueError("classification runs over weighted games only")
        if self.inherit_bounds and self.target is not GameClass.WEIGHTED:
            raise ValueError("lower bounds are only passed down the weighted search")



@dataclass
class EnumerationStats:
    """Counters of a search; merged with + across subtrees."""
    nodes: int = 0
    lp_solves: int = 0
    pruned: int = 0
    rejected: int = 0
    pivots: int = 0
    warm_solves: int = 0
    cold_solves: int = 0
    seconds: float = 0.0

    def __add__(self, other: "EnumerationStats") -> "EnumerationStats":
        return EnumerationStats(**{f.name: getattr(self, f.name) + getattr(other, f.name)
                                   for f in fields(self)})

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


class Visitor:
    """Receives every visited game as its lex-decreasing tuple of masks.

    bounds, when the run passes them down the tree, are integer lower bounds
    on the sorted weights of every representation of the game.
    """

    def __call__(self, masks: Tuple[int, ...], n: int, bounds: Optional[Tuple[int, ...]] = None) -> None:
        raise NotImplementedError

    def merge(self, other: "Visitor") -> "Visitor":
        raise NotImplementedError


class CountVisitor(Visitor):
    def __init__(self):
        self.count = 0

    def __call__(self, masks: Tuple[int, ...], n: int, bounds: Optional[Tuple[int, ...]] = None) -> None:
        self.count += 1

    def merge(self, other: "CountVisitor") -> "CountVisitor":
        self.count += other.count
        return self


class CollectVisitor(Visitor):
    """Keeps every visited game in visiting order."""

    def __init__(self):
        self.records: List[Tuple[int, ...]] = []
        self.n: Optional[int] = None

    def __call__(self, masks: Tuple[int, ...], n: int, bounds: Optional[Tuple[int, ...]] = None) -> None:
        self.n = n
        self.records.append(masks)

    def merge(self, other: "CollectVisitor") -> "CollectVisitor":
        self.records.extend(other.records)
        self.n = self.n or other.n
        return self

    def games(self) -> List[CompleteGame]:
        return [CompleteGame.from_masks(self.n, masks, validate=False) for masks in self.records]


@dataclass
class SearchNode:
    """One node of the search tree."""
    W: Tuple[int, ...]
    avail: int
    state: Optional[SimplexState] = None
    present: Set[int] = field(default_factory=set)
    L_hat: Tuple[int, ...] = ()
    bounds: Optional[Tuple[int, ...]] = None

    @property
    def last(self) -> int:
        """Last added coalition, the lex-smallest of W."""
        return self.W[-1]


class _Search:
    """Depth-first search over lex-decreasing antichains."""

    def __init__(self, config: EnumerationConfig, visitor: Visitor):
        self.config = config
        self.n = config.n
        self.visitor = visitor
        self.lattice = shift_lattice(config.n)
        self.stats = EnumerationStats()
        self.weighted = config.target is GameClass.WEIGHTED

    def root(self) -> SearchNode:
        """Node with W empty; not a game."""
        state = None
        if self.weighted:
            lp = RationalLP(self.n + 1, (0,) * (self.n + 1), monotonicity_rows(self.n),
                            var_names=variable_names(self.n))
            state = SimplexState(lp, self.config.solver)
            state.solve_cold()
        return SearchNode((), self.lattice.full & ~1, state)

    def child_avail(self, avail: int, x: int) -> int:
        return avail & self.lattice.incomparable(x) & ((1 << x) - 1)

    def enter(self, parent: SearchNode, x: int) -> Optional[SearchNode]:
        """Child node adding x, or None when its LP is infeasible."""
        node = SearchNode(parent.W + (x,), self.child_avail(parent.avail, x))
        if not self.weighted:
            return node
        node.L_hat = PartialNode.build(node.W, self.n, node.avail).L_hat
        new = [v for v in node.L_hat if v not in parent.present]
        rows = winning_rows((x,), self.n) + losing_rows(new, self.n)
        outcome, node.state = resolve_with_added_constraints(parent.state, rows, self.config.warm_start)
        self._count_solve(node.state, node.state.last_pivots)
        if not outcome.is_optimal:
            self.stats.pruned += 1
            return None
        node.present = parent.present | set(new)
        if self.config.inherit_bounds:
            inherited = node_bounds(node.state, self.n, parent.bounds)
            self.stats.lp_solves += inherited.rounds * self.n
            node.bounds = inherited.u
        return node

    def accept(self, node: SearchNode) -> bool:
        """Check a feasible node against the full losing set of its game."""
        if not self.weighted or not node.avail:
            return True
        losing = self.lattice.maximal(self.lattice.full & ~self.lattice.up_closure(node.W))
        outcome, work = accept_with_losing(node.state, losing, node.present, self.n,
                                           self.config.warm_start)
        if work is not node.state:
            self._count_solve(work, work.total_pivots - node.state.total_pivots)
        if not outcome.is_optimal:
            self.stats.rejected += 1
            return False
        return True

    def visit(self, node: SearchNode) -> None:
        if self.accept(node):
            self.stats.nodes += 1
            self.visitor(node.W, self.n, node.bounds)

    def descend(self, node: SearchNode) -> None:
        for x in iter_bits_desc(node.avail):
            child = self.enter(node, x)
            if child is None:
                continue
            self.visit(child)
            self.descend(child)

    def run(self, prefix: SearchPrefix) -> EnumerationStats:
        start = time.perf_counter()
        node = self.root()
        for x in prefix.coalitions:
            if not (node.avail >> x) & 1:
                raise CoalitionError(f"prefix {prefix.render(self.n)} is not a path of the search tree")
            node = self.enter(node, x)
            if node is None:
                break
        if node is not None:
            if node.W:
                self.visit(node)
            if prefix.whole_subtree:
                self.descend(node)
        self.stats.seconds = time.perf_counter() - start
        return self.stats

    def _count_solve(self, state: SimplexState, pivots: int) -> None:
        self.stats.lp_solves += 1
        self.stats.pivots += pivots
        if state.warm:
            self.stats.warm_solves += 1
        else:
            self.stats.cold_solves += 1


def default_visitor(action: Action) -> Callable[[], Visitor]:
    """Default visitor of an action; classification brings its own."""
    if action is Action.COUNT:
        return CountVisitor
    if action is Action.EMIT:
        return CollectVisitor
    raise ValueError(f"action {action.value!r} needs an explicit visitor")


def run_prefix(config: EnumerationConfig, prefix: SearchPrefix,
               visitor: Optional[Visitor] = None) -> EnumerationStats:
    """Run one subtree in this process."""
    search = _Search(config, visitor if visitor is not None else default_visitor(config.action)())
    return search.run(prefix)


def enumerate_complete(n: int, visitor: Optional[Visitor] = None,
                       config: Optional[EnumerationConfig] = None) -> int:
    """Visit every complete simple game for n voters once; return the count."""
    config = replace(config, target=GameClass.COMPLETE) if config else EnumerationConfig(n, GameClass.COMPLETE)
    return run_prefix(config, config.prefix or SearchPrefix(()), visitor).nodes


def enumerate_weighted(n: int, visitor: Optional[Visitor] = None,
                       config: Optional[EnumerationConfig] = None,
                       stats: Optional[EnumerationStats] = None) -> int:
    """Visit every weighted voting game for n voters once; return the count."""
    config = replace(config, target=GameClass.WEIGHTED) if config else EnumerationConfig(n, GameClass.WEIGHTED)
    result = run_prefix(config, config.prefix or SearchPrefix(()), visitor)
    if stats is not None:
        for f in fields(result):
            setattr(stats, f.name, getattr(result, f.name))
    logger.debug("weighted search n=%d: %s", n, result)
    return result.nodes


def split_search(n: int, depth: int, base: Tuple[int, ...] = ()) -> List[SearchPrefix]:
    """Partition the tree below base into prefixes, in depth-first order.

    The base node and nodes above the split depth are visited on their own;
    nodes at the split depth carry their whole subtree.
    """
    check_voters(n)
    if depth < 1:
        raise ValueError(f"split depth must be positive, got {depth}")
    lattice = shift_lattice(n)
    avail = lattice.full & ~1
    for x in base:
        if not (avail >> x) & 1:
            raise CoalitionError(f"prefix {SearchPrefix(base).render(n)} is not a path of the search tree")
        avail &= lattice.incomparable(x) & ((1 << x) - 1)
    out: List[SearchPrefix] = []

    def walk(path: Tuple[int, ...], avail: int, level: int) -> None:
        if level == depth:
            out.append(SearchPrefix(path, True))
            return
        if path:
            out.append(SearchPrefix(path, False))
        for x in iter_bits_desc(avail):
            walk(path + (x,), avail & lattice.incomparable(x) & ((1 << x) - 1), level + 1)

    walk(base, avail, 0)
    return out


def _prefix_job(config: EnumerationConfig, prefix: SearchPrefix,
                visitor_factory: Callable[[], Visitor]) -> Tuple[EnumerationStats, Visitor]:
    visitor = visitor_factory()
    return run_prefix(config, prefix, visitor), visitor


def plan_prefixes(config: EnumerationConfig) -> List[SearchPrefix]:
    """Static split of the configured tree or subtree."""
    if config.prefix is not None and not config.prefix.whole_subtree:
        return [config.prefix]
    base = config.prefix.coalitions if config.prefix else ()
    return split_search(config.n, config.split_depth, base)


def run_prefixes(config: EnumerationConfig, prefixes: List[SearchPrefix],
                 visitor_factory: Optional[Callable[[], Visitor]] = None
                 ) -> Iterator[Tuple[SearchPrefix, EnumerationStats, Visitor]]:
    """Yield (prefix, stats, visitor) per prefix, in prefix order, from a joblib pool."""
    logger.info("running %d subtrees of the %s search for n=%d on %d worker(s)",
                len(prefixes), config.target.value, config.n, config.jobs)
    factory = visitor_factory or default_visitor(config.action)
    results = Parallel(n_jobs=config.jobs, return_as="generator")(
        delayed(_prefix_job)(config, prefix, factory) for prefix in prefixes)
    progress = tqdm(results, total=len(prefixes), disable=not config.progress,
                    desc=f"n={config.n}", unit="subtree")
    for prefix, (stats, visitor) in zip(prefixes, progress):
        yield prefix, stats, visitor


def enumerate_parallel(config: EnumerationConfig,
                       visitor_factory: Optional[Callable[[], Visitor]] = None) -> Tuple[EnumerationStats, Visitor]:
    """Run the prefixes of a static split and merge results in prefix order."""
    start = time.perf_counter()
    stats = EnumerationStats()
    factory = visitor_factory or default_visitor(config.action)
    merged = factory()
    for _, part, visitor in run_prefixes(config, plan_prefixes(config), factory):
        stats = stats + part
        merged.merge(visitor)
    stats.seconds = time.perf_counter() - start
    return stats, merged
