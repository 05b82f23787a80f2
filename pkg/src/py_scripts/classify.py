#!/usr/bin/env python3
"""
Classification module.
Sweeps the weighted games for n voters in two passes. The first pass runs
the lower-bound iteration on every game, settles the games their bounds
realize and keeps the rest as candidates; the second pass resolves the
candidates. Both passes checkpoint per subtree and resume from disk.
"""

import json
import logging
import time
from dataclasses import dataclass
from enum import Enum
from functools import partial
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Tuple

import jsonschema
from joblib import Parallel, delayed
from tqdm import tqdm

from coalition import render_mask
from enumerator import (CANONICAL_ORDER_VERSION, Action, EnumerationConfig, EnumerationStats, GameClass,
                        SearchPrefix, Visitor, enumerate_parallel, plan_prefixes, run_prefixes)
from minrep import (LowerBounds, all_min_sum_reps, all_min_sum_reps_preserving_types, lower_bound_iteration,
                    min_quota, realizes)
from report import SCHEMA_VERSION, ClassificationReport
from settings import SearchConfig
from simple_game import CompleteGame


logger = logging.getLogger(__name__)


class ReportKind(Enum):
    """Which aggregates a sweep computes."""
    NONUNIQUE = "nonunique"
    NONUNIQUE_TYPES = "nonunique-types"
    MAX_PARAMS = "max-params"
    FULL = "full"

    @property
    def plain(self) -> bool:
        return self is not ReportKind.NONUNIQUE_TYPES

    @property
    def types(self) -> bool:
        return self in (ReportKind.NONUNIQUE_TYPES, ReportKind.FULL)


class CheckpointError(ValueError):
    """Checkpoint written by another sweep or another generator order."""


@dataclass
class GameRecord:
    """Per-game classification result."""
    masks: Tuple[int, ...]
    n: int
    min_sum: int
    min_quota: int
    max_w1: int
    reps: Tuple[str, ...] = ()
    type_reps: Tuple[str, ...] = ()
    lower_bound_hit: bool = False
    denominators: Tuple[int, ...] = ()
    rep_count: Optional[int] = None
    type_rep_count: Optional[int] = None

    @property
    def label(self) -> str:
        return ",".join(render_mask(m, self.n) for m in self.masks)

    @property
    def nonunique(self) -> bool:
        return (self.rep_count or 0) > 1 or (self.type_rep_count or 0) > 1

    def comments(self) -> List[str]:
        lines = [f"min_sum {self.min_sum}"] + list(self.reps)
        if self.type_reps:
            lines += ["types"] + list(self.type_reps)
        return lines


@dataclass(frozen=True)
class Candidate:
    """Weighted game whose lower bounds do not realize it, with those bounds."""
    masks: Tuple[int, ...]
    n: int
    u: Tuple[int, ...]
    denominators: Tuple[int, ...] = ()

    def game(self) -> CompleteGame:
        return CompleteGame.from_masks(self.n, self.masks, validate=False)

    def bounds(self) -> LowerBounds:
        return LowerBounds(self.u, fractional=bool(self.denominators), denominators=frozenset(self.denominators))

    def to_dict(self) -> dict:
        return {"masks": list(self.masks), "u": list(self.u), "denominators": list(self.denominators)}

    @classmethod
    def from_dict(cls, data: dict, n: int) -> "Candidate":
        return cls(tuple(data["masks"]), n, tuple(data["u"]), tuple(data.get("denominators", ())))


def classify_game(g: CompleteGame, kind: ReportKind = ReportKind.FULL,
                  bounds: Optional[LowerBounds] = None) -> GameRecord:
    """Minimum-sum data for one weighted game.

    bounds, when given, come from an earlier lower-bound iteration on g; the
    search starts from them and the record keeps their fractionality.
    """
    plain = all_min_sum_reps(g, start=None if bounds is None else bounds.u)
    bounds = bounds or plain.bounds
    record = GameRecord(
        masks=g.masks, n=g.n, min_sum=plain.min_sum, min_quota=min_quota(plain, g),
        max_w1=plain.max_w1, reps=tuple(r.render() for r in plain.reps),
        lower_bound_hit=bounds.total == plain.min_sum,
        denominators=tuple(sorted(bounds.denominators)))
    if kind.plain:
        record.rep_count = len(plain.reps)
    if kind.types:
        typed = all_min_sum_reps_preserving_types(g, start=plain.bounds.u)
        record.type_rep_count = len(typed.reps)
        record.type_reps = tuple(r.render() for r in typed.reps)
    return record


class ClassifyVisitor(Visitor):
    """Lower-bound pass over visited games.

    Games realized by their lower bounds are classified on the spot; the
    others are kept as candidates for resolve().
    """

    def __init__(self, kind: ReportKind, n: int):
        self.kind = kind
        self.n = n
        self.report = ClassificationReport(n, kind.value)
        self.nonunique: List[GameRecord] = []
        self.candidates: List[Candidate] = []

    def __call__(self, masks: Tuple[int, ...], n: int, bounds: Optional[Tuple[int, ...]] = None) -> None:
        g = CompleteGame.from_masks(n, masks, validate=False)
        lower = lower_bound_iteration(g, start=bounds)
        if realizes(lower.u, g) is None:
            self.candidates.append(Candidate(masks, n, lower.u, tuple(sorted(lower.denominators))))
            self.report.add_candidate()
            return
        self.add(classify_game(g, self.kind, lower))

    def add(self, record: GameRecord) -> None:
        self.report.add_game(record.label, record.min_sum, record.min_quota, record.max_w1,
                             record.rep_count, record.type_rep_count, record.lower_bound_hit,
                             list(record.denominators))
        if record.nonunique:
            self.nonunique.append(record)

    def resolve(self, candidate: Candidate) -> None:
        self.add(classify_game(candidate.game(), self.kind, candidate.bounds()))

    def merge(self, other: "ClassifyVisitor") -> "ClassifyVisitor":
        self.report.merge(other.report)
        self.nonunique.extend(other.nonunique)
        self.candidates.extend(other.candidates)
        return self


def _resolve_job(kind: ReportKind, n: int, candidates: List[Candidate]) -> ClassifyVisitor:
    visitor = ClassifyVisitor(kind, n)
    for candidate in candidates:
        visitor.resolve(candidate)
    return visitor


class Phase(Enum):
    """Pass of a classification sweep recorded in a checkpoint entry."""
    BOUNDS = "bounds"
    RESOLVE = "resolve"


CHECKPOINT_SCHEMA = {
    "type": "object",
    "required": ["schema_version", "order_version", "n", "kind", "phase", "prefix", "whole_subtree",
                 "report", "nonunique", "candidates"],
    "properties": {
        "schema_version": {"type": "integer"},
        "order_version": {"type": "integer"},
        "n": {"type": "integer"},
        "kind": {"type": "string"},
        "phase": {"enum": [p.value for p in Phase]},
        "prefix": {"type": "array", "items": {"type": "integer", "minimum": 1}},
        "whole_subtree": {"type": "boolean"},
        "report": {"type": "object"},
        "nonunique": {"type": "array", "items": {"type": "object"}},
        "candidates": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["masks", "u"],
                "properties": {
                    "masks": {"type": "array", "items": {"type": "integer", "minimum": 1}},
                    "u": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                    "denominators": {"type": "array", "items": {"type": "integer", "minimum": 2}},
                },
            },
        },
    },
}

PrefixKey = Tuple[Tuple[int, ...], bool]


def _prefix_key(prefix: SearchPrefix) -> PrefixKey:
    return prefix.coalitions, prefix.whole_subtree


class CandidateStore:
    """JSON lines file with one entry per subtree and pass.

    Lower-bound entries carry the subtree's candidates; resolve entries
    carry what resolving them produced.
    """

    def __init__(self, directory: Path, n: int, kind: ReportKind):
        self.directory = Path(directory)
        self.n = n
        self.kind = kind
        self.path = self.directory / f"classify-n{n}-{kind.value}.jsonl"

    def load(self) -> Dict[Phase, Dict[PrefixKey, ClassifyVisitor]]:
        """Finished subtrees per pass, keyed by prefix."""
        done: Dict[Phase, Dict[PrefixKey, ClassifyVisitor]] = {phase: {} for phase in Phase}
        if not self.path.exists():
            return done
        for number, line in enumerate(self.path.read_text().splitlines(), start=1):
            if not line.strip():
                continue
            try:
                entry = json.loads(line)
                jsonschema.validate(entry, CHECKPOINT_SCHEMA)
            except (json.JSONDecodeError, jsonschema.ValidationError) as e:
                raise CheckpointError(f"{self.path}:{number}: invalid checkpoint entry: {e}")
            expected = (SCHEMA_VERSION, CANONICAL_ORDER_VERSION, self.n, self.kind.value)
            found = (entry["schema_version"], entry["order_version"], entry["n"], entry["kind"])
            if found != expected:
                raise CheckpointError(f"{self.path}:{number}: entry written for {found}, expected {expected}")
            visitor = ClassifyVisitor(self.kind, self.n)
            visitor.report = ClassificationReport.from_dict(entry["report"])
            visitor.nonunique = [GameRecord(**_record_fields(r)) for r in entry["nonunique"]]
            visitor.candidates = [Candidate.from_dict(c, self.n) for c in entry["candidates"]]
            done[Phase(entry["phase"])][(tuple(entry["prefix"]), entry["whole_subtree"])] = visitor
        logger.info("resuming from %s: %d subtrees bounded, %d resolved", self.path,
                    len(done[Phase.BOUNDS]), len(done[Phase.RESOLVE]))
        return done

    def append(self, phase: Phase, prefix: SearchPrefix, visitor: ClassifyVisitor) -> None:
        self.directory.mkdir(parents=True, exist_ok=True)
        entry = {
            "schema_version": SCHEMA_VERSION,
            "order_version": CANONICAL_ORDER_VERSION,
            "n": self.n,
            "kind": self.kind.value,
            "phase": phase.value,
            "prefix": list(prefix.coalitions),
            "whole_subtree": prefix.whole_subtree,
            "report": visitor.report.to_dict(),
            "nonunique": [r.__dict__ for r in visitor.nonunique],
            "candidates": [c.to_dict() for c in visitor.candidates],
        }
        with self.path.open("a") as f:
            f.write(json.dumps(entry, sort_keys=True) + "\n")


def _record_fields(data: dict) -> dict:
    values = dict(data)
    for name in ("masks", "reps", "type_reps", "denominators"):
        values[name] = tuple(values.get(name, ()))
    return values


def _resolve_prefixes(kind: ReportKind, n: int, pending: List[Tuple[SearchPrefix, List[Candidate]]],
                      jobs: int, progress: bool) -> Iterator[Tuple[SearchPrefix, ClassifyVisitor]]:
    """Yield (prefix, visitor) with each prefix's candidates resolved, in prefix order."""
    if not pending:
        return
    results = Parallel(n_jobs=jobs, return_as="generator")(
        delayed(_resolve_job)(kind, n, candidates) for _, candidates in pending)
    bar = tqdm(results, total=len(pending), disable=not progress, desc=f"n={n} candidates", unit="subtree")
    for (prefix, _), visitor in zip(pending, bar):
        yield prefix, visitor


def classify(n: int, kind: ReportKind, jobs: int = 1, checkpoint: Optional[Path] = None,
             split_depth: Optional[int] = None, progress: bool = False, count_complete: bool = False,
             inherit_bounds: bool = False) -> Tuple[ClassificationReport, List[GameRecord]]:
    """Sweep every weighted game for n voters.

    With inherit_bounds the lower-bound pass starts every game from the
    bounds of its search node instead of from scratch.
    """
    start = time.perf_counter()
    config = EnumerationConfig(n, GameClass.WEIGHTED, Action.CLASSIFY, jobs=jobs, progress=progress,
                               split_depth=split_depth or SearchConfig.SPLIT_DEPTH,
                               inherit_bounds=inherit_bounds)
    prefixes = plan_prefixes(config)
    store = CandidateStore(checkpoint, n, kind) if checkpoint is not None else None
    done = store.load() if store else {phase: {} for phase in Phase}
    bounded, resolved = done[Phase.BOUNDS], done[Phase.RESOLVE]

    todo = [p for p in prefixes if _prefix_key(p) not in bounded]
    stats = EnumerationStats()
    for prefix, part, visitor in run_prefixes(config, todo, partial(ClassifyVisitor, kind, n)):
        visitor.report.lp_solves += part.lp_solves
        visitor.report.pivots += part.pivots
        stats = stats + part
        bounded[_prefix_key(prefix)] = visitor
        if store:
            store.append(Phase.BOUNDS, prefix, visitor)

    pending = [(p, bounded[_prefix_key(p)].candidates) for p in prefixes
               if bounded[_prefix_key(p)].candidates and _prefix_key(p) not in resolved]
    logger.info("%d of %d subtrees left with candidates to resolve", len(pending), len(prefixes))
    for prefix, visitor in _resolve_prefixes(kind, n, pending, jobs, progress):
        resolved[_prefix_key(prefix)] = visitor
        if store:
            store.append(Phase.RESOLVE, prefix, visitor)

    merged = ClassifyVisitor(kind, n)
    for prefix in prefixes:
        merged.merge(bounded[_prefix_key(prefix)])
        if _prefix_key(prefix) in resolved:
            merged.merge(resolved[_prefix_key(prefix)])
    report = merged.report
    if count_complete:
        complete, _ = enumerate_parallel(EnumerationConfig(n, GameClass.COMPLETE, jobs=jobs))
        report.complete = complete.nodes
    report.seconds = time.perf_counter() - start
    logger.info("classified %d weighted games for n=%d, %d candidates (%d LP solves)",
                report.weighted, n, report.candidates, stats.lp_solves)
    return report.check(), merged.nonunique


def classify_nonunique(n: int, mode: str = "plain", jobs: int = 1,
                       checkpoint: Optional[Path] = None) -> ClassificationReport:
    """Uniqueness counts of minimum-sum representations, mode 'plain' or 'types'."""
    kinds = {"plain": ReportKind.NONUNIQUE, "types": ReportKind.NONUNIQUE_TYPES}
    if mode not in kinds:
        raise ValueError(f"mode must be one of {sorted(kinds)}, got {mode!r}")
    report, _ = classify(n, kinds[mode], jobs, checkpoint)
    return report


def max_parameters(n: int, jobs: int = 1) -> Tuple[int, int, int]:
    """(max min sum, max min quota, max w_1) over the weighted games for n voters."""
    report, _ = classify(n, ReportKind.MAX_PARAMS, jobs)
    return report.extremal
