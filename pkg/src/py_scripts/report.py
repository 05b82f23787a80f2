#!/usr/bin/env python3
"""
Classification report module.
Aggregated counts of a classification sweep with JSON, CSV and text
encodings, validated against a JSON schema.
"""

import csv
import io
import json
from dataclasses import dataclass, field, fields
from typing import Dict, List, Optional, Tuple

import jsonschema


SCHEMA_VERSION = 1

TIMING_FIELDS = ("seconds",)

_COUNT = {"type": ["integer", "null"], "minimum": 0}
_HISTOGRAM = {"type": "object", "patternProperties": {"^[0-9]+$": {"type": "integer", "minimum": 0}},
              "additionalProperties": False}

REPORT_SCHEMA = {
    "type": "object",
    "required": ["schema_version", "n", "kind", "weighted"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "n": {"type": "integer", "minimum": 1, "maximum": 16},
        "kind": {"enum": ["nonunique", "nonunique-types", "max-params", "full"]},
        "complete": _COUNT,
        "weighted": {"type": "integer", "minimum": 0},
        "nonunique_plain": _COUNT,
        "nonunique_types": _COUNT,
        "rep_histogram": _HISTOGRAM,
        "type_rep_histogram": _HISTOGRAM,
        "candidates": {"type": "integer", "minimum": 0},
        "lower_bound_hits": {"type": "integer", "minimum": 0},
        "fractional": {"type": "integer", "minimum": 0},
        "denominators": {"type": "array", "items": {"type": "integer", "minimum": 2}},
        "max_min_sum": {"type": "integer", "minimum": 0},
        "max_min_quota": {"type": "integer", "minimum": 0},
        "max_w1": {"type": "integer", "minimum": 0},
        "witnesses": {"type": "object", "additionalProperties": {"type": "string"}},
        "lp_solves": {"type": "integer", "minimum": 0},
        "pivots": {"type": "integer", "minimum": 0},
        "seconds": {"type": "number", "minimum": 0},
    },
    "additionalProperties": False,
}


class ReportError(ValueError):
    """Report document fails its schema or its internal consistency check."""


@dataclass
class ClassificationReport:
    """Counts of one classification sweep over the weighted games for n voters."""
    n: int
    kind: str
    weighted: int = 0
    complete: Optional[int] = None
    nonunique_plain: Optional[int] = None
    nonunique_types: Optional[int] = None
    rep_histogram: Dict[int, int] = field(default_factory=dict)
    type_rep_histogram: Dict[int, int] = field(default_factory=dict)
    candidates: int = 0
    lower_bound_hits: int = 0
    fractional: int = 0
    denominators: List[int] = field(default_factory=list)
    max_min_sum: int = 0
    max_min_quota: int = 0
    max_w1: int = 0
    witnesses: Dict[str, str] = field(default_factory=dict)
    lp_solves: int = 0
    pivots: int = 0
    seconds: float = 0.0
    schema_version: int = SCHEMA_VERSION

    @property
    def extremal(self) -> Tuple[int, int, int]:
        return self.max_min_sum, self.max_min_quota, self.max_w1

    def _raise_max(self, name: str, value: int, witness: str) -> None:
        if value > getattr(self, name):
            setattr(self, name, value)
            self.witnesses[name] = witness

    def add_game(self, witness: str, min_sum: int, min_quota: int, max_w1: int,
                 rep_count: Optional[int], type_rep_count: Optional[int],
                 lower_bound_hit: bool, denominators: List[int]) -> None:
        """Account for one weighted game."""
        self.weighted += 1
        if rep_count is not None:
            self.rep_histogram[rep_count] = self.rep_histogram.get(rep_count, 0) + 1
            self.nonunique_plain = (self.nonunique_plain or 0) + (rep_count > 1)
        if type_rep_count is not None:
            self.type_rep_histogram[type_rep_count] = self.type_rep_histogram.get(type_rep_count, 0) + 1
            self.nonunique_types = (self.nonunique_types or 0) + (type_rep_count > 1)
        self.lower_bound_hits += lower_bound_hit
        if denominators:
            self.fractional += 1
            self.denominators = sorted(set(self.denominators) | set(denominators))
        self._raise_max("max_min_sum", min_sum, witness)
        self._raise_max("max_min_quota", min_quota, witness)
        self._raise_max("max_w1", max_w1, witness)

    def add_candidate(self) -> None:
        """Account for a game whose lower bounds do not realize it."""
        self.candidates += 1

    def merge(self, other: "ClassificationReport") -> "ClassificationReport":
        """Fold other into self; on ties the earlier witness is kept."""
        if (other.n, other.kind) != (self.n, self.kind):
            raise ReportError(f"cannot merge a report for n={other.n} {other.kind} "
                              f"into n={self.n} {self.kind}")
        self.weighted += other.weighted
        if other.complete is not None:
            self.complete = (self.complete or 0) + other.complete
        for name in ("nonunique_plain", "nonunique_types"):
            if getattr(other, name) is not None:
                setattr(self, name, (getattr(self, name) or 0) + getattr(other, name))
        for mine, theirs in ((self.rep_histogram, other.rep_histogram),
                             (self.type_rep_histogram, other.type_rep_histogram)):
            for k, v in theirs.items():
                mine[k] = mine.get(k, 0) + v
        self.candidates += other.candidates
        self.lower_bound_hits += other.lower_bound_hits
        self.fractional += other.fractional
        self.denominators = sorted(set(self.denominators) | set(other.denominators))
        for name in ("max_min_sum", "max_min_quota", "max_w1"):
            if name in other.witnesses:
                self._raise_max(name, getattr(other, name), other.witnesses[name])
        self.lp_solves += other.lp_solves
        self.pivots += other.pivots
        self.seconds += other.seconds
        return self

    def check(self) -> "ClassificationReport":
        """Histograms must account for every weighted game."""
        for name in ("rep_histogram", "type_rep_histogram"):
            histogram = getattr(self, name)
            if histogram and sum(histogram.values()) != self.weighted:
                raise ReportError(f"{name} covers {sum(histogram.values())} games, "
                                  f"expected {self.weighted}")
        return self

    def to_dict(self, timing: bool = True) -> dict:
        out = {}
        for f in fields(self):
            if not timing and f.name in TIMING_FIELDS:
                continue
            value = getattr(self, f.name)
            if f.name.endswith("histogram"):
                value = {str(k): v for k, v in sorted(value.items())}
            elif isinstance(value, (list, dict)):
                value = type(value)(value)
            out[f.name] = value
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "ClassificationReport":
        try:
            jsonschema.validate(data, REPORT_SCHEMA)
        except jsonschema.ValidationError as e:
            raise ReportError(f"Invalid report format: {e.message}")
        values = dict(data)
        for name in ("rep_histogram", "type_rep_histogram"):
            values[name] = {int(k): v for k, v in values.get(name, {}).items()}
        return cls(**values).check()

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ClassificationReport":
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as e:
            raise ReportError(f"Invalid report format: {e}")

    def flatten(self, timing: bool = True) -> List[Tuple[str, object]]:
        """(key, value) rows; histograms and witnesses expand to dotted keys."""
        rows: List[Tuple[str, object]] = []
        for key, value in self.to_dict(timing).items():
            if isinstance(value, dict):
                rows.extend((f"{key}.{k}", v) for k, v in value.items())
            elif isinstance(value, list):
                rows.append((key, " ".join(str(v) for v in value)))
            elif value is not None:
                rows.append((key, value))
        return rows

    def to_csv(self, timing: bool = True) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(("field", "value"))
        writer.writerows(self.flatten(timing))
        return buffer.getvalue()

    def to_text(self, timing: bool = True) -> str:
        return "".join(f"{key} {value}\n" for key, value in self.flatten(timing))

    def render(self, fmt: str, timing: bool = True) -> str:
        if fmt == "json":
            return self.to_json(timing) + "\n"
        if fmt == "csv":
            return self.to_csv(timing)
        return self.to_text(timing)
