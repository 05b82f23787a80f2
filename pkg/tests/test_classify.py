import csv
import io
import json
from dataclasses import replace
from fractions import Fraction

import pytest

from classify import (Candidate, CandidateStore, CheckpointError, ClassifyVisitor, Phase, ReportKind, classify,
                      classify_game, classify_nonunique, max_parameters)
from enumerator import EnumerationConfig, SearchPrefix, plan_prefixes
from minrep import lower_bound_iteration, realizes
from report import ClassificationReport, ReportError
from simplex import SimplexState

EXTREMAL = {1: (1, 1, 1), 2: (2, 2, 1), 3: (4, 3, 2), 4: (8, 5, 3), 5: (15, 9, 5)}


@pytest.mark.parametrize("n, expected", sorted(EXTREMAL.items()))
def test_max_parameters(n, expected):
    assert max_parameters(n) == expected


@pytest.mark.slow
def test_max_parameters_six_voters():
    assert max_parameters(6) == (33, 18, 9)


@pytest.mark.slow
def test_max_parameters_seven_voters():
    assert max_parameters(7) == (77, 40, 18)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_small_games_have_unique_reps(n):
    report = classify_nonunique(n)
    assert report.nonunique_plain == 0
    assert report.nonunique_types is None
    assert report.rep_histogram == {1: report.weighted}


@pytest.mark.slow
@pytest.mark.parametrize("n", [6, 7])
@pytest.mark.parametrize("mode", ["plain", "types"])
def test_unique_reps_up_to_seven_voters(n, mode):
    report = classify_nonunique(n, mode)
    assert report.weighted == {6: 1111, 7: 29373}[n]
    if mode == "plain":
        assert report.nonunique_plain == 0
    else:
        assert report.nonunique_types == 0


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, pytest.param(6, marks=pytest.mark.slow),
                               pytest.param(7, marks=pytest.mark.slow)])
def test_lower_bound_optima_are_integral(n):
    report, _ = classify(n, ReportKind.MAX_PARAMS)
    assert report.fractional == 0
    assert report.denominators == []


def test_full_report():
    report, nonunique = classify(3, ReportKind.FULL)
    assert report.weighted == 8
    assert report.nonunique_plain == 0
    assert report.nonunique_types == 0
    assert report.type_rep_histogram == {1: 8}
    assert report.extremal == (4, 3, 2)
    assert set(report.witnesses) == {"max_min_sum", "max_min_quota", "max_w1"}
    assert report.lower_bound_hits <= report.weighted
    assert report.lp_solves > 0
    assert nonunique == []


def test_type_mode():
    report = classify_nonunique(4, "types")
    assert report.nonunique_plain is None
    assert report.nonunique_types == 0
    assert report.weighted == 25


def test_unknown_mode():
    with pytest.raises(ValueError):
        classify_nonunique(3, "sorted")


def test_count_complete():
    report, _ = classify(4, ReportKind.MAX_PARAMS, count_complete=True)
    assert report.complete == 25
    assert report.weighted == 25


def test_classify_game_record(game_q56):
    record = classify_game(game_q56, ReportKind.FULL)
    assert record.min_sum == 86
    assert record.rep_count == 3
    assert record.type_rep_count == 1
    assert record.nonunique
    assert record.max_w1 == 23
    comments = record.comments()
    assert comments[0] == "min_sum 86"
    assert "types" in comments
    assert record.label.startswith("111000101,")


def test_json_and_csv_carry_the_same_numbers():
    report, _ = classify(4, ReportKind.FULL)
    assert ClassificationReport.from_json(report.to_json()) == report
    rows = list(csv.reader(io.StringIO(report.to_csv())))
    assert rows[0] == ["field", "value"]
    assert dict(rows[1:]) == {key: str(value) for key, value in report.flatten()}
    data = json.loads(report.to_json())
    assert data["weighted"] == int(dict(rows[1:])["weighted"]) == 25
    assert "seconds" not in report.to_dict(timing=False)
    assert "weighted 25\n" in report.to_text()


def test_report_schema_rejections():
    good = ClassificationReport(3, "full", weighted=1, rep_histogram={1: 1}).to_dict()
    assert ClassificationReport.from_dict(good).weighted == 1
    for change in ({"schema_version": 2}, {"kind": "other"}, {"extra": 1}, {"rep_histogram": {"x": 1}}):
        with pytest.raises(ReportError):
            ClassificationReport.from_dict({**good, **change})
    with pytest.raises(ReportError):
        ClassificationReport.from_json("{not json")


def test_report_consistency_check():
    report = ClassificationReport(3, "full", weighted=2, rep_histogram={1: 3})
    with pytest.raises(ReportError):
        report.check()


def test_report_merge():
    a = ClassificationReport(3, "full")
    a.add_game("100", 1, 1, 1, 1, 1, True, [])
    b = ClassificationReport(3, "full")
    b.add_game("111", 3, 3, 1, 1, 1, False, [2])
    b.add_candidate()
    a.merge(b)
    assert a.weighted == 2
    assert a.rep_histogram == {1: 2}
    assert a.extremal == (3, 3, 1)
    assert a.witnesses == {"max_min_sum": "111", "max_min_quota": "111", "max_w1": "100"}
    assert a.fractional == 1
    assert a.denominators == [2]
    assert a.candidates == 1
    with pytest.raises(ReportError):
        a.merge(ClassificationReport(4, "full"))


def test_game_left_as_candidate(game_q56):
    visitor = ClassifyVisitor(ReportKind.FULL, 9)
    visitor(game_q56.masks, 9)
    assert visitor.report.weighted == 0
    assert visitor.report.candidates == 1
    [candidate] = visitor.candidates
    assert candidate.u == lower_bound_iteration(game_q56).u
    assert realizes(candidate.u, game_q56) is None
    assert candidate.game() == game_q56
    visitor.resolve(candidate)
    assert visitor.report.weighted == 1
    assert visitor.report.nonunique_plain == 1
    assert visitor.report.max_min_sum == 86
    assert [r.min_sum for r in visitor.nonunique] == [86]


def test_game_settled_by_its_bounds(unanimity):
    visitor = ClassifyVisitor(ReportKind.NONUNIQUE, 3)
    visitor(unanimity.masks, 3)
    assert visitor.candidates == []
    assert visitor.report.candidates == 0
    assert visitor.report.weighted == 1
    assert visitor.report.lower_bound_hits == 1


def test_fractional_bounds_reach_the_report(monkeypatch, unanimity):
    solve = SimplexState.set_objective

    def half_below(self, objective, warm_start=True):
        outcome = solve(self, objective, warm_start)
        return replace(outcome, value=outcome.value - Fraction(1, 2))

    monkeypatch.setattr(SimplexState, "set_objective", half_below)
    visitor = ClassifyVisitor(ReportKind.NONUNIQUE, 3)
    visitor(unanimity.masks, 3)
    assert visitor.report.weighted == 1
    assert visitor.report.fractional == 1
    assert visitor.report.denominators == [2]


def test_candidates_resolve_to_the_same_report():
    report, _ = classify(5, ReportKind.FULL)
    assert report.candidates <= report.weighted
    assert report.weighted - report.candidates <= report.lower_bound_hits
    assert report.weighted == 117


@pytest.mark.parametrize("n", [3, 4, 5])
def test_inherited_bounds_change_nothing(n):
    plain, _ = classify(n, ReportKind.FULL)
    inherited, _ = classify(n, ReportKind.FULL, inherit_bounds=True)
    for name in ("weighted", "nonunique_plain", "nonunique_types", "rep_histogram", "type_rep_histogram"):
        assert getattr(inherited, name) == getattr(plain, name)
    assert inherited.extremal == plain.extremal


def test_checkpoint_resume(tmp_path):
    first, _ = classify(4, ReportKind.FULL, checkpoint=tmp_path)
    store = CandidateStore(tmp_path, 4, ReportKind.FULL)
    lines = store.path.read_text().splitlines()
    done = store.load()
    prefixes = plan_prefixes(EnumerationConfig(4))
    assert len(done[Phase.BOUNDS]) == len(prefixes)
    assert len(lines) == len(prefixes) + len(done[Phase.RESOLVE])
    assert sum(v.report.candidates for v in done[Phase.BOUNDS].values()) == first.candidates
    assert all(done[Phase.BOUNDS][key].candidates for key in done[Phase.RESOLVE])
    second, _ = classify(4, ReportKind.FULL, checkpoint=tmp_path)
    assert second.to_dict(timing=False) == first.to_dict(timing=False)
    # nothing left to run, nothing appended
    assert len(store.path.read_text().splitlines()) == len(lines)


def test_checkpoint_keeps_candidates(tmp_path, game_q56):
    visitor = ClassifyVisitor(ReportKind.NONUNIQUE, 9)
    visitor(game_q56.masks, 9)
    store = CandidateStore(tmp_path, 9, ReportKind.NONUNIQUE)
    prefix = SearchPrefix(game_q56.masks[:1])
    store.append(Phase.BOUNDS, prefix, visitor)
    done = store.load()
    assert done[Phase.RESOLVE] == {}
    loaded = done[Phase.BOUNDS][(prefix.coalitions, True)]
    assert loaded.candidates == visitor.candidates
    assert loaded.report == visitor.report
    assert isinstance(loaded.candidates[0], Candidate)


def test_checkpoint_from_another_order(tmp_path):
    store = CandidateStore(tmp_path, 3, ReportKind.FULL)
    entry = {"schema_version": 1, "order_version": 999, "n": 3, "kind": "full", "phase": "bounds", "prefix": [7],
             "whole_subtree": True, "report": {}, "nonunique": [], "candidates": []}
    store.path.write_text(json.dumps(entry) + "\n")
    with pytest.raises(CheckpointError):
        classify(3, ReportKind.FULL, checkpoint=tmp_path)


def test_checkpoint_with_broken_line(tmp_path):
    store = CandidateStore(tmp_path, 3, ReportKind.FULL)
    store.path.write_text("{broken\n")
    with pytest.raises(CheckpointError):
        store.load()
    store.path.write_text(json.dumps({"phase": "later"}) + "\n")
    with pytest.raises(CheckpointError):
        store.load()
