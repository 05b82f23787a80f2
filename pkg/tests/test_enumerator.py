import pytest

from coalition import CoalitionError, shift_lattice
from enumerator import (Action, CollectVisitor, CountVisitor, EnumerationConfig, EnumerationStats, GameClass,
                        SearchPrefix, default_visitor, enumerate_complete, enumerate_parallel, enumerate_weighted,
                        plan_prefixes, run_prefix, split_search)
from minrep import all_min_sum_reps
from oracles import complete_tables, oracle_complete_small, oracle_monotone_small, table_of
from simple_game import CompleteGame
from weightedness import is_weighted

COMPLETE_COUNTS = {1: 1, 2: 3, 3: 8, 4: 25, 5: 117}


@pytest.mark.parametrize("n, expected", sorted(COMPLETE_COUNTS.items()))
def test_complete_counts(n, expected):
    assert enumerate_complete(n) == expected


@pytest.mark.parametrize("n, expected", sorted(COMPLETE_COUNTS.items()))
def test_weighted_counts(n, expected):
    assert enumerate_weighted(n) == expected


@pytest.mark.slow
@pytest.mark.parametrize("n, expected", [(6, 1171), (7, 44313)])
def test_complete_counts_long(n, expected):
    assert enumerate_complete(n) == expected


@pytest.mark.slow
def test_weighted_count_six_voters():
    stats = EnumerationStats()
    assert enumerate_weighted(6, stats=stats) == 1111
    assert stats.rejected + stats.pruned > 0


@pytest.mark.slow
def test_weighted_count_seven_voters():
    assert enumerate_weighted(7) == 29373


@pytest.mark.slow
def test_weighted_plus_rejected_is_complete_at_six():
    weighted = CollectVisitor()
    enumerate_weighted(6, weighted)
    complete = CollectVisitor()
    enumerate_complete(6, complete)
    flagged = [m for m in complete.records if is_weighted(CompleteGame.from_masks(6, m)) is not None]
    assert flagged == weighted.records
    assert len(complete.records) - len(flagged) == 60


@pytest.mark.slow
def test_warm_start_saves_pivots():
    warm = run_prefix(EnumerationConfig(6), SearchPrefix(()))
    cold = run_prefix(EnumerationConfig(6, warm_start=False), SearchPrefix(()))
    assert warm.nodes == cold.nodes == 1111
    assert warm.pivots < cold.pivots


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_complete_games_match_antichain_oracle(n):
    assert enumerate_complete(n) == oracle_complete_small(n)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_complete_games_match_truth_table_oracle(n):
    visitor = CollectVisitor()
    enumerate_complete(n, visitor)
    tables = [table_of(g.winning_flags) for g in visitor.games()]
    assert len(tables) == len(set(tables))
    assert set(tables) == complete_tables(n)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_visited_games_are_antichains_without_repeats(n):
    visitor = CollectVisitor()
    enumerate_complete(n, visitor)
    assert len(set(visitor.records)) == len(visitor.records)
    for masks in visitor.records:
        assert list(masks) == sorted(masks, reverse=True)
        CompleteGame.from_masks(n, masks).validate()


def test_visiting_order():
    visitor = CollectVisitor()
    enumerate_complete(3, visitor)
    assert visitor.records[0] == (0b111,)
    assert visitor.records[-1] == (0b001,)
    assert len(visitor.records) == 8


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_visited_weighted_games_are_weighted(n):
    visitor = CollectVisitor()
    enumerate_weighted(n, visitor)
    for g in visitor.games():
        assert is_weighted(g) is not None


@pytest.mark.parametrize("n", [3, 4, 5])
def test_warm_start_does_not_change_results(n):
    warm, cold = CollectVisitor(), CollectVisitor()
    warm_stats = run_prefix(EnumerationConfig(n), SearchPrefix(()), warm)
    cold_stats = run_prefix(EnumerationConfig(n, warm_start=False), SearchPrefix(()), cold)
    assert warm.records == cold.records
    assert cold_stats.warm_solves == 0
    assert warm_stats.warm_solves > 0


def test_oracle_counts():
    assert oracle_monotone_small(1) == (1, 1, 1)
    assert oracle_monotone_small(2) == (4, 3, 3)
    assert oracle_monotone_small(3) == (18, 8, 8)
    assert oracle_monotone_small(4) == (166, 25, 25)


def test_oracles_reject_large_inputs():
    with pytest.raises(CoalitionError):
        oracle_complete_small(6)
    with pytest.raises(CoalitionError):
        oracle_monotone_small(5)


def test_split_search_depth_one():
    prefixes = split_search(3, 1)
    assert len(prefixes) == 7
    assert all(p.whole_subtree for p in prefixes)
    assert [p.coalitions for p in prefixes] == [(x,) for x in range(7, 0, -1)]


def test_split_search_depth_two_is_preorder():
    prefixes = split_search(4, 2)
    interior = [p for p in prefixes if not p.whole_subtree]
    assert all(len(p.coalitions) == 1 for p in interior)
    assert all(len(p.coalitions) == 2 for p in prefixes if p.whole_subtree)
    firsts = [p.coalitions[0] for p in prefixes]
    assert firsts == sorted(firsts, reverse=True)


def test_split_search_with_base():
    prefixes = split_search(3, 1, base=(0b100,))
    assert prefixes[0] == SearchPrefix((0b100,), False)
    assert [p.coalitions for p in prefixes[1:]] == [(0b100, 0b011)]
    assert prefixes[1].whole_subtree


@pytest.mark.parametrize("target", list(GameClass))
@pytest.mark.parametrize("depth", [1, 2, 3])
def test_prefixes_partition_the_tree(target, depth):
    n = 5
    config = EnumerationConfig(n, target, split_depth=depth)
    whole = CollectVisitor()
    run_prefix(config, SearchPrefix(()), whole)
    parts = CollectVisitor()
    for prefix in plan_prefixes(config):
        visitor = CollectVisitor()
        run_prefix(config, prefix, visitor)
        parts.merge(visitor)
    assert parts.records == whole.records


@pytest.mark.parametrize("jobs", [1, 2])
def test_parallel_results_do_not_depend_on_jobs(jobs):
    stats, visitor = enumerate_parallel(EnumerationConfig(5, jobs=jobs), CollectVisitor)
    serial = CollectVisitor()
    enumerate_weighted(5, serial)
    assert stats.nodes == 117
    assert visitor.records == serial.records


def test_parallel_subtree():
    prefix = SearchPrefix((0b11000,))
    config = EnumerationConfig(5, GameClass.COMPLETE, prefix=prefix)
    stats, visitor = enumerate_parallel(config, CountVisitor)
    direct = run_prefix(config, prefix)
    assert stats.nodes == visitor.count == direct.nodes


def test_invalid_prefix_path():
    config = EnumerationConfig(3, GameClass.COMPLETE)
    with pytest.raises(CoalitionError):
        run_prefix(config, SearchPrefix((0b001, 0b111)))
    with pytest.raises(CoalitionError):
        split_search(3, 1, base=(0b100, 0b101))


def test_prefix_parse_and_render():
    prefix = SearchPrefix.parse("110, 101", 3)
    assert prefix.coalitions == (0b110, 0b101)
    assert prefix.render(3) == "110,101"
    with pytest.raises(CoalitionError):
        SearchPrefix.parse("11", 3)


def test_config_validation():
    with pytest.raises(ValueError):
        EnumerationConfig(3, jobs=0)
    with pytest.raises(ValueError):
        EnumerationConfig(3, split_depth=0)
    with pytest.raises(CoalitionError):
        EnumerationConfig(0)
    with pytest.raises(ValueError):
        EnumerationConfig(3, GameClass.COMPLETE, Action.CLASSIFY)
    with pytest.raises(ValueError):
        EnumerationConfig(3, GameClass.COMPLETE, inherit_bounds=True)


def test_action_picks_the_visitor():
    _, visitor = enumerate_parallel(EnumerationConfig(3, GameClass.COMPLETE, Action.EMIT))
    assert isinstance(visitor, CollectVisitor)
    assert len(visitor.records) == 8
    _, visitor = enumerate_parallel(EnumerationConfig(3, GameClass.COMPLETE))
    assert isinstance(visitor, CountVisitor)
    assert visitor.count == 8
    with pytest.raises(ValueError):
        default_visitor(Action.CLASSIFY)
    with pytest.raises(ValueError):
        enumerate_parallel(EnumerationConfig(3, action=Action.CLASSIFY))


class BoundsVisitor(CollectVisitor):
    def __init__(self):
        super().__init__()
        self.bounds = []

    def __call__(self, masks, n, bounds=None):
        super().__call__(masks, n)
        self.bounds.append(bounds)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_inherited_bounds_hold_for_every_game(n):
    plain = CollectVisitor()
    enumerate_weighted(n, plain)
    visitor = BoundsVisitor()
    enumerate_weighted(n, visitor, EnumerationConfig(n, inherit_bounds=True))
    assert visitor.records == plain.records
    for g, bounds in zip(visitor.games(), visitor.bounds):
        assert len(bounds) == n
        for rep in all_min_sum_reps(g).reps:
            if list(rep.weights) == sorted(rep.weights, reverse=True):
                assert all(w >= b for w, b in zip(rep.weights, bounds))


def test_bounds_are_only_passed_when_asked():
    visitor = BoundsVisitor()
    enumerate_weighted(3, visitor)
    assert visitor.bounds == [None] * 8


def test_stats_add():
    total = EnumerationStats(nodes=2, pivots=5) + EnumerationStats(nodes=3, lp_solves=1)
    assert total.nodes == 5
    assert total.pivots == 5
    assert total.lp_solves == 1


def test_lattice_is_shared():
    assert shift_lattice(4) is shift_lattice(4)
