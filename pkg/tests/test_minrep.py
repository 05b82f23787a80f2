from dataclasses import replace
from fractions import Fraction

import pytest

from minrep import (WeightRep, all_min_sum_reps, all_min_sum_reps_preserving_types, lower_bound_iteration,
                    min_quota, min_sum, min_sum_rep, quota_range, realizes)
from oracles import brute_force_min_reps, table_of
from simple_game import CompleteGame, InvalidGameError, desirability_classes, dual_game
from simplex import SimplexState

from conftest import GAME_W1_110, WEIGHTS_295, WEIGHTS_W1_110

Q56_REPS = [(23, 15, 13, 11, 9, 8, 3, 2, 2), (23, 15, 13, 11, 9, 8, 4, 1, 2), (23, 15, 13, 11, 9, 8, 4, 2, 1)]
Q46_TYPE_REPS = [(33, 13, 12, 9, 8, 8, 7, 2, 2), (33, 13, 12, 10, 8, 8, 6, 2, 2)]
Q47_REPS = [(24, 19, 15, 8, 6, 7, 7, 2, 2), (24, 19, 15, 8, 7, 6, 7, 2, 2), (24, 19, 15, 8, 7, 7, 6, 2, 2)]


def test_realizes(game_295, dictator):
    assert realizes(WEIGHTS_295, game_295) == 295
    assert realizes((1, 0, 0), dictator) == 1
    assert realizes((1, 1, 1), dictator) is None
    assert quota_range((3, 1, 1), dictator) == (3, 3)
    assert quota_range((2, 1, 1), dictator) is None


def test_realizes_checks_input(dictator):
    with pytest.raises(InvalidGameError):
        realizes((1, 0), dictator)
    with pytest.raises(InvalidGameError):
        realizes((1, -1, 0), dictator)


def test_game_with_largest_w1():
    g = CompleteGame.from_strings(GAME_W1_110)
    assert realizes(WEIGHTS_W1_110, g) == 230


def test_dictator(dictator):
    bounds = lower_bound_iteration(dictator)
    assert bounds.u == (1, 0, 0)
    assert bounds.converged
    result = all_min_sum_reps(dictator)
    assert result.min_sum == 1
    assert result.reps == (WeightRep((1, 0, 0), 1),)
    assert result.unique
    assert min_quota(result, dictator) == 1


def test_unanimity(unanimity):
    rep, bounds = min_sum_rep(unanimity)
    assert rep == WeightRep((1, 1, 1), 3)
    assert bounds.total == 3
    typed = all_min_sum_reps_preserving_types(unanimity)
    assert [r.weights for r in typed.reps] == [(1, 1, 1)]


def test_three_optimal_reps(game_q56):
    result = all_min_sum_reps(game_q56)
    assert result.min_sum == 86
    assert [r.weights for r in result.reps] == Q56_REPS
    assert all(r.quota == 56 for r in result.reps)
    assert min_quota(result, game_q56) == 56
    assert result.max_w1 == 23


def test_unique_type_preserving_rep(game_q56):
    result = all_min_sum_reps_preserving_types(game_q56)
    assert result.unique
    assert result.reps[0].weights == Q56_REPS[0]
    assert result.min_sum == 86


def test_two_type_preserving_reps(game_q46):
    assert desirability_classes(game_q46).blocks == ((1,), (2,), (3,), (4,), (5, 6), (7,), (8, 9))
    result = all_min_sum_reps_preserving_types(game_q46)
    assert result.min_sum == 94
    assert [r.weights for r in result.reps] == Q46_TYPE_REPS
    assert not result.unique


def test_reps_permute_within_a_class():
    g = CompleteGame.from_weights((24, 19, 15, 8, 7, 7, 6, 2, 2), 47)
    assert desirability_classes(g).blocks == ((1,), (2,), (3,), (4,), (5, 6, 7), (8, 9))
    result = all_min_sum_reps(g)
    assert result.min_sum == 90
    assert [r.weights for r in result.reps] == Q47_REPS
    assert all(r.quota == 47 for r in result.reps)
    assert min_quota(result, g) == 47


def test_game_295_min_sum(game_295):
    assert min_sum(game_295) == 568


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_matches_brute_force(complete_games, n):
    for g in complete_games[n]:
        result = all_min_sum_reps(g)
        expected = brute_force_min_reps(table_of(g.winning_flags), n)
        assert expected is not None
        total, vectors = expected
        assert result.min_sum == total
        assert sorted(r.weights for r in result.reps) == vectors


@pytest.mark.slow
def test_matches_brute_force_five_voters(complete_games):
    for g in complete_games[5]:
        total, vectors = brute_force_min_reps(table_of(g.winning_flags), 5)
        result = all_min_sum_reps(g)
        assert result.min_sum == total
        assert sorted(r.weights for r in result.reps) == vectors


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_lower_bounds_are_valid(complete_games, n):
    for g in complete_games[n]:
        result = all_min_sum_reps(g)
        u = result.bounds.u
        sorted_reps = [r.weights for r in result.reps if list(r.weights) == sorted(r.weights, reverse=True)]
        assert sorted_reps
        for weights in sorted_reps:
            assert all(w >= b for w, b in zip(weights, u))
        if realizes(u, g) is not None:
            assert sorted_reps == [u]


@pytest.mark.parametrize("n", [3, 4])
def test_fractional_optima_are_recorded(monkeypatch, complete_games, n):
    solve = SimplexState.set_objective

    def half_below(self, objective, warm_start=True):
        outcome = solve(self, objective, warm_start)
        return replace(outcome, value=outcome.value - Fraction(1, 2))

    exact = [lower_bound_iteration(g) for g in complete_games[n]]
    assert not any(b.fractional for b in exact)
    monkeypatch.setattr(SimplexState, "set_objective", half_below)
    for g, bounds in zip(complete_games[n], exact):
        shifted = lower_bound_iteration(g)
        assert shifted.u == bounds.u
        assert shifted.fractional
        assert shifted.denominators == {2}


def test_search_from_known_bounds(game_q56):
    u = lower_bound_iteration(game_q56).u
    assert lower_bound_iteration(game_q56, start=u).u == u
    result = all_min_sum_reps(game_q56, start=u)
    assert [r.weights for r in result.reps] == Q56_REPS
    typed = all_min_sum_reps_preserving_types(game_q56, start=u)
    assert [r.weights for r in typed.reps] == Q56_REPS[:1]
    with pytest.raises(InvalidGameError):
        lower_bound_iteration(game_q56, start=u[:-1])


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_every_rep_realizes_the_game(complete_games, n):
    for g in complete_games[n]:
        for preserve in (False, True):
            result = (all_min_sum_reps_preserving_types if preserve else all_min_sum_reps)(g)
            for r in result.reps:
                assert r.total == result.min_sum
                assert realizes(r.weights, g) == r.quota
            if preserve:
                classes = desirability_classes(g)
                for r in result.reps:
                    for block in classes:
                        assert len({r.weights[v - 1] for v in block}) == 1
                assert result.min_sum >= all_min_sum_reps(g).min_sum


@pytest.mark.parametrize("n", [1, 2, 3, 4, pytest.param(5, marks=pytest.mark.slow)])
def test_min_sum_is_dual_invariant(complete_games, n):
    for g in complete_games[n]:
        d = dual_game(g)
        assert min_sum(d) == min_sum(g)
        for r in all_min_sum_reps(g).reps:
            assert CompleteGame.from_weights(r.weights, r.total - r.quota + 1) == d
