import pytest

from coalition import Coalition, CoalitionError, shift_lattice, shift_leq
from simple_game import (CompleteGame, InvalidGameError, derive_maximal_losing, derive_minimal_winning,
                         desirability_classes, dual_game, evaluate)

from conftest import GAME_295, WEIGHTS_295


def c(text):
    return Coalition.parse(text)


def rendered(coalitions):
    return [x.render() for x in coalitions]


def test_dictator(dictator):
    assert evaluate(dictator, c("101"))
    assert not evaluate(dictator, c("011"))
    assert rendered(derive_maximal_losing(dictator)) == ["011"]
    assert desirability_classes(dictator).blocks == ((1,), (2, 3))
    assert dictator.null_voters() == {2, 3}


def test_unanimity(unanimity):
    assert rendered(derive_maximal_losing(unanimity)) == ["110"]
    assert desirability_classes(unanimity).blocks == ((1, 2, 3),)
    assert unanimity.null_voters() == set()


def test_single_voter():
    g = CompleteGame.from_strings(["1"])
    assert rendered(derive_maximal_losing(g)) == ["0"]
    assert evaluate(g, c("1"))


def test_game_295(game_295):
    assert evaluate(game_295, c("000111111"))
    assert not evaluate(game_295, c("000011111"))
    assert game_295.render() == GAME_295
    assert CompleteGame.from_weights(WEIGHTS_295, 295) == game_295


def test_evaluate_rejects_mismatched_voters(dictator):
    with pytest.raises(CoalitionError):
        evaluate(dictator, c("10"))


@pytest.mark.parametrize("lines", [["110", "101"], ["100", "100", "010"]])
def test_comparable_coalitions_rejected(lines):
    with pytest.raises(InvalidGameError):
        CompleteGame.from_strings(lines)


def test_empty_game_rejected():
    with pytest.raises(InvalidGameError):
        CompleteGame.from_strings([])
    with pytest.raises(InvalidGameError):
        CompleteGame.from_strings(["000"])


def test_from_weights():
    assert CompleteGame.from_weights((1, 0, 0), 1).render() == ["100"]
    assert CompleteGame.from_weights((2, 1, 1), 2).render() == ["100", "011"]
    with pytest.raises(InvalidGameError):
        CompleteGame.from_weights((1, 1), 0)
    with pytest.raises(InvalidGameError):
        CompleteGame.from_weights((1, 1), 3)


def test_from_weights_rejects_unsorted_voters():
    # voter 2 outweighs voter 1, so winning sets are not shift-closed
    with pytest.raises(InvalidGameError):
        CompleteGame.from_weights((0, 1), 1)


def test_dual_examples(dictator):
    assert dual_game(dictator) == dictator
    assert dual_game(CompleteGame.from_strings(["11"])).render() == ["01"]
    g = CompleteGame.from_strings(["100", "011"])
    assert dual_game(dual_game(g)) == g


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_winning_sets_are_monotone(complete_games, n):
    lattice = shift_lattice(n)
    for g in complete_games[n]:
        flags = g.winning_flags
        assert flags[0] == "0" and flags[-1] == "1"
        for u in range(1 << n):
            if flags[u] == "1":
                assert all(flags[s] == "1" for s in lattice.successors(u))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_minimal_winning_round_trip(complete_games, n):
    lattice = shift_lattice(n)
    for g in complete_games[n]:
        losing = [x.mask for x in derive_maximal_losing(g)]
        winning = lattice.full & ~lattice.down_closure(losing)
        assert tuple(x.mask for x in derive_minimal_winning(n, winning)) == g.masks
        for v in losing:
            assert not any(shift_leq(u, v, n) for u in g.masks)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_dual_is_an_involution(complete_games, n):
    for g in complete_games[n]:
        d = dual_game(g)
        assert dual_game(d) == g
        for u in range(1 << n):
            assert d.is_winning_mask(u) != g.is_winning_mask(((1 << n) - 1) ^ u)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_classes_are_dual_invariant(complete_games, n):
    for g in complete_games[n]:
        assert desirability_classes(dual_game(g)) == desirability_classes(g)


def test_from_winning_table_matches_masks(game_295):
    g = CompleteGame.from_winning_table(9, game_295.winning_table)
    assert g == game_295
