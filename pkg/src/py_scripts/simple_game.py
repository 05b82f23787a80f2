#!/usr/bin/env python3
"""
Complete simple game module.
Game construction from minimal winning coalitions, evaluation, maximal
losing coalitions, duality and desirability classes.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, List, Sequence, Set, Tuple

from coalition import (Coalition, CoalitionError, ShiftOrder, check_voters, compare_masks,
                       parse_mask, render_mask, shift_lattice, voter_bit)


class InvalidGameError(ValueError):
    """Structural violation of a complete simple game."""


@dataclass(frozen=True)
class EquivalenceClasses:
    """Ordered partition of voters 1..n into blocks of equally desirable voters."""
    blocks: Tuple[Tuple[int, ...], ...]

    def __iter__(self) -> Iterator[Tuple[int, ...]]:
        return iter(self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def class_index(self) -> List[int]:
        """Block index for each voter, 0-based voter positions."""
        index = []
        for k, block in enumerate(self.blocks):
            index.extend([k] * len(block))
        return index

    def sizes(self) -> Tuple[int, ...]:
        return tuple(len(block) for block in self.blocks)

    def render(self) -> str:
        return " | ".join(" ".join(str(v) for v in block) for block in self.blocks)


@dataclass(frozen=True)
class CompleteGame:
    """Complete simple game given by its shift-minimal winning coalitions.

    Voters are ordered 1 ⊒ 2 ⊒ ... ⊒ n. Construction only normalizes and
    runs cheap checks; use validate() or the from_* constructors for the
    antichain test.
    """
    n: int
    min_winning: Tuple[Coalition, ...]

    def __post_init__(self):
        check_voters(self.n)
        coalitions = tuple(sorted(set(self.min_winning), reverse=True))
        if not coalitions:
            raise InvalidGameError("a game needs at least one minimal winning coalition")
        for c in coalitions:
            if c.n != self.n:
                raise InvalidGameError(f"coalition {c} does not have {self.n} voters")
            if c.mask == 0:
                raise InvalidGameError("the empty coalition cannot be winning")
        object.__setattr__(self, "min_winning", coalitions)

    @classmethod
    def from_masks(cls, n: int, masks: Iterable[int], validate: bool = True) -> "CompleteGame":
        game = cls(n, tuple(Coalition(m, n) for m in masks))
        if validate:
            game.validate()
        return game

    @classmethod
    def from_strings(cls, lines: Sequence[str]) -> "CompleteGame":
        """Create game from 0/1 strings of equal length."""
        if not lines:
            raise InvalidGameError("a game needs at least one minimal winning coalition")
        n = len(lines[0].strip())
        return cls.from_masks(n, [parse_mask(line, n) for line in lines])

    @classmethod
    def from_winning_table(cls, n: int, winning: int) -> "CompleteGame":
        """Create game from a bitset of winning coalitions closed upward under ⪯."""
        lattice = shift_lattice(n)
        if winning & 1:
            raise InvalidGameError("the empty coalition cannot be winning")
        if not (winning >> lattice.top) & 1:
            raise InvalidGameError("the grand coalition must be winning")
        if not lattice.is_up_closed(winning):
            raise InvalidGameError("winning coalitions are not closed under the shift order")
        return cls.from_masks(n, lattice.minimal(winning), validate=False)

    @classmethod
    def from_weights(cls, weights: Sequence[int], quota: int) -> "CompleteGame":
        """Create the weighted game [quota; weights] with voters in the given order."""
        n = len(weights)
        check_voters(n)
        if any(w < 0 for w in weights):
            raise InvalidGameError("weights must be non-negative")
        if quota <= 0:
            raise InvalidGameError("quota must be positive")
        sums = coalition_weights(weights)
        winning = 0
        for mask, total in enumerate(sums):
            if total >= quota:
                winning |= 1 << mask
        try:
            return cls.from_winning_table(n, winning)
        except InvalidGameError as e:
            raise InvalidGameError(f"weights {list(weights)} with quota {quota}: {e}")

    def validate(self) -> "CompleteGame":
        """Check the antichain property of the minimal winning coalitions."""
        masks = self.masks
        for i, u in enumerate(masks):
            for v in masks[i + 1:]:
                if compare_masks(u, v, self.n) is not ShiftOrder.INCOMPARABLE:
                    raise InvalidGameError(
                        f"{render_mask(v, self.n)} and {render_mask(u, self.n)} are comparable")
        return self

    @cached_property
    def masks(self) -> Tuple[int, ...]:
        return tuple(c.mask for c in self.min_winning)

    @cached_property
    def winning_table(self) -> int:
        """Bitset of all winning coalitions."""
        return shift_lattice(self.n).up_closure(self.masks)

    @cached_property
    def winning_flags(self) -> str:
        """Winning table as a string indexed by coalition mask."""
        return shift_lattice(self.n).to_flags(self.winning_table)

    @cached_property
    def losing_table(self) -> int:
        lattice = shift_lattice(self.n)
        return lattice.full & ~self.winning_table

    def is_winning_mask(self, mask: int) -> bool:
        return self.winning_flags[mask] == "1"

    def maximal_losing_masks(self) -> List[int]:
        return shift_lattice(self.n).maximal(self.losing_table)

    def null_voters(self) -> Set[int]:
        """Voters that never turn a losing coalition into a winning one."""
        flags = self.winning_flags
        nulls = set()
        for voter in range(1, self.n + 1):
            bit = voter_bit(self.n, voter)
            if all(flags[m] == flags[m | bit] for m in range(1 << self.n) if not m & bit):
                nulls.add(voter)
        return nulls

    def render(self) -> List[str]:
        return [c.render() for c in self.min_winning]

    def __str__(self) -> str:
        return "{" + ", ".join(self.render()) + "}"


def coalition_weights(weights: Sequence[int]) -> List[int]:
    """Weight sum of every coalition mask."""
    n = len(weights)
    sums = [0] * (1 << n)
    for mask in range(1, 1 << n):
        low = mask & -mask
        voter = n - (low.bit_length() - 1)
        sums[mask] = sums[mask ^ low] + weights[voter - 1]
    return sums


def evaluate(g: CompleteGame, c: Coalition) -> bool:
    """True iff the coalition wins in the game."""
    if c.n != g.n:
        raise CoalitionError(f"coalition {c} does not have {g.n} voters")
    return g.is_winning_mask(c.mask)


def derive_maximal_losing(g: CompleteGame) -> Tuple[Coalition, ...]:
    """Shift-maximal losing coalitions, decreasing."""
    return tuple(Coalition(m, g.n) for m in g.maximal_losing_masks())


def derive_minimal_winning(n: int, winning: int) -> Tuple[Coalition, ...]:
    """Shift-minimal winning coalitions of an up-closed winning bitset."""
    return tuple(Coalition(m, n) for m in shift_lattice(n).minimal(winning))


def desirability_relation(n: int, winning_flags: str) -> Set[Tuple[int, int]]:
    """All pairs (i, j) with i ⊒ j: swapping j for i never turns a winning coalition losing."""
    relation = set()
    for i in range(1, n + 1):
        bi = voter_bit(n, i)
        for j in range(1, n + 1):
            if i == j:
                relation.add((i, j))
                continue
            bj = voter_bit(n, j)
            ok = True
            for m in range(1 << n):
                if m & bj and not m & bi and winning_flags[m] == "1" and winning_flags[m ^ bj | bi] == "0":
                    ok = False
                    break
            if ok:
                relation.add((i, j))
    return relation


def desirability_classes(g: CompleteGame) -> EquivalenceClasses:
    """Blocks of equally desirable voters; checks 1 ⊒ 2 ⊒ ... ⊒ n."""
    relation = desirability_relation(g.n, g.winning_flags)
    for i in range(1, g.n):
        if (i, i + 1) not in relation:
            raise InvalidGameError(f"voter {i} is not at least as desirable as voter {i + 1}")
    blocks: List[List[int]] = [[1]]
    for j in range(2, g.n + 1):
        if (j, j - 1) in relation:
            blocks[-1].append(j)
        else:
            blocks.append([j])
    for block in blocks:
        for i in block:
            for j in block:
                if (i, j) not in relation:
                    raise InvalidGameError(f"voters {i} and {j} share a block but are not equivalent")
    return EquivalenceClasses(tuple(tuple(b) for b in blocks))


def dual_game(g: CompleteGame) -> CompleteGame:
    """Game g* with χ*(U) = 1 - χ(N \\ U)."""
    lattice = shift_lattice(g.n)
    # complement of U is top - U, i.e. the reversed index
    dual_flags = g.winning_flags[::-1].translate(_SWAP_01)
    dual_winning = int(dual_flags[::-1], 2)
    return CompleteGame.from_masks(g.n, lattice.minimal(dual_winning), validate=False)


_SWAP_01 = str.maketrans("01", "10")
