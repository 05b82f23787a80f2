#!/usr/bin/env python3
"""
Brute-force oracles for small voter counts.
Written against plain truth tables so that they share no code with the
orderly generator, the LP machinery or the minimum-sum search.
"""

from itertools import product
from typing import List, Optional, Set, Tuple

from coalition import CoalitionError


ANTICHAIN_MAX_VOTERS = 5
MONOTONE_MAX_VOTERS = 4


def _require(n: int, limit: int) -> None:
    if not 1 <= n <= limit:
        raise CoalitionError(f"oracle supports 1..{limit} voters, got {n}")


def _prefix_counts(mask: int, n: int) -> List[int]:
    counts = []
    total = 0
    for pos in range(n):
        total += (mask >> (n - 1 - pos)) & 1
        counts.append(total)
    return counts


def _below(u: int, v: int, n: int) -> bool:
    """u precedes v in the shift order."""
    return all(a <= b for a, b in zip(_prefix_counts(u, n), _prefix_counts(v, n)))


def oracle_complete_small(n: int) -> int:
    """Count nonempty shift antichains of nonzero coalitions by include/exclude DFS."""
    _require(n, ANTICHAIN_MAX_VOTERS)
    coalitions = list(range(1, 1 << n))
    comparable = {(u, v): _below(u, v, n) or _below(v, u, n) for u in coalitions for v in coalitions}

    def count(index: int, chosen: List[int]) -> int:
        if index == len(coalitions):
            return 1 if chosen else 0
        c = coalitions[index]
        total = count(index + 1, chosen)
        if not any(comparable[(c, d)] for d in chosen):
            chosen.append(c)
            total += count(index + 1, chosen)
            chosen.pop()
        return total

    return count(0, [])


def _is_monotone(table: Tuple[int, ...], n: int) -> bool:
    size = 1 << n
    return all(table[m] <= table[m | (1 << b)] for m in range(size) for b in range(n))


def _at_least_as_desirable(table: Tuple[int, ...], n: int, i: int, j: int) -> bool:
    """Voter i (0-based, voter 1 = top bit) is at least as desirable as voter j."""
    bi = 1 << (n - 1 - i)
    bj = 1 << (n - 1 - j)
    for m in range(1 << n):
        if m & bj and not m & bi and table[m] and not table[(m & ~bj) | bi]:
            return False
    return True


def _is_complete_sorted(table: Tuple[int, ...], n: int) -> bool:
    """Desirability is total and voters are sorted 1, 2, ..., n by it."""
    for i in range(n):
        for j in range(i + 1, n):
            if not _at_least_as_desirable(table, n, i, j):
                return False
    return True


def _sorted_weight_vectors(n: int, max_sum: int):
    def rec(prefix: List[int], cap: int, remaining: int):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for w in range(min(cap, remaining), -1, -1):
            prefix.append(w)
            yield from rec(prefix, w, remaining - w)
            prefix.pop()

    yield from rec([], max_sum, max_sum)


def weighted_tables(n: int, max_sum: int = 40) -> Set[Tuple[int, ...]]:
    """Truth tables of all games [q; w] with non-increasing integer weights, sum <= max_sum."""
    size = 1 << n
    tables = set()
    for weights in _sorted_weight_vectors(n, max_sum):
        sums = [sum(weights[i] for i in range(n) if m & (1 << (n - 1 - i))) for m in range(size)]
        for q in sorted(set(sums)):
            if q <= 0:
                continue
            tables.add(tuple(1 if s >= q else 0 for s in sums))
    return tables


def simple_tables(n: int) -> List[Tuple[int, ...]]:
    """Monotone truth tables with the empty coalition losing and the grand coalition winning."""
    _require(n, MONOTONE_MAX_VOTERS)
    size = 1 << n
    tables = []
    for bits in product((0, 1), repeat=size - 2):
        table = (0,) + bits + (1,)
        if _is_monotone(table, n):
            tables.append(table)
    return tables


def complete_tables(n: int) -> Set[Tuple[int, ...]]:
    """Truth tables of the complete games with voters sorted by desirability."""
    return {t for t in simple_tables(n) if _is_complete_sorted(t, n)}


def oracle_monotone_small(n: int, max_sum: int = 16) -> Tuple[int, int, int]:
    """(simple games, complete games with sorted voters, weighted among those)."""
    simple = simple_tables(n)
    complete = {t for t in simple if _is_complete_sorted(t, n)}
    weighted = complete & weighted_tables(n, max_sum)
    return len(simple), len(complete), len(weighted)


def table_of(winning_flags: str) -> Tuple[int, ...]:
    return tuple(1 if ch == "1" else 0 for ch in winning_flags)


def brute_force_min_reps(table: Tuple[int, ...], n: int, max_entry: int = 15
                         ) -> Optional[Tuple[int, List[Tuple[int, ...]]]]:
    """Minimum weight sum and every weight vector of that sum realizing table.

    Scans vectors with entries <= max_entry in order of increasing sum; None if
    nothing realizes the table within the bound.
    """
    size = 1 << n
    members = [[i for i in range(n) if m & (1 << (n - 1 - i))] for m in range(size)]
    for total in range(0, n * max_entry + 1):
        found = []
        for weights in _compositions(total, n, max_entry):
            win = min(sum(weights[i] for i in members[m]) for m in range(size) if table[m])
            lose = max(sum(weights[i] for i in members[m]) for m in range(size) if not table[m])
            if win > lose:
                found.append(weights)
        if found:
            return total, sorted(found)
    return None


def _compositions(total: int, parts: int, cap: int):
    if parts == 1:
        if total <= cap:
            yield (total,)
        return
    for first in range(min(total, cap), -1, -1):
        for rest in _compositions(total - first, parts - 1, cap):
            yield (first,) + rest

