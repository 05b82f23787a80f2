#!/usr/bin/env python3
"""
Coalition module for complete simple games.
Handles coalition bit vectors, the shift order and cached lattice tables.

Voter 1 is the most significant bit, so "110100100" is the integer 0b110100100
and the lexicographic order on coalitions is the integer order.
"""

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

from settings import TableConfig


MAX_VOTERS = TableConfig.MAX_VOTERS


class CoalitionError(ValueError):
    """Malformed coalition text, bad voter count or mismatched coalitions."""


class ShiftOrder(Enum):
    """Result of comparing two coalitions under the shift order."""
    LESS_EQ = "LessEq"
    GREATER_EQ = "GreaterEq"
    EQUAL = "Equal"
    INCOMPARABLE = "Incomparable"


def check_voters(n: int) -> None:
    """Reject voter counts outside 1..MAX_VOTERS."""
    if not isinstance(n, int) or not 1 <= n <= MAX_VOTERS:
        raise CoalitionError(f"voter count must be in 1..{MAX_VOTERS}, got {n!r}")


def voter_bit(n: int, voter: int) -> int:
    """Bit of a 1-based voter index."""
    return 1 << (n - voter)


def render_mask(mask: int, n: int) -> str:
    return format(mask, f"0{n}b")


def parse_mask(text: str, n: Optional[int] = None) -> int:
    """Parse a 0/1 string into a coalition mask."""
    text = text.strip()
    if not text or any(ch not in "01" for ch in text):
        raise CoalitionError(f"coalition must be a 0/1 string, got {text!r}")
    if n is not None and len(text) != n:
        raise CoalitionError(f"coalition {text!r} has length {len(text)}, expected {n}")
    check_voters(len(text))
    return int(text, 2)


def compare_masks(u: int, v: int, n: int) -> ShiftOrder:
    """Compare two masks by their prefix sums, voter 1 first."""
    le = ge = True
    su = sv = 0
    for k in range(n - 1, -1, -1):
        su += (u >> k) & 1
        sv += (v >> k) & 1
        if su > sv:
            le = False
        elif su < sv:
            ge = False
        if not le and not ge:
            return ShiftOrder.INCOMPARABLE
    if le and ge:
        return ShiftOrder.EQUAL
    return ShiftOrder.LESS_EQ if le else ShiftOrder.GREATER_EQ


def shift_leq(u: int, v: int, n: int) -> bool:
    return compare_masks(u, v, n) in (ShiftOrder.LESS_EQ, ShiftOrder.EQUAL)


@dataclass(frozen=True, order=True)
class Coalition:
    """Fixed-width coalition over n voters."""
    mask: int
    n: int

    def __post_init__(self):
        check_voters(self.n)
        if self.mask < 0 or self.mask >> self.n:
            raise CoalitionError(f"mask {self.mask} does not fit {self.n} voters")

    @classmethod
    def parse(cls, text: str, n: Optional[int] = None) -> "Coalition":
        """Create coalition from its 0/1 string."""
        text = text.strip()
        return cls(parse_mask(text, n), len(text))

    @classmethod
    def from_voters(cls, n: int, voters: Iterable[int]) -> "Coalition":
        """Create coalition from 1-based voter indices."""
        check_voters(n)
        mask = 0
        for voter in voters:
            if not 1 <= voter <= n:
                raise CoalitionError(f"voter {voter} out of range 1..{n}")
            mask |= voter_bit(n, voter)
        return cls(mask, n)

    def render(self) -> str:
        return render_mask(self.mask, self.n)

    def members(self) -> List[int]:
        """1-based voters in the coalition."""
        return [i for i in range(1, self.n + 1) if self.mask & voter_bit(self.n, i)]

    def size(self) -> int:
        return self.mask.bit_count()

    def prefix_sums(self) -> Tuple[int, ...]:
        return tuple((self.mask >> (self.n - k)).bit_count() for k in range(1, self.n + 1))

    def complement(self) -> "Coalition":
        return Coalition(self.mask ^ ((1 << self.n) - 1), self.n)

    def __str__(self) -> str:
        return self.render()


def cmp_shift(u: Coalition, v: Coalition) -> ShiftOrder:
    """Compare two coalitions under the shift order."""
    if u.n != v.n:
        raise CoalitionError(f"cannot compare coalitions over {u.n} and {v.n} voters")
    return compare_masks(u.mask, v.mask, u.n)


def iter_bits(bitset: int) -> Iterator[int]:
    """Yield the set positions of a bitset in increasing order."""
    while bitset:
        low = bitset & -bitset
        yield low.bit_length() - 1
        bitset ^= low


def iter_bits_desc(bitset: int) -> Iterator[int]:
    """Yield the set positions of a bitset in decreasing order."""
    while bitset:
        top = bitset.bit_length() - 1
        yield top
        bitset ^= 1 << top


class ShiftLattice:
    """Cover relation and closures of the shift order on all 2^n coalitions.

    A coalition set is held as a bitset whose bit c stands for the coalition
    with mask c. Covers are "add voter n" and "move a member to the next more
    desirable free voter". Integer order is a linear extension of the shift
    order, which the scans below rely on.
    """

    def __init__(self, n: int, config: Optional[TableConfig] = None):
        check_voters(n)
        self.config = config or TableConfig()
        self.n = n
        self.size = 1 << n
        self.top = self.size - 1
        self.full = (1 << self.size) - 1
        self._up: Optional[List[int]] = None
        self._down: Optional[List[int]] = None
        if n <= self.config.TABLE_MAX_VOTERS:
            self._build_tables()

    def successors(self, c: int) -> List[int]:
        """Immediate shift-order successors."""
        out = []
        if not c & 1:
            out.append(c | 1)
        for b in range(self.n - 1):
            if (c >> b) & 1 and not (c >> (b + 1)) & 1:
                out.append(c ^ (3 << b))
        return out

    def predecessors(self, c: int) -> List[int]:
        """Immediate shift-order predecessors."""
        out = []
        if c & 1:
            out.append(c ^ 1)
        for b in range(self.n - 1):
            if (c >> (b + 1)) & 1 and not (c >> b) & 1:
                out.append(c ^ (3 << b))
        return out

    def _build_tables(self) -> None:
        up = [0] * self.size
        for c in range(self.top, -1, -1):
            acc = 1 << c
            for s in self.successors(c):
                acc |= up[s]
            up[c] = acc
        down = [0] * self.size
        for c in range(self.size):
            acc = 1 << c
            for p in self.predecessors(c):
                acc |= down[p]
            down[c] = acc
        self._up = up
        self._down = down

    @property
    def has_tables(self) -> bool:
        return self._up is not None

    def up_set(self, c: int) -> int:
        """Bitset of all coalitions v with c ⪯ v."""
        if self._up is not None:
            return self._up[c]
        return self.up_closure((c,))

    def down_set(self, c: int) -> int:
        """Bitset of all coalitions v with v ⪯ c."""
        if self._down is not None:
            return self._down[c]
        return self.down_closure((c,))

    def up_closure(self, coalitions: Iterable[int]) -> int:
        if self._up is not None:
            acc = 0
            for c in coalitions:
                acc |= self._up[c]
            return acc
        flags = bytearray(self.size)
        for c in coalitions:
            flags[c] = 1
        for c in range(self.size):
            if not flags[c]:
                for p in self.predecessors(c):
                    if flags[p]:
                        flags[c] = 1
                        break
        return _flags_to_bitset(flags)

    def down_closure(self, coalitions: Iterable[int]) -> int:
        if self._down is not None:
            acc = 0
            for c in coalitions:
                acc |= self._down[c]
            return acc
        flags = bytearray(self.size)
        for c in coalitions:
            flags[c] = 1
        for c in range(self.top, -1, -1):
            if not flags[c]:
                for s in self.successors(c):
                    if flags[s]:
                        flags[c] = 1
                        break
        return _flags_to_bitset(flags)

    def strictly_below(self, coalitions: Iterable[int]) -> int:
        """Bitset of coalitions strictly below some given coalition."""
        preds: List[int] = []
        for c in coalitions:
            preds.extend(self.predecessors(c))
        return self.down_closure(preds)

    def incomparable(self, c: int) -> int:
        """Bitset of coalitions incomparable to c."""
        return self.full & ~(self.up_set(c) | self.down_set(c))

    def maximal(self, down_closed: int) -> List[int]:
        """Maximal elements of a down-closed coalition set, decreasing."""
        flags = self.to_flags(down_closed)
        return [c for c in range(self.top, -1, -1)
                if flags[c] == "1" and all(flags[s] == "0" for s in self.successors(c))]

    def minimal(self, up_closed: int) -> List[int]:
        """Minimal elements of an up-closed coalition set, decreasing."""
        flags = self.to_flags(up_closed)
        return [c for c in range(self.top, -1, -1)
                if flags[c] == "1" and all(flags[p] == "0" for p in self.predecessors(c))]

    def is_up_closed(self, bitset: int) -> bool:
        flags = self.to_flags(bitset)
        return all(flags[s] == "1"
                   for c in range(self.size) if flags[c] == "1"
                   for s in self.successors(c))

    def to_flags(self, bitset: int) -> str:
        """Render a bitset as a string indexed by coalition mask."""
        return format(bitset, f"0{self.size}b")[::-1]


def _flags_to_bitset(flags: Sequence[int]) -> int:
    return int(bytes(flags)[::-1].translate(_FLAG_DIGITS), 2) if flags else 0


_FLAG_DIGITS = bytes.maketrans(b"\x00\x01", b"01")


@lru_cache(maxsize=None)
def shift_lattice(n: int) -> ShiftLattice:
    """Shared lattice for n voters."""
    return ShiftLattice(n)
