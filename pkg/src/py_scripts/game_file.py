#!/usr/bin/env python3
"""
Game file module.
Reads and writes the ".csg" text format: a line "n=<voters>", then one
minimal winning coalition per line in decreasing lexicographic order.
Lines starting with "#" are comments; blank lines separate games.
"""

import logging
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, TextIO, Tuple, Union

from coalition import CoalitionError, ShiftOrder, compare_masks, parse_mask
from simple_game import CompleteGame, InvalidGameError, desirability_classes


logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


class GameFileError(ValueError):
    """Problem in a game file, reported as path:line: message."""

    def __init__(self, message: str, source: str = "<string>", line: Optional[int] = None):
        self.source = source
        self.line = line
        location = source if line is None else f"{source}:{line}"
        super().__init__(f"{location}: {message}")


class MalformedGameError(GameFileError):
    """Bad header, bad coalition string or missing coalitions."""


class AntichainViolation(GameFileError):
    """Two listed coalitions are comparable in the shift order."""


class OrderingViolation(GameFileError):
    """Coalitions out of order, or voters not sorted by desirability."""


def _parse_header(text: str, source: str, line: int) -> int:
    key, _, value = text.partition("=")
    if key.strip() != "n" or not value.strip().isdigit():
        raise MalformedGameError(f"expected header 'n=<voters>', got {text!r}", source, line)
    return int(value)


def _parse_record(lines: Sequence[Tuple[int, str]], source: str, check_desirability: bool) -> CompleteGame:
    header_line, header = lines[0]
    n = _parse_header(header, source, header_line)
    masks: List[int] = []
    numbers: List[int] = []
    for number, text in lines[1:]:
        try:
            mask = parse_mask(text, n)
        except CoalitionError as e:
            raise MalformedGameError(str(e), source, number)
        if mask == 0:
            raise MalformedGameError("the empty coalition cannot be winning", source, number)
        if masks and mask >= masks[-1]:
            raise OrderingViolation(f"{text} is not lexicographically below {lines[len(masks)][1]}",
                                    source, number)
        masks.append(mask)
        numbers.append(number)
    if not masks:
        raise MalformedGameError("game has no minimal winning coalitions", source, header_line)
    for i, u in enumerate(masks):
        for j in range(i + 1, len(masks)):
            if compare_masks(u, masks[j], n) is not ShiftOrder.INCOMPARABLE:
                raise AntichainViolation(f"coalition on line {numbers[j]} lies below the one "
                                         f"on line {numbers[i]}", source, numbers[j])
    try:
        game = CompleteGame.from_masks(n, masks, validate=False)
        if check_desirability:
            desirability_classes(game)
    except CoalitionError as e:
        raise MalformedGameError(str(e), source, header_line)
    except InvalidGameError as e:
        raise OrderingViolation(str(e), source, header_line)
    return game


def _records(text: str) -> List[List[Tuple[int, str]]]:
    records: List[List[Tuple[int, str]]] = []
    current: List[Tuple[int, str]] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith("#"):
            continue
        if not line:
            if current:
                records.append(current)
                current = []
            continue
        current.append((number, line))
    if current:
        records.append(current)
    return records


def parse_games(text: str, source: str = "<string>", check_desirability: bool = True) -> List[CompleteGame]:
    """Every game record in a text."""
    return [_parse_record(record, source, check_desirability) for record in _records(text)]


def parse_game_text(text: str, source: str = "<string>", check_desirability: bool = True) -> CompleteGame:
    """Exactly one game record."""
    games = parse_games(text, source, check_desirability)
    if len(games) != 1:
        raise MalformedGameError(f"expected one game, found {len(games)}", source)
    return games[0]


def parse_game_file(path: PathLike, check_desirability: bool = True) -> CompleteGame:
    """Read one game; raises OSError on I/O problems and GameFileError subclasses otherwise."""
    path = Path(path)
    text = path.read_text()
    logger.debug("read %d bytes from %s", len(text), path)
    return parse_game_text(text, str(path), check_desirability)


def read_game_file(path: PathLike, check_desirability: bool = True) -> List[CompleteGame]:
    path = Path(path)
    return parse_games(path.read_text(), str(path), check_desirability)


def format_game(g: CompleteGame, comments: Iterable[str] = ()) -> str:
    lines = [f"n={g.n}"] + g.render() + [f"# {c}" for c in comments]
    return "\n".join(lines) + "\n"


def write_games(stream: TextIO, games: Iterable[CompleteGame],
                comments: Optional[Iterable[Sequence[str]]] = None) -> int:
    """Write records separated by blank lines; returns the number written."""
    count = 0
    notes = iter(comments) if comments is not None else None
    for g in games:
        if count:
            stream.write("\n")
        stream.write(format_game(g, next(notes) if notes is not None else ()))
        count += 1
    return count
