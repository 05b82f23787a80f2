#!/usr/bin/env python3
"""
Command line front end for weighted voting game enumeration.
Verbs: enumerate, check, minrep, classify, dual, oracle, stats.
"""

import logging
import sys
from pathlib import Path
from typing import List, Optional

import click
from humanfriendly import format_timespan

from classify import ReportKind, classify
from coalition import CoalitionError
from enumerator import (Action, EnumerationConfig, GameClass, SearchPrefix,
                        enumerate_parallel, run_prefix)
from game_file import format_game, parse_game_file, write_games
from minrep import all_min_sum_reps, all_min_sum_reps_preserving_types, min_sum_rep
from oracles import oracle_complete_small, oracle_monotone_small
from settings import JOBS_ENV, SearchConfig, setup_logging
from simple_game import CompleteGame, desirability_classes, dual_game
from weightedness import is_weighted


logger = logging.getLogger("wvg")

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2

VOTERS = click.IntRange(1, 16)
GAME_FILE = click.Path(dir_okay=False, path_type=Path)


def _progress(ctx: click.Context) -> bool:
    return SearchConfig().PROGRESS and not ctx.obj.get("quiet") and sys.stderr.isatty()


def _echo_stats(stats) -> None:
    for key, value in stats.to_dict().items():
        if key == "seconds":
            click.echo(f"time {format_timespan(value)}")
        else:
            click.echo(f"{key} {value}")


@click.group()
@click.option("--verbose", "-v", is_flag=True, help="Debug logging.")
@click.option("--quiet", "-q", is_flag=True, help="Warnings and errors only.")
@click.pass_context
def cli(ctx: click.Context, verbose: bool, quiet: bool) -> None:
    """Enumerate complete simple games and weighted voting games."""
    setup_logging(verbose=verbose, quiet=quiet)
    ctx.ensure_object(dict)
    ctx.obj["quiet"] = quiet


@cli.command("enumerate")
@click.option("--voters", "-n", type=VOTERS, required=True)
@click.option("--class", "target", type=click.Choice([c.value for c in GameClass]), default="weighted")
@click.option("--count-only", is_flag=True, help="Print the count instead of the games.")
@click.option("--out", type=click.Path(dir_okay=False, writable=True, path_type=Path))
@click.option("--jobs", "-j", type=click.IntRange(min=1), envvar=JOBS_ENV, default=1, show_default=True)
@click.option("--subtree", help="Comma separated coalitions of a search tree path.")
@click.option("--split-depth", type=click.IntRange(min=1), default=SearchConfig.SPLIT_DEPTH, show_default=True)
@click.option("--stats", "show_stats", is_flag=True, help="Print node, LP and pivot counters.")
@click.option("--no-warm-start", is_flag=True, help="Solve every node LP from scratch.")
@click.pass_context
def enumerate_cmd(ctx, voters, target, count_only, out, jobs, subtree, split_depth, show_stats, no_warm_start):
    """Enumerate the games for N voters."""
    prefix = None
    if subtree:
        try:
            prefix = SearchPrefix.parse(subtree, voters)
        except CoalitionError as e:
            raise click.BadParameter(str(e), param_hint="--subtree")
    config = EnumerationConfig(voters, GameClass(target), Action.COUNT if count_only else Action.EMIT,
                               prefix=prefix, jobs=jobs, split_depth=split_depth,
                               warm_start=not no_warm_start, progress=_progress(ctx))
    stats, visitor = enumerate_parallel(config)
    if count_only:
        click.echo(stats.nodes)
    elif out is not None:
        with out.open("w") as f:
            write_games(f, visitor.games())
        logger.info("wrote %d games to %s", stats.nodes, out)
    else:
        write_games(click.get_text_stream("stdout"), visitor.games())
    if show_stats:
        _echo_stats(stats)


@cli.command()
@click.option("--game", type=GAME_FILE, required=True)
def check(game):
    """Decide whether a game is weighted."""
    g = parse_game_file(game)
    rep = is_weighted(g)
    click.echo(f"weighted: {'yes' if rep else 'no'}")
    click.echo(f"classes: {desirability_classes(g).render()}")
    if rep:
        quota, weights = rep.to_integer()
        click.echo(f"rational: {rep.render()}")
        click.echo(f"integer: {quota}: {' '.join(str(w) for w in weights)}")


@cli.command()
@click.option("--game", type=GAME_FILE, required=True)
@click.option("--all", "all_reps", is_flag=True, help="List every minimum-sum representation.")
@click.option("--preserve-types", is_flag=True, help="Equal weights for equivalent voters.")
def minrep(game, all_reps, preserve_types):
    """Minimum-sum integer representation of a weighted game."""
    g = parse_game_file(game)
    if is_weighted(g) is None:
        raise click.ClickException(f"{game}: game is not weighted")
    if all_reps:
        result = (all_min_sum_reps_preserving_types if preserve_types else all_min_sum_reps)(g)
        click.echo(f"min_sum {result.min_sum}")
        click.echo(f"reps {len(result.reps)}")
        for rep in result.reps:
            click.echo(rep.render())
    else:
        rep, bounds = min_sum_rep(g, preserve_types)
        click.echo(f"min_sum {rep.total}")
        click.echo(rep.render())
        logger.debug("lower bounds %s (sum %d)", bounds.u, bounds.total)


@cli.command("classify")
@click.option("--voters", "-n", type=VOTERS, required=True)
@click.option("--report", "kind", type=click.Choice([k.value for k in ReportKind]), default="nonunique")
@click.option("--jobs", "-j", type=click.IntRange(min=1), envvar=JOBS_ENV, default=1, show_default=True)
@click.option("--checkpoint", type=click.Path(file_okay=False, path_type=Path))
@click.option("--split-depth", type=click.IntRange(min=1))
@click.option("--format", "fmt", type=click.Choice(["text", "json", "csv"]), default="text")
@click.option("--dump", type=click.Path(dir_okay=False, writable=True, path_type=Path),
              help="Write games without a unique representation here.")
@click.option("--count-complete", is_flag=True, help="Also count the complete games.")
@click.option("--inherit-bounds", is_flag=True, help="Start each game from the bounds of its search node.")
@click.pass_context
def classify_cmd(ctx, voters, kind, jobs, checkpoint, split_depth, fmt, dump, count_complete, inherit_bounds):
    """Classify weighted games by their minimum-sum representations."""
    report, nonunique = classify(voters, ReportKind(kind), jobs, checkpoint, split_depth,
                                 _progress(ctx), count_complete, inherit_bounds)
    click.echo(report.render(fmt), nl=False)
    if dump is not None:
        with dump.open("w") as f:
            write_games(f, (CompleteGame.from_masks(voters, r.masks, validate=False) for r in nonunique),
                        (r.comments() for r in nonunique))
        logger.info("wrote %d games to %s", len(nonunique), dump)


@cli.command()
@click.option("--game", type=GAME_FILE, required=True)
@click.option("--out", type=click.Path(dir_okay=False, writable=True, path_type=Path))
def dual(game, out):
    """Dual game of a game file."""
    text = format_game(dual_game(parse_game_file(game)))
    if out is None:
        click.echo(text, nl=False)
    else:
        out.write_text(text)


@cli.command()
@click.option("--voters", "-n", type=click.IntRange(1, 5), required=True)
@click.option("--kind", type=click.Choice(["antichain", "monotone"]), default="antichain")
def oracle(voters, kind):
    """Brute-force counts for small voter counts."""
    if kind == "antichain":
        click.echo(f"complete {oracle_complete_small(voters)}")
        return
    if voters > 4:
        raise click.BadParameter("the monotone oracle supports at most 4 voters", param_hint="--voters")
    simple, complete, weighted = oracle_monotone_small(voters)
    click.echo(f"simple {simple}")
    click.echo(f"complete {complete}")
    click.echo(f"weighted {weighted}")


@cli.command()
@click.option("--voters", "-n", type=VOTERS, required=True)
@click.option("--class", "target", type=click.Choice([c.value for c in GameClass]), default="weighted")
def stats(voters, target):
    """Node, LP and pivot counters with and without warm starts."""
    for warm in (True, False):
        config = EnumerationConfig(voters, GameClass(target), warm_start=warm)
        result = run_prefix(config, SearchPrefix(()))
        click.echo(f"[{'warm' if warm else 'cold'}]")
        _echo_stats(result)


def run(argv: Optional[List[str]] = None) -> int:
    """Run the command line; returns the exit code."""
    try:
        code = cli.main(args=argv, prog_name="wvg", standalone_mode=False)
    except click.UsageError as e:
        e.show()
        return EXIT_USAGE
    except click.ClickException as e:
        e.show()
        return EXIT_DOMAIN
    except click.Abort:
        click.echo("Aborted!", err=True)
        return EXIT_DOMAIN
    except CoalitionError as e:
        click.echo(f"Error: {e}", err=True)
        return EXIT_USAGE
    except (ValueError, OSError) as e:
        click.echo(f"Error: {e}", err=True)
        return EXIT_DOMAIN
    return code if isinstance(code, int) else EXIT_OK


def main():
    """Main entry point."""
    sys.exit(run())


if __name__ == "__main__":
    main()
