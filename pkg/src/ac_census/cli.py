"""
AC census command-line interface.

Subcommands:

    census     run stages 1-5 (and the certificate sweep with --stage 6)
    order      group order by coset enumeration
    primitive  primitivity of a rank-2 word
    abel       invariant factors of the abelianization
    search     genetic search for a certificate
    verify     replay a certificate file
    report     regenerate report.txt / report.json of a census directory
    audit      stages 1-3 counts under every relator convention
    config     write, show or validate settings files

Exit codes: 0 success, 1 domain-negative result (exceeded, not primitive,
nontrivial abelianization, budget exhausted, failed verification),
2 usage or input error.
"""

import functools
import json
import logging
from pathlib import Path
from typing import List, Optional, Sequence

import click
from pydantic import ValidationError

from . import __version__
from .abelianization import has_trivial_abelianization, invariant_factors
from .census import PUBLISHED_COUNTS, PUBLISHED_LENGTH, convention_audit, run_pipeline, sweep_stage6
from .config import AppSettings
from .config_loader import ConfigLoader, create_default_env_file, load_config, validate_config_file
from .error_handling import ACCensusError, describe_error, handle_errors
from .gasearch import SearchMode, evolve_islands
from .library import hard_presentation_name, library_certificate
from .presentation import (
    format_certificate,
    parse_presentation,
    read_certificate,
    verify_certificate,
    write_certificate,
)
from .reporting import format_report, write_report
from .toddcoxeter import DEFAULT_MAX_COSETS, enumerate_cosets
from .whitehead import is_primitive, minimize_cyclic_length
from .word import format_word, parse_word

logger = logging.getLogger(__name__)

USAGE_ERROR = 2
NEGATIVE_RESULT = 1


class CLIState:
    """Global CLI state management."""

    def __init__(self):
        self.verbose = False
        self.quiet = False
        self.settings: Optional[AppSettings] = None


cli_state = CLIState()


def echo_info(message: str):
    """Print info message if not in quiet mode."""
    if not cli_state.quiet:
        click.echo(message)


def echo_verbose(message: str):
    """Print verbose message if verbose mode is enabled."""
    if cli_state.verbose and not cli_state.quiet:
        click.echo(f"[VERBOSE] {message}", err=True)


def echo_error(message: str):
    """Print error message."""
    click.echo(f"Error: {message}", err=True)


def _fail(error: Exception) -> None:
    echo_error(describe_error(error))
    raise click.exceptions.Exit(USAGE_ERROR)


def cli_errors(func):
    """Domain and validation errors become a message on stderr and exit 2."""
    guarded = handle_errors(_fail)(func)

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return guarded(*args, **kwargs)
        except ValidationError as e:
            _fail(e)

    return wrapper


def _settings() -> AppSettings:
    if cli_state.settings is None:
        cli_state.settings = load_config()
    return cli_state.settings


def _configure_logging(level: str) -> None:
    if cli_state.verbose:
        level = "DEBUG"
    elif cli_state.quiet:
        level = "ERROR"
    logging.basicConfig(level=level, format="%(asctime)s - %(levelname)s - %(name)s - %(message)s")
    logging.getLogger().setLevel(level)


@click.group()
@click.version_option(version=__version__, prog_name="ac-census")
@click.option("--verbose", "-v", is_flag=True, help="Enable verbose output")
@click.option("--quiet", "-q", is_flag=True, help="Suppress output except errors")
@click.option("--env-file", "-e", type=click.Path(exists=True, dir_okay=False), help="Settings file (.env format)")
@cli_errors
def cli(verbose, quiet, env_file):
    """AC census - Andrews-Curtis census of balanced two-generator presentations."""
    cli_state.verbose = verbose
    cli_state.quiet = quiet
    cli_state.settings = load_config(env_file) if env_file else None
    settings = _settings()
    _configure_logging(settings.logging.log_level)
    if settings.logging.log_file:
        settings.logging.log_file.parent.mkdir(parents=True, exist_ok=True)
        logging.getLogger().addHandler(logging.FileHandler(settings.logging.log_file))


@cli.command()
@click.option("--max-total", type=int, default=None, help="Largest total relator length")
@click.option("--out", "out_dir", type=click.Path(file_okay=False, path_type=Path), default=None,
              help="Census output directory")
@click.option("--shards", type=int, default=None, help="Parallel shards for stages 1-3")
@click.option("--stage", type=click.IntRange(5, 6), default=5, show_default=True,
              help="Last stage: 5 stops after coset enumeration, 6 adds the certificate sweep")
@click.option("--coset-budget", type=int, default=None, help="Live-coset budget of stage 5")
@click.option("--free-relators", is_flag=True, help="Generate freely reduced relators, not only cyclically reduced")
@click.option("--audit", is_flag=True, help="Also count stages 1-3 under every relator convention")
@click.option("--islands", type=int, default=None, help="GA islands for stage 6")
@click.option("--budget", type=float, default=None, help="GA seconds per presentation for stage 6")
@click.option("--extended-budget", type=float, default=None,
              help="GA seconds for AK(2) and the power variants in stage 6")
@click.option("--no-library", is_flag=True, help="Search instead of using the bundled certificates in stage 6")
@cli_errors
def census(max_total, out_dir, shards, stage, coset_budget, free_relators, audit, islands, budget,
           extended_budget, no_library):
    """Run the census pipeline."""
    settings = _settings()
    cfg = settings.to_stage_config(max_total_length=max_total, output_path=out_dir,
                                   shard_count=shards, coset_budget=coset_budget,
                                   relators_cyclically_reduced=False if free_relators else None)
    echo_verbose(f"Census configuration: {cfg.model_dump(mode='json')}")
    summary = run_pipeline(cfg, progress=not cli_state.quiet, audit=audit)
    for name, count in summary.counts.items():
        echo_info(f"{name}: {count}")
    if stage == 6:
        ga = settings.to_ga_config(**({"wall_clock_budget": budget} if budget else {}))
        tally = sweep_stage6(
            cfg.output_path, ga, islands or settings.search.islands, progress=not cli_state.quiet,
            extended_budget=extended_budget or settings.search.extended_budget_seconds,
            use_library=settings.search.use_library and not no_library,
        )
        for status, count in tally.items():
            echo_info(f"{status}: {count}")
    echo_info(f"Census written to {summary.directory}")


@cli.command()
@click.argument("line")
@click.option("--max-cosets", type=click.IntRange(min=1), default=DEFAULT_MAX_COSETS, show_default=True,
              help="Live-coset budget")
@click.pass_context
@cli_errors
def order(ctx, line, max_cosets):
    """Order of the group presented by LINE, or exceeded(N)."""
    result = enumerate_cosets(parse_presentation(line), max_cosets)
    click.echo(str(result))
    echo_verbose(f"{result.cosets_defined} cosets defined in {result.wall_time:.3f}s")
    ctx.exit(0 if result.is_finite else NEGATIVE_RESULT)


@cli.command()
@click.argument("word")
@click.pass_context
@cli_errors
def primitive(ctx, word):
    """Whether WORD is part of a basis of the free group on x, y."""
    w = parse_word(word, 2)
    core, applied = minimize_cyclic_length(w)
    verdict = is_primitive(w)
    click.echo("primitive" if verdict else "not-primitive")
    click.echo(f"minimal: {format_word(core)}")
    for aut in applied:
        click.echo(f"  {aut}")
    ctx.exit(0 if verdict else NEGATIVE_RESULT)


@cli.command()
@click.argument("line")
@click.pass_context
@cli_errors
def abel(ctx, line):
    """Invariant factors of the abelianization of LINE."""
    p = parse_presentation(line)
    factors = invariant_factors(p)
    click.echo("(" + ", ".join(str(f) for f in factors) + ")")
    ctx.exit(0 if has_trivial_abelianization(p) else NEGATIVE_RESULT)


@cli.command()
@click.argument("line")
@click.option("--mode", type=click.Choice([m.value for m in SearchMode]), default=SearchMode.TRIVIALIZE.value,
              show_default=True)
@click.option("--target", default=None, help="Target presentation line (equiv mode)")
@click.option("--seed", type=int, envvar="AC_SEED", default=None, help="RNG seed (env AC_SEED)")
@click.option("--budget", type=float, default=None,
              help="Wall-clock seconds (default: the extended budget for AK(2) and the power variants)")
@click.option("--max-generations", type=int, default=None, help="Generation cap")
@click.option("--islands", type=int, default=None, help="Independent populations")
@click.option("--library", "use_library", is_flag=True,
              help="Try the bundled certificates before searching (trivialize mode)")
@click.option("--cert", "cert_path", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="Write the certificate here instead of stdout")
@click.pass_context
@cli_errors
def search(ctx, line, mode, target, seed, budget, max_generations, islands, use_library, cert_path):
    """Genetic search for an AC-move certificate from LINE."""
    settings = _settings()
    if mode == SearchMode.EQUIVALENCE.value and target is None:
        raise click.UsageError("--target is required with --mode equiv")
    p = parse_presentation(line)
    goal = parse_presentation(target, p.rank) if target else None
    overrides = {}
    if seed is not None:
        overrides["rng_seed"] = seed
    if budget is not None:
        overrides["wall_clock_budget"] = budget
    else:
        hard = hard_presentation_name(p)
        if hard is not None:
            overrides["wall_clock_budget"] = settings.search.extended_budget_seconds
            echo_verbose(f"{line} matches {hard}: budget {settings.search.extended_budget_seconds:g}s")
    if max_generations is not None:
        overrides["max_generations"] = max_generations
    ga = settings.to_ga_config(**overrides)

    cert = None
    if use_library and mode == SearchMode.TRIVIALIZE.value:
        cert = library_certificate(p)
        if cert is not None:
            echo_info(f"success: {len(cert.moves)} moves from the bundled certificates")
    if cert is None:
        outcome = evolve_islands(p, SearchMode(mode), ga, goal, islands or settings.search.islands)
        if not outcome.succeeded:
            click.echo(f"budget-exhausted after {outcome.generations_used} generations "
                       f"(best fitness {min(outcome.best_fitness_trace)})")
            ctx.exit(NEGATIVE_RESULT)
        cert = outcome.certificate
        echo_info(f"success: {len(cert.moves)} moves, generation {outcome.generations_used}, island {outcome.island}")
    if cert_path is not None:
        write_certificate(cert_path, cert)
        echo_info(f"certificate written to {cert_path}")
    else:
        click.echo(format_certificate(cert), nl=False)


@cli.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.pass_context
@cli_errors
def verify(ctx, path):
    """Replay the certificate at PATH."""
    cert = read_certificate(path)
    ok = verify_certificate(cert)
    click.echo("verified" if ok else "failed")
    echo_verbose(f"{len(cert.moves)} moves replayed")
    ctx.exit(0 if ok else NEGATIVE_RESULT)


@cli.command()
@click.argument("census_dir", type=click.Path(exists=True, file_okay=False, path_type=Path))
@cli_errors
def report(census_dir):
    """Regenerate and print the report of CENSUS_DIR."""
    click.echo(format_report(write_report(census_dir)), nl=False)


@cli.command()
@click.option("--max-total", type=int, default=None, help="Largest total relator length")
@cli_errors
def audit(max_total):
    """Count stages 1-3 under every relator convention."""
    settings = _settings()
    max_total = max_total or settings.census.max_total_length
    results = convention_audit(max_total, settings.census.min_relator_length)
    for entry in results:
        counts = "  ".join(f"{name} {count}" for name, count in entry.counts.items())
        click.echo(f"{entry.label:<32} {counts}")
    if max_total == PUBLISHED_LENGTH:
        published = PUBLISHED_COUNTS["L3"]
        matching = [entry.label for entry in results if entry.counts["L3"] == published]
        click.echo(f"published L3 {published}: " + ("; ".join(matching) if matching else "no convention matches"))


@cli.command()
@click.option("--init", "init_config", is_flag=True, help="Write a settings file with every default")
@click.option("--output", type=click.Path(dir_okay=False), default=".env", show_default=True,
              help="File written by --init")
@click.option("--show", is_flag=True, help="Print the effective settings and where they came from")
@click.option("--validate", "validate_file", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Validate a settings file")
@click.pass_context
@cli_errors
def config(ctx, init_config, output, show, validate_file):
    """Write, show or validate settings files."""
    if not (init_config or show or validate_file):
        raise click.UsageError("one of --init, --show or --validate is required")
    if init_config:
        try:
            create_default_env_file(output)
        except FileExistsError as e:
            raise click.UsageError(str(e)) from e
        echo_info(f"Settings written to {output}")
    if show:
        loader = ConfigLoader()
        settings, warnings = loader.load_with_validation()
        click.echo(json.dumps({"settings": settings.model_dump(mode="json"), "status": loader.get_config_status()},
                              indent=2))
        for warning in warnings:
            echo_info(f"warning: {warning}")
    if validate_file:
        result = validate_config_file(validate_file)
        if not result["valid"]:
            click.echo(f"invalid: {result['error']}")
            ctx.exit(NEGATIVE_RESULT)
        click.echo(f"valid: {validate_file}")
        for warning in result["warnings"]:
            echo_info(f"warning: {warning}")


def run_command(argv: Sequence[str]) -> int:
    """Run one CLI invocation and return its exit code."""
    args: List[str] = list(argv)
    try:
        rv = cli.main(args=args, prog_name="ac-census", standalone_mode=False)
    except click.UsageError as e:
        e.show()
        return USAGE_ERROR
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.exceptions.Abort:
        return 1
    return rv if isinstance(rv, int) else 0


if __name__ == "__main__":
    cli()
