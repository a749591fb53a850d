"""Command-line client.

Batch commands run the offline pipeline; query commands are thin clients of
the engine (in-process by default, or against a running HTTP service when
--server is given). Every flag can also come from a CHRONO_-prefixed
environment variable.
"""

from __future__ import annotations

import json
import sys

import click

from .config import load_config
from .engine import EntityNotFound, TimelineEngine
from .pipeline import PipelineError, render_coverage_csv, run_pipeline
from .selector import VARIANT_NAMES

CONTEXT_SETTINGS = {"auto_envvar_prefix": "CHRONO"}


@click.group(context_settings=CONTEXT_SETTINGS)
def main() -> None:
    """Entity timeline engine."""


_config_option = click.option(
    "--config", "config_path", required=True, type=click.Path(), help="Pipeline config JSON."
)


def _load_engine(config_path: str) -> TimelineEngine:
    config = load_config(config_path)
    try:
        return TimelineEngine.load(config)
    except FileNotFoundError as exc:
        raise click.ClickException(str(exc))


@main.command()
@_config_option
def pipeline(config_path: str) -> None:
    """Build the candidate store and reports from the raw inputs."""
    config = load_config(config_path)
    try:
        result = run_pipeline(config)
    except PipelineError as exc:
        raise click.ClickException(str(exc))
    click.echo(
        f"pipeline complete: {result.entities} entities, {result.events} events, "
        f"{result.dropped_paths} paths dropped, {result.load_errors} load errors"
    )


@main.command()
@_config_option
@click.option("--entity", required=True, help="Subject entity id.")
@click.option("--start", default=None, help="Span start (YYYY-MM-DD).")
@click.option("--end", default=None, help="Span end (YYYY-MM-DD).")
@click.option("--width", default=None, type=int, help="Screen width in pixels.")
@click.option("--height", default=None, type=int, help="Screen height in pixels.")
@click.option(
    "--variant",
    default=None,
    type=click.Choice(VARIANT_NAMES),
    help="Model variant (default from config).",
)
@click.option("--server", default=None, help="Query a running service instead.")
def timeline(
    config_path: str,
    entity: str,
    start: str | None,
    end: str | None,
    width: int | None,
    height: int | None,
    variant: str | None,
    server: str | None,
) -> None:
    """Print the selected timeline as JSON."""
    if server is not None:
        _timeline_via_http(server, entity, start, end, width, height, variant)
        return
    engine = _load_engine(config_path)
    try:
        result = engine.timeline(
            entity, start=start, end=end, width=width, height=height, variant=variant
        )
    except EntityNotFound:
        raise click.ClickException(f"entity not found: {entity}")
    except ValueError as exc:
        raise click.ClickException(str(exc))
    click.echo(json.dumps(result.to_json_dict(), indent=2))


def _timeline_via_http(
    server: str,
    entity: str,
    start: str | None,
    end: str | None,
    width: int | None,
    height: int | None,
    variant: str | None,
) -> None:
    import httpx

    params = {"entity": entity}
    for key, value in (
        ("start", start),
        ("end", end),
        ("width", width),
        ("height", height),
        ("variant", variant),
    ):
        if value is not None:
            params[key] = value
    response = httpx.get(server.rstrip("/") + "/api/timeline", params=params)
    if response.status_code != 200:
        raise click.ClickException(f"server returned {response.status_code}: {response.text}")
    click.echo(json.dumps(response.json(), indent=2))


@main.command()
@_config_option
@click.option("--entity", "entities", required=True, multiple=True, help="Entity id (repeatable).")
@click.option(
    "--variant",
    "variants",
    required=True,
    multiple=True,
    type=click.Choice(VARIANT_NAMES),
    help="Give exactly twice: the variant pair to compare.",
)
def ablate(config_path: str, entities: tuple[str, ...], variants: tuple[str, ...]) -> None:
    """Side-by-side timelines plus diff statistics for a variant pair."""
    if len(variants) != 2:
        raise click.ClickException("provide --variant exactly twice")
    engine = _load_engine(config_path)
    try:
        report = engine.ablate(list(entities), variants[0], variants[1])
    except EntityNotFound as exc:
        raise click.ClickException(f"entity not found: {exc.args[0]}")
    click.echo(json.dumps(report, indent=2))


@main.command()
@_config_option
def coverage(config_path: str) -> None:
    """Print the coverage curve (entities with at least X events) as CSV."""
    engine = _load_engine(config_path)
    ordered = [engine.candidates[e] for e in sorted(engine.candidates)]
    click.echo(render_coverage_csv(ordered), nl=False)


@main.command()
@_config_option
@click.option("--bind", default="127.0.0.1:8000", help="host:port to listen on.")
@click.option("--static-dir", default=None, help="Optional UI bundle to serve at /.")
def serve(config_path: str, bind: str, static_dir: str | None) -> None:
    """Run the HTTP service."""
    from .api import serve as run_server

    engine = _load_engine(config_path)
    run_server(engine, bind, static_dir)


if __name__ == "__main__":
    main(sys.argv[1:])
