from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Optional

import typer

from foldmatch.config import settings
from foldmatch.exceptions import FoldmatchError, ValidationError
from foldmatch.folded import build_G_ab, orbit_expansion
from foldmatch.geometry import census as geometry_census
from foldmatch.instance import Instance, parse_instance
from foldmatch.logs import configure_logging
from foldmatch.oracle import sweep, verify_theorems
from foldmatch.polynomial import canonical_string, render_vector
from foldmatch.render import render_graph
from foldmatch.snake import (
    SnakeGraph,
    build_snake_graph,
    diagonal_expansion,
    enumerate_matchings,
    height_monomial,
)

cli = typer.Typer(help="foldmatch: cluster expansions of types A, B and C from snake graphs")

MISMATCH_EXIT = 3


@cli.callback()
def main() -> None:
    configure_logging(settings.logging)


def _fail(exc: FoldmatchError) -> typer.Exit:
    payload = {"code": exc.code, "message": str(exc)}
    if isinstance(exc, ValidationError):
        payload["errors"] = exc.errors
    typer.echo(json.dumps(payload, default=str, ensure_ascii=False), err=True)
    return typer.Exit(exc.exit_code)


def _load(path: Path) -> Instance:
    text = sys.stdin.read() if str(path) == "-" else path.read_text(encoding="utf-8")
    return parse_instance(text)


def _graph(instance: Instance) -> SnakeGraph:
    T = instance.to_triangulation()
    if instance.kind == "A":
        return build_snake_graph(instance.to_target(), T)
    return build_G_ab(instance.to_orbit(), T, instance.kind)


@cli.command()
def version() -> None:
    """Print runtime version."""
    typer.echo(f"foldmatch {settings.app.version}")


@cli.command()
def expand(path: Path = typer.Argument(..., help="Instance JSON file, or - for stdin")) -> None:
    """Print the F-polynomial and g-vector of the instance's target."""
    try:
        instance = _load(path)
        T = instance.to_triangulation()
        if instance.kind == "A":
            F, g = diagonal_expansion(instance.to_target(), T)
        else:
            F, g = orbit_expansion(instance.to_orbit(), T, instance.kind)
        typer.echo(f"F = {canonical_string(F)}")
        typer.echo(f"g = {render_vector(g)}")
        if instance.options.dump_matchings:
            _print_matchings(_graph(instance))
    except FoldmatchError as exc:
        raise _fail(exc)


@cli.command()
def verify(
    path: Optional[Path] = typer.Argument(None, help="Instance JSON file; omit to sweep every triangulation"),
    kind: Optional[str] = typer.Option(None, "--kind", help="A, B or C (defaults to the instance's kind or the configured kinds)"),
    max_rank: int = typer.Option(settings.sweep.max_rank, "--max-rank", min=2, help="Largest rank of the sweep"),
    as_json: bool = typer.Option(False, "--json", help="Print the JSON report"),
    corrupt_folding: bool = typer.Option(False, "--corrupt-folding", hidden=True),
) -> None:
    """Check graph, formula and oracle values against each other."""
    try:
        if kind is not None and kind not in ("A", "B", "C"):
            raise ValidationError(f"unknown kind {kind}")
        if path is not None:
            instance = _load(path)
            report = verify_theorems(instance.to_triangulation(), kind or instance.kind, corrupt_folding)
            if as_json:
                typer.echo(report.model_dump_json(indent=2))
            for row in report.rows:
                for diff in row.diffs:
                    typer.echo(f"{row.slot}: {diff}")
            typer.echo(report.summary())
            if not report.ok:
                raise typer.Exit(MISMATCH_EXIT)
            return

        kinds = [kind] if kind else settings.sweep.kinds
        failed = False
        for k in kinds:
            for rank in range(2, max_rank + 1):
                line = sweep(rank, k, corrupt_folding)
                if as_json:
                    typer.echo(line.model_dump_json(indent=2))
                typer.echo(f"type {k} rank {rank}: {line.summary()}")
                failed = failed or not line.ok
        if failed:
            raise typer.Exit(MISMATCH_EXIT)
    except FoldmatchError as exc:
        raise _fail(exc)


@cli.command()
def render(
    path: Path = typer.Argument(..., help="Instance JSON file, or - for stdin"),
    fmt: Optional[str] = typer.Option(None, "--format", help="dot or tikz"),
    matching: Optional[int] = typer.Option(None, "--matching", min=0, help="Overlay this matching (0 is the minimal one)"),
) -> None:
    """Emit the (modified) snake graph of the instance."""
    try:
        instance = _load(path)
        fmt = fmt or instance.options.format
        if fmt not in ("dot", "tikz"):
            raise ValidationError(f"unknown format {fmt}")
        chosen = matching if matching is not None else instance.options.matching
        typer.echo(render_graph(_graph(instance), fmt, chosen), nl=False)
    except FoldmatchError as exc:
        raise _fail(exc)


def _print_matchings(G: SnakeGraph) -> None:
    graph = G.graph
    for index, P in enumerate(enumerate_matchings(G)):
        edges = sorted(
            "-".join(sorted(f"{graph.nodes[v]['pos'][0]:g},{graph.nodes[v]['pos'][1]:g}" for v in e))
            for e in P
        )
        typer.echo(f"{index}: {canonical_string(height_monomial(G, P))}  {' '.join(edges)}")


@cli.command()
def matchings(path: Path = typer.Argument(..., help="Instance JSON file, or - for stdin")) -> None:
    """List every perfect matching with its height monomial, the minimal one first."""
    try:
        _print_matchings(_graph(_load(path)))
    except FoldmatchError as exc:
        raise _fail(exc)


@cli.command()
def census(rank: int = typer.Argument(..., min=2)) -> None:
    """Count theta-invariant triangulations and theta-orbits."""
    counts = geometry_census(rank)
    typer.echo(f"triangulations = {counts['triangulations']}")
    typer.echo(f"orbits = {counts['orbits']}")


if __name__ == "__main__":
    cli()
