"""Command line entry points.

Exit codes: 0 ok / property holds, 1 negative finding (disconnected,
cyclic, 'no' answer, inclusion violated), 2 parse or input error,
3 enumeration cap exceeded.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .choices import seeded_choose, seeded_tie_break
from .documents import ParsedDocument, parse_document
from .errors import InputError, OracleScaleExceeded, PreconditionError
from .gpc import gpc
from .graph import connected_components
from .multiobjective import pareto_edge_relation, theorem2_check
from .relation import is_p_acyclic
from .solver import Instance, oracle_maximal_trees, solve

__all__ = ["main"]


def _load(path: str) -> ParsedDocument:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        click.echo(f"cannot read {path}: {exc}", err=True)
        sys.exit(2)
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        click.echo(f"parse error: {path}:{exc.lineno}:{exc.colno}: {exc.msg}", err=True)
        sys.exit(2)
    try:
        return parse_document(obj)
    except InputError as exc:
        click.echo(f"invalid document {path}: {exc}", err=True)
        sys.exit(2)


def _instance(parsed: ParsedDocument) -> Instance:
    try:
        return parsed.instance()
    except PreconditionError as exc:
        click.echo(f"invalid instance: {exc}", err=True)
        sys.exit(2)


def _tie_break_key(spec: str, ids):
    if spec == "lex":
        return None
    if spec.startswith("seed:"):
        try:
            seed = int(spec.split(":", 1)[1])
        except ValueError:
            click.echo(f"bad --tie-break {spec!r}", err=True)
            sys.exit(2)
        return seeded_tie_break(seed, ids)
    click.echo(f"bad --tie-break {spec!r}: use lex or seed:N", err=True)
    sys.exit(2)


def _choose_strategy(spec: str):
    if spec == "lex":
        return None
    seed = int(spec.split(":", 1)[1]) if spec.startswith("seed:") else None
    if seed is None:
        click.echo(f"bad --tie-break {spec!r}: use lex or seed:N", err=True)
        sys.exit(2)
    return seeded_choose(seed)


def _emit(fmt: str, payload: dict, text_lines: list[str]) -> None:
    if fmt == "json":
        click.echo(json.dumps(payload))
    else:
        for line in text_lines:
            click.echo(line)


def _common(f):
    f = click.option("--input", "input_path", required=True, type=click.Path())(f)
    f = click.option(
        "--format", "fmt", type=click.Choice(["text", "json"]), default="text"
    )(f)
    return f


@click.group()
def main() -> None:
    """Maximal spanning trees under ordinal edge preferences."""


@main.command()
@_common
def check(input_path: str, fmt: str) -> None:
    """Report connectivity and acyclicity of the strict preferences."""
    parsed = _load(input_path)
    connected = connected_components(parsed.graph, parsed.graph.edge_ids).count <= 1
    acyclic = is_p_acyclic(parsed.relation)
    _emit(
        fmt,
        {"connected": connected, "pAcyclic": acyclic},
        [f"connected: {'yes' if connected else 'no'}",
         f"p-acyclic: {'yes' if acyclic else 'no'}"],
    )
    sys.exit(0 if connected and acyclic else 1)


@main.command()
@_common
@click.option("--tie-break", "tie_break", default="lex")
def solve_cmd(input_path: str, fmt: str, tie_break: str) -> None:
    """Output one maximal spanning tree, or 'no'."""
    parsed = _load(input_path)
    inst = _instance(parsed)
    key = _tie_break_key(tie_break, inst.relation.ground)
    tree = solve(inst, key)
    if tree is None:
        _emit(fmt, {"tree": "no"}, ["no"])
        sys.exit(1)
    _emit(fmt, {"tree": sorted(tree)}, [" ".join(sorted(tree))])
    sys.exit(0)


@main.command(name="gpc")
@_common
@click.option("--tie-break", "tie_break", default="lex")
def gpc_cmd(input_path: str, fmt: str, tie_break: str) -> None:
    """Output the max-consistent edge set, or 'no'."""
    parsed = _load(input_path)
    inst = _instance(parsed)
    result = gpc(inst, _choose_strategy(tie_break))
    if result is None:
        _emit(fmt, {"consistent": "no"}, ["no"])
        sys.exit(1)
    _emit(fmt, {"consistent": sorted(result)}, [" ".join(sorted(result))])
    sys.exit(0)


@main.command()
@_common
@click.option("--exact-cap", "cap", default=100_000, type=int)
def enumerate(input_path: str, fmt: str, cap: int) -> None:
    """Output every maximal spanning tree via the exhaustive oracle."""
    parsed = _load(input_path)
    inst = _instance(parsed)
    try:
        trees = oracle_maximal_trees(inst, extension_cap=cap, tree_cap=cap)
    except OracleScaleExceeded as exc:
        click.echo(f"cap exceeded: {exc}", err=True)
        sys.exit(3)
    _emit(
        fmt,
        {"trees": [sorted(t) for t in trees]},
        [" ".join(sorted(t)) for t in trees] or ["no"],
    )
    sys.exit(0 if trees else 1)


@main.command()
@_common
def pareto(input_path: str, fmt: str) -> None:
    """Derive the dominance relation from criteria, then run the filter."""
    parsed = _load(input_path)
    if parsed.criteria is None:
        click.echo("document has no criteria block", err=True)
        sys.exit(2)
    rel = pareto_edge_relation(parsed.criteria)
    inst = Instance(parsed.graph, rel)
    result = gpc(inst)
    payload = {
        "strict": [list(p) for p in sorted(rel.strict)],
        "indifferent": [list(p) for p in sorted(rel.indiff)],
        "consistent": "no" if result is None else sorted(result),
    }
    lines = (
        [f"{a} > {b}" for a, b in sorted(rel.strict)]
        + [f"{a} = {b}" for a, b in sorted(rel.indiff)]
        + ["no" if result is None else " ".join(sorted(result))]
    )
    _emit(fmt, payload, lines)
    sys.exit(1 if result is None else 0)


@main.command()
@_common
@click.option("--exact-cap", "cap", default=100_000, type=int)
def compare(input_path: str, fmt: str, cap: int) -> None:
    """Check that sum-then-Pareto maximal trees are maximal edgewise too."""
    parsed = _load(input_path)
    if parsed.criteria is None:
        click.echo("document has no criteria block", err=True)
        sys.exit(2)
    try:
        report = theorem2_check(
            parsed.graph, parsed.criteria, extension_cap=cap, tree_cap=cap
        )
    except OracleScaleExceeded as exc:
        click.echo(f"cap exceeded: {exc}", err=True)
        sys.exit(3)
    payload = {
        "holds": report.holds,
        "witnesses": [sorted(t) for t in report.strict_witnesses],
        "sumPareto": [sorted(t) for t in report.sum_pareto],
        "edgePareto": [sorted(t) for t in report.edge_pareto],
    }
    lines = [
        f"holds: {'yes' if report.holds else 'no'}",
        "witnesses: " + (", ".join(" ".join(sorted(t)) for t in report.strict_witnesses) or "-"),
    ]
    _emit(fmt, payload, lines)
    sys.exit(0 if report.holds else 1)


@main.command()
@click.option("--port", default=8000, type=int)
@click.option("--host", default="127.0.0.1")
@click.option(
    "--store-dir",
    default="prefspan_store",
    type=click.Path(),
    help="Directory for persisted instances and sessions.",
)
def serve(port: int, host: str, store_dir: str) -> None:
    """Run the HTTP service."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(store_dir), host=host, port=port, log_level="warning")


main.add_command(solve_cmd, name="solve")

if __name__ == "__main__":
    main()
