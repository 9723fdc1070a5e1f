"""Command-line driver for the knowledge-graph engine.

Exit codes: 0 success, 1 domain failure (validation errors, bad query,
bad chain start), 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import json as jsonlib
import sys
from typing import NoReturn, Optional, Sequence

import click

from .dataset import (
    LoadedDataset,
    LoadError,
    LoadErrorKind,
    load_dataset,
    load_schema,
    parse_files,
)
from .query import (
    BindingTable,
    EvaluationError,
    QueryParseError,
    evaluate,
    keyword_search,
    parse_query,
)
from .rdf import Iri, TermError, expand_curie, shrink_iri
from .schema import Schema, SchemaError
from .traversal import NotAChainClass, mso_chains
from .turtle import serialize_turtle
from .validation import validate

EXIT_DOMAIN = 1
EXIT_IO = 3

_EXIT_OF_KIND = {
    LoadErrorKind.PARSE_FAILED: EXIT_DOMAIN,
    LoadErrorKind.VALIDATION_FAILED: EXIT_DOMAIN,
    LoadErrorKind.IO_FAILED: EXIT_IO,
}


def _fail(code: int, message: str) -> NoReturn:
    click.echo(message, err=True)
    sys.exit(code)


def _load_schema_or_fail(schema_path: Optional[str]) -> Schema:
    try:
        return load_schema(schema_path)
    except LoadError as exc:
        _fail(_EXIT_OF_KIND[exc.kind], str(exc))
    except SchemaError as exc:
        _fail(EXIT_DOMAIN, f"schema error: {exc}")


def _load_or_fail(
    files: Sequence[str], schema_path: Optional[str]
) -> tuple[Schema, LoadedDataset]:
    schema = _load_schema_or_fail(schema_path)
    try:
        return schema, load_dataset(files, schema)
    except LoadError as exc:
        if exc.kind is LoadErrorKind.VALIDATION_FAILED and exc.report is not None:
            for line in exc.report.to_lines():
                click.echo(line, err=True)
        _fail(_EXIT_OF_KIND[exc.kind], str(exc))


def _term_text(term, prefixes) -> str:
    if isinstance(term, Iri):
        return shrink_iri(term.value, prefixes) or term.value
    return term.sort_key()


def _render_table(table: BindingTable, prefixes) -> list[str]:
    headers = [f"?{v}" for v in table.variables]
    rows = [[_term_text(t, prefixes) for t in row] for row in table.rows]
    widths = [
        max(len(h), *(len(r[i]) for r in rows)) if rows else len(h)
        for i, h in enumerate(headers)
    ]
    lines = [
        "  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip(),
        "  ".join("-" * w for w in widths),
    ]
    for r in rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    lines.append(f"{len(rows)} row(s)")
    return lines


files_argument = click.argument("files", nargs=-1, required=True, type=click.Path())
schema_option = click.option(
    "--schema",
    "schema_path",
    type=click.Path(),
    default=None,
    help="Schema Turtle file (default: the bundled schema).",
)
json_option = click.option(
    "--json", "as_json", is_flag=True, help="Emit machine-readable JSON on stdout."
)


@click.group()
def main() -> None:
    """Knowledge graph of mathematical models, algorithms, and software."""


@main.command()
@files_argument
@schema_option
@json_option
def load(files: tuple[str, ...], schema_path: Optional[str], as_json: bool) -> None:
    """Parse, validate, and materialize FILES; print a summary."""
    _, loaded = _load_or_fail(files, schema_path)
    if as_json:
        click.echo(
            jsonlib.dumps(
                {
                    "files": list(loaded.paths),
                    "stats": loaded.stats.to_json(),
                    "report": loaded.report.to_json(),
                },
                indent=2,
            )
        )
        return
    stats = loaded.stats
    click.echo(
        f"loaded {len(files)} file(s): {stats.asserted_count} asserted, "
        f"{stats.inferred_count} inferred, {len(loaded.snapshot)} total triples"
    )
    click.echo(
        f"{loaded.report.error_count} errors, {loaded.report.warning_count} warnings"
    )


@main.command("validate")
@files_argument
@schema_option
@json_option
def validate_command(files: tuple[str, ...], schema_path: Optional[str], as_json: bool) -> None:
    """Check FILES against the schema; exit 0 iff no errors."""
    schema = _load_schema_or_fail(schema_path)
    try:
        prefixes, triples = parse_files(files)
    except LoadError as exc:
        _fail(_EXIT_OF_KIND[exc.kind], str(exc))
    report = validate(triples, schema)
    if as_json:
        click.echo(jsonlib.dumps(report.to_json(), indent=2))
    else:
        for line in report.to_lines(prefixes):
            click.echo(line)
        click.echo(f"{report.error_count} errors, {report.warning_count} warnings")
    if report.error_count > 0:
        sys.exit(EXIT_DOMAIN)


@main.command()
@files_argument
@click.option("-e", "--execute", "query_text", required=True, help="Query text.")
@schema_option
@json_option
def query(
    files: tuple[str, ...], query_text: str, schema_path: Optional[str], as_json: bool
) -> None:
    """Run a SELECT query over the materialized dataset."""
    _, loaded = _load_or_fail(files, schema_path)
    try:
        ast = parse_query(query_text)
        table = evaluate(ast, loaded.snapshot)
    except QueryParseError as exc:
        _fail(EXIT_DOMAIN, f"query parse error at {exc.line}:{exc.column}: {exc.message}")
    except EvaluationError as exc:
        _fail(EXIT_DOMAIN, f"query error: {exc.message}")
    if as_json:
        click.echo(jsonlib.dumps(table.to_json(), indent=2))
        return
    for line in _render_table(table, loaded.snapshot.prefixes):
        click.echo(line)


@main.command()
@files_argument
@click.option("--from", "start_text", required=True, help="Start entity (CURIE or IRI).")
@schema_option
@json_option
def chain(
    files: tuple[str, ...], start_text: str, schema_path: Optional[str], as_json: bool
) -> None:
    """Print every maximal workflow chain from the start entity."""
    schema, loaded = _load_or_fail(files, schema_path)
    prefixes = loaded.snapshot.prefixes
    try:
        start = expand_curie(start_text, prefixes)
    except TermError as exc:
        _fail(EXIT_DOMAIN, f"bad start entity {start_text!r}: {exc}")
    try:
        chains = mso_chains(loaded.snapshot, schema, start)
    except NotAChainClass as exc:
        _fail(EXIT_DOMAIN, str(exc))
    if as_json:
        click.echo(
            jsonlib.dumps(
                {"start": start.value, "chains": [c.to_json() for c in chains]},
                indent=2,
            )
        )
        return
    for c in chains:
        parts = [_term_text(c.steps[0][0], prefixes)]
        for edge, (entity, _) in zip(c.edges, c.steps[1:]):
            parts.append(f"-[{_term_text(edge, prefixes)}]->")
            parts.append(_term_text(entity, prefixes))
        click.echo(" ".join(parts))


@main.command()
@files_argument
@click.option("-q", "--query-term", "term", required=True, help="Search text.")
@click.option("--limit", default=20, show_default=True, help="Maximum hits.")
@schema_option
@json_option
def search(
    files: tuple[str, ...],
    term: str,
    limit: int,
    schema_path: Optional[str],
    as_json: bool,
) -> None:
    """Keyword search over labels and descriptions."""
    _, loaded = _load_or_fail(files, schema_path)
    if not term.strip():
        _fail(EXIT_DOMAIN, "search term must be non-empty")
    hits = keyword_search(loaded.snapshot, term, limit)
    if as_json:
        click.echo(
            jsonlib.dumps(
                [
                    {
                        "iri": h.iri.value,
                        "label": h.label,
                        "matchField": h.match_field,
                        "rank": h.rank.value,
                    }
                    for h in hits
                ],
                indent=2,
            )
        )
        return
    prefixes = loaded.snapshot.prefixes
    for h in hits:
        name = shrink_iri(h.iri.value, prefixes) or h.iri.value
        click.echo(f"{name}  {h.label}  ({h.match_field}, {h.rank.value})")
    click.echo(f"{len(hits)} hit(s)")


@main.command()
@files_argument
@click.option(
    "-o",
    "--output",
    "output_path",
    required=True,
    type=click.Path(),
    help="Output Turtle file.",
)
@schema_option
@json_option
def export(
    files: tuple[str, ...],
    output_path: str,
    schema_path: Optional[str],
    as_json: bool,
) -> None:
    """Write the materialized dataset as canonical Turtle."""
    _, loaded = _load_or_fail(files, schema_path)
    text = serialize_turtle(loaded.snapshot)
    try:
        with open(output_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        _fail(EXIT_IO, f"cannot write {output_path}: {exc}")
    if as_json:
        click.echo(
            jsonlib.dumps({"path": output_path, "triples": len(loaded.snapshot)})
        )
    else:
        click.echo(f"wrote {len(loaded.snapshot)} triples to {output_path}")


@main.command()
@files_argument
@click.option("--host", default="127.0.0.1", show_default=True, help="Bind address.")
@click.option("--port", default=8080, show_default=True, help="Bind port.")
@click.option(
    "--cors-origin", default="*", show_default=True, help="Access-Control-Allow-Origin."
)
@schema_option
def serve(
    files: tuple[str, ...],
    host: str,
    port: int,
    cors_origin: str,
    schema_path: Optional[str],
) -> None:
    """Serve the dataset over HTTP/JSON."""
    from .service import serve as run_server

    schema = _load_schema_or_fail(schema_path)
    # Fail fast with CLI error mapping before handing off to the server.
    try:
        run_server(files, schema, host=host, port=port, cors_origin=cors_origin)
    except LoadError as exc:
        if exc.kind is LoadErrorKind.VALIDATION_FAILED and exc.report is not None:
            for line in exc.report.to_lines():
                click.echo(line, err=True)
        _fail(_EXIT_OF_KIND[exc.kind], str(exc))
