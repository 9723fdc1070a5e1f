"""Dataset loading: parse, validate, refuse on errors, materialize.

This is the single pipeline behind both the CLI and the service, so the
two agree on what a loadable dataset is. Validation runs on asserted
triples only; materialization happens after the dataset is known clean.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence, Union

from .rdf import GraphSnapshot, Triple
from .reasoning import InferenceStats, materialize
from .schema import Schema, check_schema, schema_from_triples
from .turtle import TurtleParseError, parse_turtle
from .validation import ValidationReport, validate


class LoadErrorKind(enum.Enum):
    PARSE_FAILED = "ParseFailed"
    VALIDATION_FAILED = "ValidationFailed"
    IO_FAILED = "IoFailed"


class LoadError(Exception):
    """A dataset or schema file could not be turned into a snapshot."""

    def __init__(
        self,
        kind: LoadErrorKind,
        message: str,
        *,
        path: Optional[str] = None,
        parse_error: Optional[TurtleParseError] = None,
        report: Optional[ValidationReport] = None,
    ) -> None:
        super().__init__(message)
        self.kind = kind
        self.message = message
        self.path = path
        self.parse_error = parse_error
        self.report = report


@dataclass(frozen=True)
class LoadedDataset:
    snapshot: GraphSnapshot
    stats: InferenceStats
    report: ValidationReport
    paths: tuple[str, ...]


def _read_text(path: Union[str, Path]) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise LoadError(
            LoadErrorKind.IO_FAILED, f"cannot read {path}: {exc}", path=str(path)
        ) from exc


def _parse_file(path: Union[str, Path]) -> tuple[dict[str, str], list[Triple]]:
    text = _read_text(path)
    try:
        doc = parse_turtle(text)
    except TurtleParseError as exc:
        raise LoadError(
            LoadErrorKind.PARSE_FAILED,
            f"{path}:{exc.line}:{exc.column}: {exc.message}",
            path=str(path),
            parse_error=exc,
        ) from exc
    return dict(doc.prefixes), list(doc.triples)


def parse_files(
    paths: Sequence[Union[str, Path]],
) -> tuple[dict[str, str], list[Triple]]:
    """Parse Turtle files into one triple list with a merged prefix map.

    Prefix declarations merge across files, later files winning on
    conflicts; triple order follows file order.
    """
    prefixes: dict[str, str] = {}
    triples: list[Triple] = []
    for path in paths:
        file_prefixes, file_triples = _parse_file(path)
        prefixes.update(file_prefixes)
        triples.extend(file_triples)
    return prefixes, triples


def load_dataset(
    paths: Sequence[Union[str, Path]],
    schema: Schema,
    require_clean: bool = True,
) -> LoadedDataset:
    """Load one or more Turtle files into a materialized snapshot.

    With require_clean, any validation error aborts the load and the
    error carries the full report.
    """
    prefixes, triples = parse_files(paths)
    report = validate(triples, schema)
    if require_clean and report.error_count > 0:
        raise LoadError(
            LoadErrorKind.VALIDATION_FAILED,
            f"validation failed with {report.error_count} error(s)",
            report=report,
        )
    snapshot, stats = materialize(triples, schema, prefixes=prefixes)
    return LoadedDataset(
        snapshot=snapshot,
        stats=stats,
        report=report,
        paths=tuple(str(p) for p in paths),
    )


def bundled_schema_text() -> str:
    """The packaged schema definition file, verbatim."""
    return (
        resources.files("msokg").joinpath("data/mso.ttl").read_text(encoding="utf-8")
    )


def bundled_seed_text() -> str:
    """The packaged worked-example dataset, verbatim."""
    return (
        resources.files("msokg").joinpath("data/xrct.ttl").read_text(encoding="utf-8")
    )


def load_schema(path: Optional[Union[str, Path]] = None) -> Schema:
    """Load a schema definition file; defaults to the bundled one.

    The loaded schema is checked for dangling references and asymmetric
    inverses before use.
    """
    if path is None:
        text, origin = bundled_schema_text(), "bundled schema"
    else:
        text, origin = _read_text(path), str(path)
    try:
        doc = parse_turtle(text)
    except TurtleParseError as exc:
        raise LoadError(
            LoadErrorKind.PARSE_FAILED,
            f"{origin}:{exc.line}:{exc.column}: {exc.message}",
            path=origin,
            parse_error=exc,
        ) from exc
    schema = schema_from_triples(doc)
    check_schema(schema)
    return schema
