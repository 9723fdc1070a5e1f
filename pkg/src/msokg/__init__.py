"""Knowledge-graph engine for mathematical models and algorithms.

Ingests Turtle, validates instance data against the builtin schema,
materializes inverse and transitive closures, and answers structured
queries, keyword searches, and workflow-chain traversals over the
result. A CLI (``kg``) and an HTTP/JSON service expose the same engine.
"""

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
    InvalidQuery,
    QueryParseError,
    SearchHit,
    evaluate,
    keyword_search,
    parse_query,
)
from .rdf import (
    EntityRecord,
    GraphSnapshot,
    Iri,
    Literal,
    TermError,
    Triple,
    TripleStore,
    expand_curie,
    shrink_iri,
)
from .reasoning import (
    InferenceStats,
    NotInGraph,
    TripleProvenance,
    explain,
    materialize,
)
from .schema import Schema, SchemaError, builtin_schema, check_schema
from .service import ApiError, KgHttpServer, KgService, ServiceState
from .traversal import (
    Chain,
    CompetencyKind,
    NotAChainClass,
    competency,
    mso_chains,
    neighbors,
)
from .turtle import ParsedDocument, TurtleParseError, parse_turtle, serialize_turtle
from .validation import ValidationReport, Violation, validate

__version__ = "0.1.0"

__all__ = [
    "ApiError",
    "BindingTable",
    "Chain",
    "CompetencyKind",
    "EntityRecord",
    "EvaluationError",
    "GraphSnapshot",
    "InferenceStats",
    "InvalidQuery",
    "Iri",
    "KgHttpServer",
    "KgService",
    "Literal",
    "LoadError",
    "LoadErrorKind",
    "LoadedDataset",
    "NotAChainClass",
    "NotInGraph",
    "ParsedDocument",
    "QueryParseError",
    "Schema",
    "SchemaError",
    "SearchHit",
    "ServiceState",
    "TermError",
    "Triple",
    "TripleProvenance",
    "TripleStore",
    "TurtleParseError",
    "ValidationReport",
    "Violation",
    "builtin_schema",
    "check_schema",
    "competency",
    "evaluate",
    "expand_curie",
    "explain",
    "keyword_search",
    "load_dataset",
    "load_schema",
    "materialize",
    "mso_chains",
    "neighbors",
    "parse_files",
    "parse_query",
    "parse_turtle",
    "serialize_turtle",
    "shrink_iri",
    "validate",
]
