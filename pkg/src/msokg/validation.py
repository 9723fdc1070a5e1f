"""Schema conformance checking for instance data, before materialization.

Runs on asserted triples only: domain/range typing is checked, never
inferred, so curation faults stay visible. Problems are report entries,
not failures.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Any, Iterable, Mapping, Optional

from .rdf import RDF_TYPE, Iri, Literal, Triple, shrink_iri
from .schema import (
    OWL_INVERSE_OF,
    RDFS_DOMAIN,
    RDFS_IS_DEFINED_BY,
    RDFS_RANGE,
    PropertyKind,
    Schema,
)

# Predicates of the schema-definition vocabulary. A dataset may carry its
# own schema file; those triples describe the schema rather than instance
# data and are checked at schema load, not here.
_SCHEMA_VOCABULARY = frozenset(
    {OWL_INVERSE_OF, RDFS_DOMAIN, RDFS_RANGE, RDFS_IS_DEFINED_BY}
)


class Severity(enum.Enum):
    ERROR = "error"
    WARNING = "warning"


class ViolationKind(enum.Enum):
    UNKNOWN_PREDICATE = "UnknownPredicate"
    DOMAIN_VIOLATION = "DomainViolation"
    RANGE_VIOLATION = "RangeViolation"
    UNTYPED_SUBJECT = "UntypedSubject"
    LITERAL_WHERE_ENTITY_EXPECTED = "LiteralWhereEntityExpected"
    ENTITY_WHERE_LITERAL_EXPECTED = "EntityWhereLiteralExpected"


SEVERITY_OF: dict[ViolationKind, Severity] = {
    ViolationKind.UNKNOWN_PREDICATE: Severity.WARNING,
    ViolationKind.DOMAIN_VIOLATION: Severity.ERROR,
    ViolationKind.RANGE_VIOLATION: Severity.ERROR,
    ViolationKind.UNTYPED_SUBJECT: Severity.WARNING,
    ViolationKind.LITERAL_WHERE_ENTITY_EXPECTED: Severity.ERROR,
    ViolationKind.ENTITY_WHERE_LITERAL_EXPECTED: Severity.ERROR,
}


@dataclass(frozen=True, slots=True)
class Violation:
    kind: ViolationKind
    triple: Triple
    detail: str

    @property
    def severity(self) -> Severity:
        return SEVERITY_OF[self.kind]


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def error_count(self) -> int:
        return sum(1 for v in self.violations if v.severity is Severity.ERROR)

    @property
    def warning_count(self) -> int:
        return sum(1 for v in self.violations if v.severity is Severity.WARNING)

    def to_lines(self, prefixes: Optional[Mapping[str, str]] = None) -> list[str]:
        def name(value: str) -> str:
            short = shrink_iri(value, prefixes or {})
            return short if short is not None else value

        lines = []
        for v in self.violations:
            tag = "ERROR" if v.severity is Severity.ERROR else "WARN"
            t = v.triple
            obj = name(t.object.value) if isinstance(t.object, Iri) else t.object.sort_key()
            lines.append(
                f"{tag} {v.kind.value} {name(t.subject.value)} "
                f"{name(t.predicate.value)} {obj} — {v.detail}"
            )
        return lines

    def to_json(self) -> dict[str, Any]:
        from .rdf import term_to_json

        return {
            "errorCount": self.error_count,
            "warningCount": self.warning_count,
            "violations": [
                {
                    "severity": v.severity.value,
                    "kind": v.kind.value,
                    "subject": v.triple.subject.value,
                    "predicate": v.triple.predicate.value,
                    "object": term_to_json(v.triple.object),
                    "detail": v.detail,
                }
                for v in self.violations
            ],
        }


def _describe_types(types: set[Iri], schema: Schema) -> str:
    names = []
    for t in sorted(types, key=Iri.sort_key):
        cd = schema.class_def(t)
        names.append(cd.iri.local_name() if cd else t.local_name())
    return ", ".join(names) if names else "none"


def validate(triples: Iterable[Triple], schema: Schema) -> ValidationReport:
    """Check asserted triples against the schema; report order follows input."""
    triples = list(triples)
    rdf_type = Iri(RDF_TYPE)
    types: dict[Iri, set[Iri]] = {}
    for t in triples:
        if t.predicate == rdf_type and isinstance(t.object, Iri):
            types.setdefault(t.subject, set()).add(t.object)

    violations: list[Violation] = []
    warned_untyped: set[Iri] = set()

    def check_typing(t: Triple) -> None:
        if t.subject not in types and t.subject not in warned_untyped:
            warned_untyped.add(t.subject)
            violations.append(
                Violation(ViolationKind.UNTYPED_SUBJECT, t, "subject has no type assertion")
            )

    for t in triples:
        if t.predicate == rdf_type:
            if isinstance(t.object, Literal):
                violations.append(
                    Violation(
                        ViolationKind.LITERAL_WHERE_ENTITY_EXPECTED, t,
                        "type assertion expects a class IRI",
                    )
                )
            continue
        if t.predicate.value in _SCHEMA_VOCABULARY:
            continue
        check_typing(t)
        if schema.is_annotation(t.predicate):
            if isinstance(t.object, Iri):
                violations.append(
                    Violation(
                        ViolationKind.ENTITY_WHERE_LITERAL_EXPECTED, t,
                        "annotation predicate expects a literal",
                    )
                )
            continue
        pd = schema.property_def(t.predicate)
        if pd is None:
            violations.append(
                Violation(
                    ViolationKind.UNKNOWN_PREDICATE, t,
                    "predicate is not declared in the schema",
                )
            )
            continue
        if pd.kind is PropertyKind.DATATYPE:
            if isinstance(t.object, Iri):
                violations.append(
                    Violation(
                        ViolationKind.ENTITY_WHERE_LITERAL_EXPECTED, t,
                        "datatype property expects a literal",
                    )
                )
        elif isinstance(t.object, Literal):
            violations.append(
                Violation(
                    ViolationKind.LITERAL_WHERE_ENTITY_EXPECTED, t,
                    "object property expects an entity",
                )
            )
        subject_types = types.get(t.subject, set())
        if subject_types and pd.domain not in subject_types:
            violations.append(
                Violation(
                    ViolationKind.DOMAIN_VIOLATION, t,
                    f"domain {pd.domain.local_name()}, "
                    f"found {_describe_types(subject_types, schema)}",
                )
            )
        if pd.kind is PropertyKind.OBJECT and isinstance(t.object, Iri):
            object_types = types.get(t.object, set())
            if object_types and pd.range not in object_types:
                violations.append(
                    Violation(
                        ViolationKind.RANGE_VIOLATION, t,
                        f"range {pd.range.local_name()}, "
                        f"found {_describe_types(object_types, schema)}",
                    )
                )

    return ValidationReport(violations=tuple(violations))
