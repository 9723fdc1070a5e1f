"""Ontology schemas: the builtin merged model/algorithm schema plus
loading and export of schemas as declarative Turtle files."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

from .rdf import RDF_TYPE, RDFS_COMMENT, RDFS_LABEL, Iri, Literal, Triple
from .turtle import ParsedDocument

DEFAULT_NAMESPACE = "https://example.org/mardi/mso#"
DEFAULT_PREFIX = "mmo"

OWL_CLASS = "http://www.w3.org/2002/07/owl#Class"
OWL_OBJECT_PROPERTY = "http://www.w3.org/2002/07/owl#ObjectProperty"
OWL_DATATYPE_PROPERTY = "http://www.w3.org/2002/07/owl#DatatypeProperty"
OWL_ANNOTATION_PROPERTY = "http://www.w3.org/2002/07/owl#AnnotationProperty"
OWL_TRANSITIVE_PROPERTY = "http://www.w3.org/2002/07/owl#TransitiveProperty"
OWL_INVERSE_OF = "http://www.w3.org/2002/07/owl#inverseOf"
OWL_ONTOLOGY = "http://www.w3.org/2002/07/owl#Ontology"
RDFS_DOMAIN = "http://www.w3.org/2000/01/rdf-schema#domain"
RDFS_RANGE = "http://www.w3.org/2000/01/rdf-schema#range"
RDFS_IS_DEFINED_BY = "http://www.w3.org/2000/01/rdf-schema#isDefinedBy"


class Ontology(enum.Enum):
    MATHMODDB = "MathModDB"
    ALGODATA = "AlgoData"


class PropertyKind(enum.Enum):
    OBJECT = "object"
    DATATYPE = "datatype"


class SchemaErrorKind(enum.Enum):
    DANGLING_DOMAIN_RANGE = "DanglingDomainRange"
    ASYMMETRIC_INVERSE = "AsymmetricInverse"
    DUPLICATE_IRI = "DuplicateIri"


class SchemaError(Exception):
    def __init__(self, kind: SchemaErrorKind, iri: Iri, message: str) -> None:
        super().__init__(f"{kind.value}: {message} ({iri.value})")
        self.kind = kind
        self.iri = iri


@dataclass(frozen=True, slots=True)
class ClassDef:
    iri: Iri
    label: str
    ontology: Ontology


@dataclass(frozen=True, slots=True)
class PropertyDef:
    iri: Iri
    label: str
    kind: PropertyKind
    domain: Iri
    range: Iri
    inverse_of: Optional[Iri] = None
    transitive: bool = False


@dataclass(frozen=True)
class Schema:
    classes: tuple[ClassDef, ...]
    properties: tuple[PropertyDef, ...]
    annotation_predicates: tuple[Iri, ...]

    @cached_property
    def _class_map(self) -> dict[Iri, ClassDef]:
        return {c.iri: c for c in self.classes}

    @cached_property
    def _property_map(self) -> dict[Iri, PropertyDef]:
        return {p.iri: p for p in self.properties}

    def class_def(self, iri: Iri) -> Optional[ClassDef]:
        return self._class_map.get(iri)

    def property_def(self, iri: Iri) -> Optional[PropertyDef]:
        return self._property_map.get(iri)

    def is_annotation(self, iri: Iri) -> bool:
        return iri in self.annotation_predicates

    def object_properties(self) -> tuple[PropertyDef, ...]:
        return tuple(p for p in self.properties if p.kind is PropertyKind.OBJECT)

    def class_by_local_name(self, local: str) -> Optional[ClassDef]:
        for c in self.classes:
            if c.iri.local_name() == local:
                return c
        return None

    def property_by_local_name(self, local: str) -> Optional[PropertyDef]:
        for p in self.properties:
            if p.iri.local_name() == local:
                return p
        return None


_CLASSES: tuple[tuple[str, str, Ontology], ...] = (
    ("ApplicationDomain", "Application Domain", Ontology.MATHMODDB),
    ("ApplicationProblem", "Application Problem", Ontology.MATHMODDB),
    ("MathematicalModel", "Mathematical Model", Ontology.MATHMODDB),
    ("MathematicalFormulation", "Mathematical Formulation", Ontology.MATHMODDB),
    ("Quantity", "Quantity", Ontology.MATHMODDB),
    ("AlgorithmicProblem", "Algorithmic Problem", Ontology.ALGODATA),
    ("Algorithm", "Algorithm", Ontology.ALGODATA),
    ("Software", "Software", Ontology.ALGODATA),
    ("Benchmark", "Benchmark", Ontology.ALGODATA),
    ("Publication", "Publication", Ontology.ALGODATA),
)

# forward local name, label, domain, range, inverse local name, inverse label, transitive
_PROPERTY_PAIRS: tuple[tuple[str, str, str, str, str, str, bool], ...] = (
    ("models", "models",
     "MathematicalModel", "ApplicationProblem", "modeledBy", "modeled by", False),
    ("containedInDomain", "contained in domain",
     "ApplicationProblem", "ApplicationDomain", "containsProblem", "contains problem", False),
    ("containsFormulation", "contains formulation",
     "MathematicalModel", "MathematicalFormulation", "formulationOf", "formulation of", False),
    ("generalizedBy", "generalized by",
     "MathematicalFormulation", "MathematicalFormulation", "generalizes", "generalizes", True),
    ("containsQuantity", "contains quantity",
     "MathematicalFormulation", "Quantity", "quantityOf", "quantity of", False),
    ("specializesModel", "specializes model",
     "MathematicalModel", "MathematicalModel", "specializedByModel", "specialized by model", True),
    ("usesAlgorithmicProblem", "uses algorithmic problem",
     "MathematicalModel", "AlgorithmicProblem", "usedByModelProblem", "used by model problem", False),
    ("solves", "solves",
     "Algorithm", "AlgorithmicProblem", "solvedBy", "solved by", False),
    ("specializesAlgorithm", "specializes algorithm",
     "Algorithm", "Algorithm", "specializedByAlgorithm", "specialized by algorithm", True),
    ("invents", "invents",
     "Publication", "Algorithm", "inventedIn", "invented in", False),
    ("studies", "studies",
     "Publication", "Algorithm", "studiedIn", "studied in", False),
    ("analyzes", "analyzes",
     "Publication", "Algorithm", "analyzedIn", "analyzed in", False),
    ("implements", "implements",
     "Software", "Algorithm", "implementedBy", "implemented by", False),
    ("tests", "tests",
     "Benchmark", "Algorithm", "testedBy", "tested by", False),
)


def builtin_schema(namespace: str = DEFAULT_NAMESPACE) -> Schema:
    """The merged model/algorithm schema: 10 classes, 14 inverse property
    pairs, 4 annotation predicates."""
    classes = tuple(
        sorted(
            (ClassDef(Iri(namespace + local), label, onto) for local, label, onto in _CLASSES),
            key=lambda c: c.iri.value,
        )
    )
    properties: list[PropertyDef] = []
    for local, label, dom, rng, inv_local, inv_label, transitive in _PROPERTY_PAIRS:
        forward = Iri(namespace + local)
        backward = Iri(namespace + inv_local)
        domain = Iri(namespace + dom)
        range_ = Iri(namespace + rng)
        properties.append(
            PropertyDef(forward, label, PropertyKind.OBJECT, domain, range_,
                        inverse_of=backward, transitive=transitive)
        )
        properties.append(
            PropertyDef(backward, inv_label, PropertyKind.OBJECT, range_, domain,
                        inverse_of=forward, transitive=transitive)
        )
    annotations = (
        Iri(RDFS_LABEL),
        Iri(RDFS_COMMENT),
        Iri(namespace + "formulaLatex"),
        Iri(namespace + "externalId"),
    )
    schema = Schema(
        classes=classes,
        properties=tuple(sorted(properties, key=lambda p: p.iri.value)),
        annotation_predicates=tuple(sorted(annotations, key=Iri.sort_key)),
    )
    check_schema(schema)
    return schema


def check_schema(schema: Schema) -> None:
    """Enforce structural schema invariants, raising SchemaError."""
    seen: dict[Iri, str] = {}
    for c in schema.classes:
        if c.iri in seen:
            raise SchemaError(SchemaErrorKind.DUPLICATE_IRI, c.iri, "declared twice")
        seen[c.iri] = "class"
    for p in schema.properties:
        if p.iri in seen:
            raise SchemaError(
                SchemaErrorKind.DUPLICATE_IRI, p.iri,
                f"declared as both {seen[p.iri]} and property",
            )
        seen[p.iri] = "property"
    for p in schema.properties:
        if schema.class_def(p.domain) is None:
            raise SchemaError(
                SchemaErrorKind.DANGLING_DOMAIN_RANGE, p.iri,
                f"domain {p.domain.value} is not a declared class",
            )
        if p.kind is PropertyKind.OBJECT and schema.class_def(p.range) is None:
            raise SchemaError(
                SchemaErrorKind.DANGLING_DOMAIN_RANGE, p.iri,
                f"range {p.range.value} is not a declared class",
            )
        if p.transitive and p.domain != p.range:
            raise SchemaError(
                SchemaErrorKind.DANGLING_DOMAIN_RANGE, p.iri,
                "transitive property must have equal domain and range",
            )
        if p.inverse_of is not None:
            q = schema.property_def(p.inverse_of)
            if q is None or q.inverse_of != p.iri:
                raise SchemaError(
                    SchemaErrorKind.ASYMMETRIC_INVERSE, p.iri,
                    f"inverse {p.inverse_of.value} does not point back",
                )
            if q.domain != p.range or q.range != p.domain:
                raise SchemaError(
                    SchemaErrorKind.ASYMMETRIC_INVERSE, p.iri,
                    "inverse domain/range do not mirror the property",
                )


def _ontology_for(iri: Optional[Iri]) -> Ontology:
    if iri is not None and iri.local_name() == Ontology.ALGODATA.value:
        return Ontology.ALGODATA
    return Ontology.MATHMODDB


def schema_from_triples(doc: ParsedDocument) -> Schema:
    """Interpret class/property declarations in a parsed document.

    Classes are subjects typed owl:Class; properties are subjects typed
    owl:ObjectProperty or owl:DatatypeProperty with rdfs:domain/range,
    owl:inverseOf, and owl:TransitiveProperty assertions; annotation
    predicates are subjects typed owl:AnnotationProperty. Ontology
    membership comes from rdfs:isDefinedBy (defaults to the model
    ontology when absent).
    """
    rdf_type = Iri(RDF_TYPE)
    types: dict[Iri, set[Iri]] = {}
    by_sp: dict[tuple[Iri, Iri], list[Iri]] = {}
    labels: dict[Iri, str] = {}
    for t in doc.triples:
        if t.predicate == rdf_type and isinstance(t.object, Iri):
            types.setdefault(t.subject, set()).add(t.object)
        elif t.predicate.value == RDFS_LABEL and isinstance(t.object, Literal):
            labels.setdefault(t.subject, t.object.lexical)
        elif isinstance(t.object, Iri):
            by_sp.setdefault((t.subject, t.predicate), []).append(t.object)

    def one(s: Iri, p: str) -> Optional[Iri]:
        vals = by_sp.get((s, Iri(p)), [])
        return vals[0] if vals else None

    classes: list[ClassDef] = []
    properties: list[PropertyDef] = []
    annotations: list[Iri] = []
    for subj in sorted(types, key=Iri.sort_key):
        ts = types[subj]
        label = labels.get(subj, subj.local_name())
        if Iri(OWL_CLASS) in ts:
            classes.append(ClassDef(subj, label, _ontology_for(one(subj, RDFS_IS_DEFINED_BY))))
        is_object = Iri(OWL_OBJECT_PROPERTY) in ts
        is_datatype = Iri(OWL_DATATYPE_PROPERTY) in ts
        if is_object and is_datatype:
            raise SchemaError(
                SchemaErrorKind.DUPLICATE_IRI, subj,
                "declared as both object and datatype property",
            )
        if is_object or is_datatype:
            domain = one(subj, RDFS_DOMAIN)
            range_ = one(subj, RDFS_RANGE)
            if domain is None or range_ is None:
                raise SchemaError(
                    SchemaErrorKind.DANGLING_DOMAIN_RANGE, subj,
                    "property lacks a domain or range declaration",
                )
            properties.append(
                PropertyDef(
                    subj, label,
                    PropertyKind.OBJECT if is_object else PropertyKind.DATATYPE,
                    domain, range_,
                    inverse_of=one(subj, OWL_INVERSE_OF),
                    transitive=Iri(OWL_TRANSITIVE_PROPERTY) in ts,
                )
            )
        if Iri(OWL_ANNOTATION_PROPERTY) in ts:
            annotations.append(subj)

    schema = Schema(
        classes=tuple(sorted(classes, key=lambda c: c.iri.value)),
        properties=tuple(sorted(properties, key=lambda p: p.iri.value)),
        annotation_predicates=tuple(sorted(annotations, key=Iri.sort_key)),
    )
    check_schema(schema)
    return schema


def schema_to_triples(schema: Schema, namespace: str = DEFAULT_NAMESPACE) -> list[Triple]:
    """Declarative triple form of a schema; inverse of schema_from_triples."""
    rdf_type = Iri(RDF_TYPE)
    label_p = Iri(RDFS_LABEL)
    triples: list[Triple] = []
    onto_iris = {
        Ontology.MATHMODDB: Iri(namespace + "MathModDB"),
        Ontology.ALGODATA: Iri(namespace + "AlgoData"),
    }
    used = {c.ontology for c in schema.classes}
    for onto in Ontology:
        if onto in used:
            triples.append(Triple(onto_iris[onto], rdf_type, Iri(OWL_ONTOLOGY)))
            triples.append(Triple(onto_iris[onto], label_p, Literal(onto.value)))
    for c in schema.classes:
        triples.append(Triple(c.iri, rdf_type, Iri(OWL_CLASS)))
        triples.append(Triple(c.iri, label_p, Literal(c.label)))
        triples.append(Triple(c.iri, Iri(RDFS_IS_DEFINED_BY), onto_iris[c.ontology]))
    for p in schema.properties:
        kind_iri = OWL_OBJECT_PROPERTY if p.kind is PropertyKind.OBJECT else OWL_DATATYPE_PROPERTY
        triples.append(Triple(p.iri, rdf_type, Iri(kind_iri)))
        triples.append(Triple(p.iri, label_p, Literal(p.label)))
        triples.append(Triple(p.iri, Iri(RDFS_DOMAIN), p.domain))
        triples.append(Triple(p.iri, Iri(RDFS_RANGE), p.range))
        if p.inverse_of is not None:
            triples.append(Triple(p.iri, Iri(OWL_INVERSE_OF), p.inverse_of))
        if p.transitive:
            triples.append(Triple(p.iri, rdf_type, Iri(OWL_TRANSITIVE_PROPERTY)))
    for ap in schema.annotation_predicates:
        triples.append(Triple(ap, rdf_type, Iri(OWL_ANNOTATION_PROPERTY)))
    return triples


SCHEMA_FILE_PREFIXES = {
    DEFAULT_PREFIX: DEFAULT_NAMESPACE,
    "owl": "http://www.w3.org/2002/07/owl#",
    "rdfs": "http://www.w3.org/2000/01/rdf-schema#",
}
