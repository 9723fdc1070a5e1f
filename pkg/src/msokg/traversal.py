"""Guided traversal: MSO workflow chains, competency questions, neighbors.

The canonical chain runs ApplicationDomain - containsProblem ->
ApplicationProblem - modeledBy -> MathematicalModel -
usesAlgorithmicProblem -> AlgorithmicProblem - solvedBy -> Algorithm -
implementedBy -> Software. Chains are walked over the materialized
snapshot, so either direction of an asserted relation suffices.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Any, Optional

from .rdf import RDF_TYPE, GraphSnapshot, Iri
from .schema import Schema, builtin_schema


class NotAChainClass(ValueError):
    """The start entity is not typed with any canonical chain class."""


_CHAIN_CLASSES = (
    "ApplicationDomain",
    "ApplicationProblem",
    "MathematicalModel",
    "AlgorithmicProblem",
    "Algorithm",
    "Software",
)
_CHAIN_EDGES = (
    "containsProblem",
    "modeledBy",
    "usesAlgorithmicProblem",
    "solvedBy",
    "implementedBy",
)


def chain_spec(schema: Schema) -> tuple[tuple[Iri, ...], tuple[Iri, ...]]:
    """Resolve the canonical class and edge sequences against a schema."""
    classes = []
    for name in _CHAIN_CLASSES:
        cd = schema.class_by_local_name(name)
        if cd is None:
            raise NotAChainClass(f"schema defines no class named {name}")
        classes.append(cd.iri)
    edges = []
    for name in _CHAIN_EDGES:
        pd = schema.property_by_local_name(name)
        if pd is None:
            raise NotAChainClass(f"schema defines no property named {name}")
        edges.append(pd.iri)
    return tuple(classes), tuple(edges)


@dataclass(frozen=True)
class Chain:
    """One maximal walk along the canonical edge sequence."""

    steps: tuple[tuple[Iri, Iri], ...]  # (entity, class IRI) pairs
    edges: tuple[Iri, ...]
    complete: bool  # True iff the chain reaches a Software entity

    def entity_sequence(self) -> tuple[Iri, ...]:
        return tuple(entity for entity, _ in self.steps)

    def to_json(self) -> dict[str, Any]:
        return {
            "steps": [
                {"iri": entity.value, "classIri": class_iri.value}
                for entity, class_iri in self.steps
            ],
            "edges": [e.value for e in self.edges],
            "complete": self.complete,
        }


def _sort_key(chain: Chain) -> tuple:
    return (
        tuple(e.value for e in chain.entity_sequence()),
        tuple(c.value for _, c in chain.steps),
        tuple(e.value for e in chain.edges),
    )


def mso_chains(snapshot: GraphSnapshot, schema: Schema, start: Iri) -> list[Chain]:
    """Enumerate all maximal chains beginning at start.

    A path is maximal when no canonical edge extends it to a correctly
    typed, not-yet-visited entity. Results are sorted by step-IRI
    sequence.
    """
    classes, edges = chain_spec(schema)
    start_types = snapshot.types_of(start)
    positions = [i for i, c in enumerate(classes) if c in start_types]
    if not positions:
        raise NotAChainClass(
            f"{start.value} is not typed as any canonical chain class"
        )

    out: list[Chain] = []

    def walk(position: int, path: list[Iri]) -> None:
        successors: list[Iri] = []
        if position < len(edges):
            next_class = classes[position + 1]
            for t in snapshot.match(s=path[-1], p=edges[position]):
                o = t.object
                if (
                    isinstance(o, Iri)
                    and next_class in snapshot.types_of(o)
                    and o not in path  # refuse to revisit within one path
                ):
                    successors.append(o)
        if not successors:
            first = position - (len(path) - 1)
            steps = tuple(
                (entity, classes[first + i]) for i, entity in enumerate(path)
            )
            out.append(
                Chain(
                    steps=steps,
                    edges=tuple(edges[first : first + len(path) - 1]),
                    complete=steps[-1][1] == classes[-1],
                )
            )
            return
        for o in successors:
            path.append(o)
            walk(position + 1, path)
            path.pop()

    for position in positions:
        walk(position, [start])
    return sorted(set(out), key=_sort_key)


class CompetencyKind(enum.Enum):
    MODELS_FOR_PROBLEM = "ModelsForProblem"
    ALGORITHMIC_PROBLEMS_FOR_MODEL = "AlgorithmicProblemsForModel"
    ALGORITHMS_FOR_PROBLEM = "AlgorithmsForProblem"
    SOFTWARE_FOR_ALGORITHM = "SoftwareForAlgorithm"
    PUBLICATIONS_FOR_ALGORITHM = "PublicationsForAlgorithm"
    BENCHMARKS_FOR_ALGORITHM = "BenchmarksForAlgorithm"


# kind -> (direction, defining property local names)
_COMPETENCY_EDGES: dict[CompetencyKind, tuple[str, tuple[str, ...]]] = {
    CompetencyKind.MODELS_FOR_PROBLEM: ("incoming", ("models",)),
    CompetencyKind.ALGORITHMIC_PROBLEMS_FOR_MODEL: (
        "outgoing",
        ("usesAlgorithmicProblem",),
    ),
    CompetencyKind.ALGORITHMS_FOR_PROBLEM: ("incoming", ("solves",)),
    CompetencyKind.SOFTWARE_FOR_ALGORITHM: ("incoming", ("implements",)),
    CompetencyKind.PUBLICATIONS_FOR_ALGORITHM: (
        "incoming",
        ("invents", "studies", "analyzes"),
    ),
    CompetencyKind.BENCHMARKS_FOR_ALGORITHM: ("incoming", ("tests",)),
}


def competency(
    snapshot: GraphSnapshot,
    kind: CompetencyKind,
    target: Iri,
    schema: Optional[Schema] = None,
) -> list[Iri]:
    """Answer one competency question by its single defining edge."""
    schema = schema or builtin_schema()
    direction, names = _COMPETENCY_EDGES[kind]
    found: set[Iri] = set()
    for name in names:
        pd = schema.property_by_local_name(name)
        if pd is None:
            continue
        if direction == "outgoing":
            for t in snapshot.match(s=target, p=pd.iri):
                if isinstance(t.object, Iri):
                    found.add(t.object)
        else:
            for t in snapshot.match(p=pd.iri, o=target):
                found.add(t.subject)
    return sorted(found, key=Iri.sort_key)


def neighbors(
    snapshot: GraphSnapshot, iri: Iri, direction: str = "both"
) -> dict[Iri, list[Iri]]:
    """Group entity-to-entity edges by property in the given direction.

    direction is one of outgoing, incoming, both. Type assertions and
    annotation literals are excluded; entity records carry those.
    """
    if direction not in ("outgoing", "incoming", "both"):
        raise ValueError(f"unknown direction {direction!r}")
    rdf_type = Iri(RDF_TYPE)
    grouped: dict[Iri, set[Iri]] = {}
    if direction in ("outgoing", "both"):
        for t in snapshot.match(s=iri):
            if t.predicate != rdf_type and isinstance(t.object, Iri):
                grouped.setdefault(t.predicate, set()).add(t.object)
    if direction in ("incoming", "both"):
        for t in snapshot.match(o=iri):
            if t.predicate != rdf_type:
                grouped.setdefault(t.predicate, set()).add(t.subject)
    return {
        p: sorted(grouped[p], key=Iri.sort_key)
        for p in sorted(grouped, key=Iri.sort_key)
    }
