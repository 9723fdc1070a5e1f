"""Forward-chaining materialization of inverse and transitive closures.

Semi-naive evaluation: only triples derived in the previous pass feed
the next one. The closure is a least fixpoint, bounded by the square of
the entity count times the property count, so termination is guaranteed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

from .rdf import GraphSnapshot, Iri, Triple, TripleStore
from .schema import PropertyKind, Schema


class ProvenanceStatus(enum.Enum):
    ASSERTED = "asserted"
    INFERRED = "inferred"


class RuleName(enum.Enum):
    INVERSE = "InverseRule"
    TRANSITIVE = "TransitiveRule"


@dataclass(frozen=True, slots=True)
class TripleProvenance:
    status: ProvenanceStatus
    rule: Optional[RuleName] = None
    premises: tuple[Triple, ...] = ()

    def to_json(self) -> dict[str, object]:
        out: dict[str, object] = {"status": self.status.value}
        if self.rule is not None:
            out["rule"] = self.rule.value
        if self.premises:
            out["premises"] = [t.to_json() for t in self.premises]
        return out


ASSERTED = TripleProvenance(ProvenanceStatus.ASSERTED)


@dataclass(frozen=True, slots=True)
class InferenceStats:
    asserted_count: int
    inferred_count: int
    iterations: int
    rule_counts: Mapping[str, int]

    def to_json(self) -> dict[str, object]:
        return {
            "assertedCount": self.asserted_count,
            "inferredCount": self.inferred_count,
            "iterations": self.iterations,
            "ruleCounts": dict(self.rule_counts),
        }


class NotInGraph(LookupError):
    def __init__(self, t: Triple) -> None:
        super().__init__(f"triple not present in snapshot: {t}")
        self.triple = t


def materialize(
    asserted: Iterable[Triple],
    schema: Schema,
    prefixes: Optional[Mapping[str, str]] = None,
) -> tuple[GraphSnapshot, InferenceStats]:
    """Close the asserted triples under the inverse and transitive rules.

    Annotation and datatype triples pass through untouched. The result
    is independent of the input order; the first derivation of each
    inferred triple is recorded for :func:`explain`.
    """
    store = TripleStore(prefixes)
    store.insert_all(asserted)
    asserted_count = len(store)
    provenance: dict[Triple, TripleProvenance] = {}
    rule_counts = {RuleName.INVERSE.value: 0, RuleName.TRANSITIVE.value: 0}

    delta = sorted(store, key=Triple.sort_key)
    iterations = 0
    while True:
        iterations += 1
        fresh: list[Triple] = []

        def derive(t: Triple, rule: RuleName, premises: tuple[Triple, ...]) -> None:
            if store.insert(t):
                provenance[t] = TripleProvenance(ProvenanceStatus.INFERRED, rule, premises)
                rule_counts[rule.value] += 1
                fresh.append(t)

        for t in delta:
            pd = schema.property_def(t.predicate)
            if pd is None or pd.kind is not PropertyKind.OBJECT:
                continue
            if not isinstance(t.object, Iri):
                continue
            if pd.inverse_of is not None:
                derive(
                    Triple(t.object, pd.inverse_of, t.subject),
                    RuleName.INVERSE, (t,),
                )
            if pd.transitive:
                # t = (a p b): join both sides against the whole store.
                for c in sorted(store.objects(t.object, t.predicate), key=lambda x: x.sort_key()):
                    if isinstance(c, Iri):
                        right = Triple(t.object, t.predicate, c)
                        derive(Triple(t.subject, t.predicate, c), RuleName.TRANSITIVE, (t, right))
                for x in sorted(store.subjects(t.predicate, t.subject), key=Iri.sort_key):
                    left = Triple(x, t.predicate, t.subject)
                    derive(Triple(x, t.predicate, t.object), RuleName.TRANSITIVE, (left, t))
        if not fresh:
            break
        delta = sorted(set(fresh), key=Triple.sort_key)

    snapshot = store.freeze(provenance=provenance)
    stats = InferenceStats(
        asserted_count=asserted_count,
        inferred_count=len(store) - asserted_count,
        iterations=iterations,
        rule_counts=rule_counts,
    )
    return snapshot, stats


def explain(snapshot: GraphSnapshot, t: Triple) -> TripleProvenance:
    """Why a triple is in the snapshot: asserted, or rule plus premises."""
    if t not in snapshot:
        raise NotInGraph(t)
    prov = snapshot.provenance.get(t)
    return prov if prov is not None else ASSERTED
