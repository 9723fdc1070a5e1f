"""Term, triple, and indexed-store primitives shared by the whole engine.

A mutable :class:`TripleStore` is single-writer; freezing it yields an
immutable :class:`GraphSnapshot` that is safe for unlimited concurrent
readers. All read operations order their output lexicographically by
term string so results are reproducible across runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable, Iterator, Mapping, Optional, Union

RDF_TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"
RDFS_LABEL = "http://www.w3.org/2000/01/rdf-schema#label"
RDFS_COMMENT = "http://www.w3.org/2000/01/rdf-schema#comment"


class TermError(ValueError):
    """A term or triple violates a structural constraint."""


def _iri_ok(value: str) -> bool:
    return bool(value) and not any(c.isspace() or c in "<>" for c in value)


@dataclass(frozen=True, slots=True)
class Iri:
    value: str

    def __post_init__(self) -> None:
        if not _iri_ok(self.value):
            raise TermError(f"malformed IRI: {self.value!r}")

    def sort_key(self) -> str:
        return self.value

    def local_name(self) -> str:
        """Fragment after '#', else the last path segment."""
        if "#" in self.value:
            return self.value.rsplit("#", 1)[1]
        return self.value.rstrip("/").rsplit("/", 1)[-1]


@dataclass(frozen=True, slots=True)
class Literal:
    lexical: str
    lang: Optional[str] = None
    datatype: Optional[str] = None

    def __post_init__(self) -> None:
        if self.lang is not None and self.datatype is not None:
            raise TermError("literal cannot carry both a language tag and a datatype")

    def sort_key(self) -> str:
        if self.lang is not None:
            return f'"{self.lexical}"@{self.lang}'
        if self.datatype is not None:
            return f'"{self.lexical}"^^{self.datatype}'
        return f'"{self.lexical}"'


Term = Union[Iri, Literal]


@dataclass(frozen=True, slots=True)
class Triple:
    subject: Iri
    predicate: Iri
    object: Term

    def __post_init__(self) -> None:
        # No blank nodes anywhere: subject and predicate are always IRIs.
        if not isinstance(self.subject, Iri) or not isinstance(self.predicate, Iri):
            raise TermError("triple subject and predicate must be IRIs")
        if not isinstance(self.object, (Iri, Literal)):
            raise TermError("triple object must be an IRI or a literal")

    def sort_key(self) -> tuple[str, str, str]:
        return (self.subject.value, self.predicate.value, self.object.sort_key())

    def to_json(self) -> dict[str, Any]:
        return {
            "subject": self.subject.value,
            "predicate": self.predicate.value,
            "object": term_to_json(self.object),
        }


def term_to_json(term: Term) -> dict[str, Any]:
    if isinstance(term, Iri):
        return {"type": "iri", "value": term.value}
    out: dict[str, Any] = {"type": "literal", "value": term.lexical}
    if term.lang is not None:
        out["lang"] = term.lang
    if term.datatype is not None:
        out["datatype"] = term.datatype
    return out


def shrink_iri(iri: str, prefixes: Mapping[str, str]) -> Optional[str]:
    """Compress an IRI to prefix:local, longest declared namespace first.

    Returns None when no declared namespace matches or the local part
    contains characters outside the prefixed-name charset.
    """
    best: Optional[tuple[str, str]] = None
    for label, ns in prefixes.items():
        if iri.startswith(ns):
            if best is None or len(ns) > len(best[1]) or (
                len(ns) == len(best[1]) and label < best[0]
            ):
                best = (label, ns)
    if best is None:
        return None
    local = iri[len(best[1]):]
    if not all(c.isascii() and (c.isalnum() or c in "_-") for c in local):
        return None
    return f"{best[0]}:{local}"


def expand_curie(text: str, prefixes: Mapping[str, str]) -> Iri:
    """Expand prefix:local against a prefix map; pass full IRIs through."""
    if ":" in text:
        prefix, local = text.split(":", 1)
        if prefix in prefixes:
            return Iri(prefixes[prefix] + local)
    return Iri(text)


@dataclass(frozen=True, slots=True)
class EntityRecord:
    """Everything the graph says about one IRI, bucketed for display."""

    iri: Iri
    types: tuple[Iri, ...]
    label: Optional[str]
    description: Optional[str]
    literal_attributes: tuple[tuple[Iri, Literal], ...]
    outgoing: tuple[tuple[Iri, Iri], ...]
    incoming: tuple[tuple[Iri, Iri], ...]

    def is_empty(self) -> bool:
        return not (
            self.types or self.literal_attributes or self.outgoing or self.incoming
        )

    def to_json(self) -> dict[str, Any]:
        return {
            "iri": self.iri.value,
            "types": [t.value for t in self.types],
            "label": self.label,
            "description": self.description,
            "literalAttributes": [
                {"predicate": p.value, "value": term_to_json(lit)}
                for p, lit in self.literal_attributes
            ],
            "outgoing": [
                {"predicate": p.value, "target": o.value} for p, o in self.outgoing
            ],
            "incoming": [
                {"predicate": p.value, "source": s.value} for p, s in self.incoming
            ],
        }


class TripleStore:
    """Mutable, duplicate-free triple set with SPO/POS/OSP access paths.

    Single-writer; not safe for concurrent mutation. Call :meth:`freeze`
    to publish an immutable snapshot.
    """

    def __init__(self, prefixes: Optional[Mapping[str, str]] = None) -> None:
        self._triples: set[Triple] = set()
        self._spo: dict[Iri, dict[Iri, set[Term]]] = {}
        self._pos: dict[Iri, dict[Term, set[Iri]]] = {}
        self._osp: dict[Term, dict[Iri, set[Iri]]] = {}
        self.prefixes: dict[str, str] = dict(prefixes or {})

    def __len__(self) -> int:
        return len(self._triples)

    def __contains__(self, t: Triple) -> bool:
        return t in self._triples

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._triples)

    def insert(self, t: Triple) -> bool:
        """Insert one triple; returns True iff it was not already present."""
        if not isinstance(t, Triple):
            raise TermError(f"not a triple: {t!r}")
        if t in self._triples:
            return False
        self._triples.add(t)
        self._spo.setdefault(t.subject, {}).setdefault(t.predicate, set()).add(t.object)
        self._pos.setdefault(t.predicate, {}).setdefault(t.object, set()).add(t.subject)
        self._osp.setdefault(t.object, {}).setdefault(t.subject, set()).add(t.predicate)
        return True

    def insert_all(self, triples: Iterable[Triple]) -> int:
        return sum(1 for t in triples if self.insert(t))

    def objects(self, s: Iri, p: Iri) -> set[Term]:
        return self._spo.get(s, {}).get(p, set())

    def subjects(self, p: Iri, o: Term) -> set[Iri]:
        return self._pos.get(p, {}).get(o, set())

    def freeze(self, provenance: Optional[Mapping[Triple, Any]] = None) -> GraphSnapshot:
        return GraphSnapshot(
            triples=frozenset(self._triples),
            spo={s: {p: frozenset(os) for p, os in ps.items()} for s, ps in self._spo.items()},
            pos={p: {o: frozenset(ss) for o, ss in os_.items()} for p, os_ in self._pos.items()},
            osp={o: {s: frozenset(ps) for s, ps in ss.items()} for o, ss in self._osp.items()},
            prefixes=dict(self.prefixes),
            provenance=dict(provenance or {}),
        )


@dataclass(frozen=True)
class GraphSnapshot:
    """Immutable, fully indexed triple set used by every read operation.

    ``provenance`` maps inferred triples to the record the reasoner took
    during materialization; triples absent from the map are asserted.
    """

    triples: frozenset[Triple]
    spo: Mapping[Iri, Mapping[Iri, frozenset[Term]]]
    pos: Mapping[Iri, Mapping[Term, frozenset[Iri]]]
    osp: Mapping[Term, Mapping[Iri, frozenset[Iri]]]
    prefixes: Mapping[str, str] = field(default_factory=dict)
    provenance: Mapping[Triple, Any] = field(default_factory=dict, compare=False)

    def __len__(self) -> int:
        return len(self.triples)

    def __contains__(self, t: Triple) -> bool:
        return t in self.triples

    @cached_property
    def sorted_triples(self) -> tuple[Triple, ...]:
        return tuple(sorted(self.triples, key=Triple.sort_key))

    def match(
        self,
        s: Optional[Iri] = None,
        p: Optional[Iri] = None,
        o: Optional[Term] = None,
    ) -> list[Triple]:
        """All triples matching the bound positions, in (s, p, o) order."""
        out: list[Triple]
        if s is not None and p is not None and o is not None:
            t = Triple(s, p, o)
            return [t] if t in self.triples else []
        if s is not None and p is not None:
            out = [Triple(s, p, obj) for obj in self.spo.get(s, {}).get(p, ())]
        elif s is not None and o is not None:
            out = [Triple(s, pred, o) for pred in self.osp.get(o, {}).get(s, ())]
        elif p is not None and o is not None:
            out = [Triple(subj, p, o) for subj in self.pos.get(p, {}).get(o, ())]
        elif s is not None:
            out = [Triple(s, pred, obj) for pred, objs in self.spo.get(s, {}).items() for obj in objs]
        elif p is not None:
            out = [Triple(subj, p, obj) for obj, subjs in self.pos.get(p, {}).items() for subj in subjs]
        elif o is not None:
            out = [Triple(subj, pred, o) for subj, preds in self.osp.get(o, {}).items() for pred in preds]
        else:
            return list(self.sorted_triples)
        out.sort(key=Triple.sort_key)
        return out

    def estimate(
        self,
        s: Optional[Iri] = None,
        p: Optional[Iri] = None,
        o: Optional[Term] = None,
    ) -> int:
        """Cheap upper-bound match count for join planning."""
        if s is not None and p is not None and o is not None:
            return 1 if Triple(s, p, o) in self.triples else 0
        if s is not None and p is not None:
            return len(self.spo.get(s, {}).get(p, ()))
        if s is not None and o is not None:
            return len(self.osp.get(o, {}).get(s, ()))
        if p is not None and o is not None:
            return len(self.pos.get(p, {}).get(o, ()))
        if s is not None:
            return sum(len(v) for v in self.spo.get(s, {}).values())
        if p is not None:
            return sum(len(v) for v in self.pos.get(p, {}).values())
        if o is not None:
            return sum(len(v) for v in self.osp.get(o, {}).values())
        return len(self.triples)

    def iter_spo(self) -> Iterator[Triple]:
        for s in self.spo:
            for p, objs in self.spo[s].items():
                for o in objs:
                    yield Triple(s, p, o)

    def iter_pos(self) -> Iterator[Triple]:
        for p in self.pos:
            for o, subjs in self.pos[p].items():
                for s in subjs:
                    yield Triple(s, p, o)

    def iter_osp(self) -> Iterator[Triple]:
        for o in self.osp:
            for s, preds in self.osp[o].items():
                for p in preds:
                    yield Triple(s, p, o)

    def subject_iris(self) -> list[Iri]:
        return sorted(self.spo.keys(), key=Iri.sort_key)

    def terms(self) -> set[Term]:
        out: set[Term] = set()
        for t in self.triples:
            out.add(t.subject)
            out.add(t.predicate)
            out.add(t.object)
        return out

    def types_of(self, iri: Iri) -> set[Iri]:
        rdf_type = Iri(RDF_TYPE)
        return {o for o in self.spo.get(iri, {}).get(rdf_type, ()) if isinstance(o, Iri)}

    def first_literal(self, s: Iri, p: Iri) -> Optional[Literal]:
        lits = sorted(
            (o for o in self.spo.get(s, {}).get(p, ()) if isinstance(o, Literal)),
            key=Literal.sort_key,
        )
        return lits[0] if lits else None

    def label_of(self, iri: Iri) -> Optional[str]:
        lit = self.first_literal(iri, Iri(RDFS_LABEL))
        return lit.lexical if lit else None

    def entity_record(self, iri: Iri) -> EntityRecord:
        """Assemble the display record for one IRI; empty if it occurs nowhere."""
        rdf_type = Iri(RDF_TYPE)
        types: list[Iri] = []
        literals: list[tuple[Iri, Literal]] = []
        outgoing: list[tuple[Iri, Iri]] = []
        for t in self.match(s=iri):
            if t.predicate == rdf_type and isinstance(t.object, Iri):
                types.append(t.object)
            elif isinstance(t.object, Literal):
                literals.append((t.predicate, t.object))
            else:
                outgoing.append((t.predicate, t.object))
        incoming = [(t.predicate, t.subject) for t in self.match(o=iri)]
        incoming.sort(key=lambda pair: (pair[0].value, pair[1].value))
        label = next((lit.lexical for p, lit in literals if p.value == RDFS_LABEL), None)
        description = next(
            (lit.lexical for p, lit in literals if p.value == RDFS_COMMENT), None
        )
        return EntityRecord(
            iri=iri,
            types=tuple(sorted(types, key=Iri.sort_key)),
            label=label,
            description=description,
            literal_attributes=tuple(literals),
            outgoing=tuple(outgoing),
            incoming=tuple(incoming),
        )


def empty_snapshot(prefixes: Optional[Mapping[str, str]] = None) -> GraphSnapshot:
    return TripleStore(prefixes).freeze()
