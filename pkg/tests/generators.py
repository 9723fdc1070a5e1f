"""Seeded random generators for graphs and queries used across tests.

Everything takes an explicit random.Random so failures reproduce from
the seed alone.
"""

from __future__ import annotations

import random
from typing import Optional

from msokg.query import (
    ContainsFilter,
    EqualsFilter,
    QueryAst,
    TriplePattern,
    Var,
)
from msokg.rdf import RDF_TYPE, RDFS_COMMENT, RDFS_LABEL, Iri, Literal, Triple, TripleStore
from msokg.schema import Schema, builtin_schema

GEN_NS = "https://example.org/mardi/gen#"


def random_instance_graph(
    rng: random.Random,
    schema: Optional[Schema] = None,
    max_entities: int = 30,
    max_edges: int = 45,
    label_chance: float = 0.4,
) -> list[Triple]:
    """Schema-conformant instance data: typed entities plus object-property
    edges whose endpoints satisfy the declared domain and range."""
    schema = schema or builtin_schema()
    rdf_type = Iri(RDF_TYPE)
    label = Iri(RDFS_LABEL)
    comment = Iri(RDFS_COMMENT)

    triples: list[Triple] = []
    by_class: dict[Iri, list[Iri]] = {}
    for i in range(rng.randint(1, max_entities)):
        cd = rng.choice(schema.classes)
        entity = Iri(f"{GEN_NS}e{i}")
        by_class.setdefault(cd.iri, []).append(entity)
        triples.append(Triple(entity, rdf_type, cd.iri))
        if rng.random() < label_chance:
            triples.append(Triple(entity, label, Literal(f"{cd.label.lower()} {i}")))
        if rng.random() < label_chance / 2:
            triples.append(Triple(entity, comment, Literal(f"generated entity {i}")))

    properties = schema.object_properties()
    for _ in range(rng.randint(0, max_edges)):
        pd = rng.choice(properties)
        subjects = by_class.get(pd.domain)
        objects = by_class.get(pd.range)
        if subjects and objects:
            triples.append(Triple(rng.choice(subjects), pd.iri, rng.choice(objects)))
    return triples


_IRI_POOL = [f"{GEN_NS}n{i}" for i in range(12)] + [
    "https://example.org/other/path",
    "urn:example:abc",
]
_LEXICAL_POOL = [
    "plain",
    "two words",
    'quote " inside',
    "back\\slash",
    "tab\there",
    "line\nbreak",
    "",
    "Grüße",
    "0042",
]
_DATATYPES = [
    "http://www.w3.org/2001/XMLSchema#string",
    "http://www.w3.org/2001/XMLSchema#integer",
]
_LANGS = ["en", "de", "en-GB"]


def random_term(rng: random.Random, literal_chance: float = 0.4):
    if rng.random() < literal_chance:
        lexical = rng.choice(_LEXICAL_POOL)
        roll = rng.random()
        if roll < 0.2:
            return Literal(lexical, lang=rng.choice(_LANGS))
        if roll < 0.4:
            return Literal(lexical, datatype=rng.choice(_DATATYPES))
        return Literal(lexical)
    return Iri(rng.choice(_IRI_POOL))


def random_free_graph(rng: random.Random, max_triples: int = 40) -> list[Triple]:
    """Arbitrary triples over small pools, not schema-conformant; exercises
    serialization corners (escapes, tags, datatypes, shared terms)."""
    triples = []
    for _ in range(rng.randint(0, max_triples)):
        s = Iri(rng.choice(_IRI_POOL))
        p = Iri(rng.choice(_IRI_POOL[:6]))
        triples.append(Triple(s, p, random_term(rng)))
    return triples


def freeze_graph(triples, prefixes=None):
    store = TripleStore(prefixes or {"gen": GEN_NS})
    store.insert_all(triples)
    return store.freeze()


def random_bgp(rng: random.Random, snapshot) -> QueryAst:
    """A random query of at most 3 patterns and 3 variables whose constants
    are drawn from the snapshot's own terms (plus rare misses)."""
    iris = sorted(
        {t.subject for t in snapshot.triples}
        | {t.predicate for t in snapshot.triples}
        | {t.object for t in snapshot.triples if isinstance(t.object, Iri)},
        key=Iri.sort_key,
    )
    literals = sorted(
        {t.object for t in snapshot.triples if not isinstance(t.object, Iri)},
        key=Literal.sort_key,
    )
    var_names = ["a", "b", "c"][: rng.randint(1, 3)]

    def pick_term(position: str):
        if rng.random() < 0.45:
            return Var(rng.choice(var_names))
        if position == "object" and literals and rng.random() < 0.3:
            return rng.choice(literals)
        if iris and rng.random() > 0.05:
            return rng.choice(iris)
        return Iri(f"{GEN_NS}missing")

    patterns = tuple(
        TriplePattern(pick_term("subject"), pick_term("predicate"), pick_term("object"))
        for _ in range(rng.randint(1, 3))
    )
    used = []
    for p in patterns:
        for name in p.variables():
            if name not in used:
                used.append(name)
    if not used:
        # a query with no variables is legal only under '*'; force one in
        patterns = patterns[:-1] + (
            TriplePattern(Var("a"), patterns[-1].predicate, patterns[-1].object),
        )
        used = ["a"]

    filters = ()
    if rng.random() < 0.25:
        var = rng.choice(used)
        if rng.random() < 0.5:
            filters = (ContainsFilter(var, rng.choice(["e", "gen", "0", "zzz"])),)
        else:
            target = rng.choice(iris) if iris else Iri(f"{GEN_NS}missing")
            filters = (EqualsFilter(var, target),)

    if rng.random() < 0.5:
        projection = None  # '*'
    else:
        chosen = rng.sample(used, rng.randint(1, len(used)))
        projection = tuple(sorted(chosen, key=used.index))
    return QueryAst(
        distinct=rng.random() < 0.3,
        projection=projection,
        patterns=patterns,
        filters=filters,
    )
