import itertools
import random

import pytest

from msokg.query import (
    ContainsFilter,
    EqualsFilter,
    EvaluationError,
    EvaluationErrorKind,
    InvalidQuery,
    LitTerm,
    MatchRank,
    PrefixedName,
    QueryAst,
    QueryParseError,
    QueryParseErrorKind,
    TriplePattern,
    Var,
    evaluate,
    keyword_search,
    parse_query,
)
from msokg.rdf import RDF_TYPE, Iri, Literal, Triple, empty_snapshot

from conftest import EX, MMO
from generators import freeze_graph, random_bgp, random_instance_graph
from oracles import enumerate_query


def iri(local: str) -> Iri:
    return Iri(EX + local)


class TestParse:
    def test_minimal_query(self):
        ast = parse_query("SELECT ?x WHERE { ?x a mmo:Algorithm }")
        assert ast.projection == ("x",)
        assert not ast.distinct
        assert ast.patterns == (
            TriplePattern(Var("x"), Iri(RDF_TYPE), PrefixedName("mmo", "Algorithm")),
        )
        assert ast.limit is None and ast.offset is None

    def test_keywords_are_case_insensitive(self):
        ast = parse_query("select distinct ?x where { ?x a mmo:Algorithm } limit 3 offset 1")
        assert ast.distinct and ast.limit == 3 and ast.offset == 1

    def test_two_patterns_with_limit(self):
        ast = parse_query(
            "SELECT ?m ?a WHERE { ?m mmo:usesAlgorithmicProblem ?p . "
            "?a mmo:solves ?p } LIMIT 10"
        )
        assert len(ast.patterns) == 2
        assert ast.projection == ("m", "a")
        assert ast.limit == 10

    def test_star_projection(self):
        ast = parse_query("SELECT * WHERE { ?s ?p ?o }")
        assert ast.projection is None
        assert ast.pattern_variables() == ["s", "p", "o"]

    def test_full_iri_and_literal_terms(self):
        ast = parse_query(
            f'SELECT ?s WHERE {{ ?s <{MMO}externalId> "wikidata:Q20665529" }}'
        )
        pattern = ast.patterns[0]
        assert pattern.predicate == Iri(MMO + "externalId")
        assert pattern.object == LitTerm("wikidata:Q20665529")

    def test_typed_and_tagged_literals(self):
        ast = parse_query(
            'SELECT ?s WHERE { ?s ?p "x"@en . ?s ?q "1"^^xsd:integer }'
        )
        assert ast.patterns[0].object == LitTerm("x", lang="en")
        assert ast.patterns[1].object == LitTerm("1", datatype=PrefixedName("xsd", "integer"))

    def test_filters(self):
        ast = parse_query(
            'SELECT ?s WHERE { ?s ?p ?o . FILTER CONTAINS(?o, "frac") . '
            "FILTER (?s = mmo:XRay) }"
        )
        assert ast.filters == (
            ContainsFilter("o", "frac"),
            EqualsFilter("s", PrefixedName("mmo", "XRay")),
        )

    def test_trailing_dot_after_last_pattern(self):
        ast = parse_query("SELECT ?s WHERE { ?s ?p ?o . }")
        assert len(ast.patterns) == 1

    def error(self, text: str) -> QueryParseError:
        with pytest.raises(QueryParseError) as info:
            parse_query(text)
        return info.value

    def test_unknown_projected_variable(self):
        err = self.error("SELECT ?x WHERE { ?y a mmo:Algorithm }")
        assert err.kind is QueryParseErrorKind.UNKNOWN_VARIABLE

    def test_unknown_filter_variable(self):
        err = self.error('SELECT ?y WHERE { ?y ?p ?o . FILTER CONTAINS(?z, "x") }')
        assert err.kind is QueryParseErrorKind.UNKNOWN_VARIABLE

    def test_unexpected_token_has_position(self):
        err = self.error("SELECT ?x WHERE {")
        assert err.kind is QueryParseErrorKind.UNEXPECTED_TOKEN
        assert err.line == 1 and err.column == 18

    def test_missing_select(self):
        assert self.error("ASK { ?s ?p ?o }").kind is QueryParseErrorKind.UNEXPECTED_TOKEN

    def test_literal_in_subject_position_rejected(self):
        err = self.error('SELECT ?p WHERE { "x" ?p ?o }')
        assert err.kind is QueryParseErrorKind.UNEXPECTED_TOKEN

    def test_bad_filters(self):
        assert self.error(
            'SELECT ?s WHERE { ?s ?p ?o . FILTER CONTAINS(mmo:x, "y") }'
        ).kind is QueryParseErrorKind.BAD_FILTER
        assert self.error(
            "SELECT ?s WHERE { ?s ?p ?o . FILTER (?s = ?o) }"
        ).kind is QueryParseErrorKind.BAD_FILTER
        assert self.error(
            'SELECT ?s WHERE { ?s ?p ?o . FILTER CONTAINS(?s, "x"@en) }'
        ).kind is QueryParseErrorKind.BAD_FILTER

    def test_trailing_input_rejected(self):
        err = self.error("SELECT ?s WHERE { ?s ?p ?o } garbage")
        assert err.kind is QueryParseErrorKind.UNEXPECTED_TOKEN

    def test_limit_requires_integer(self):
        err = self.error("SELECT ?s WHERE { ?s ?p ?o } LIMIT lots")
        assert err.kind is QueryParseErrorKind.UNEXPECTED_TOKEN


class TestEvaluate:
    def test_algorithms_on_seed(self, seed_snapshot):
        table = evaluate(parse_query("SELECT ?a WHERE { ?a a mmo:Algorithm }"), seed_snapshot)
        assert table.variables == ("a",)
        assert [row[0] for row in table.rows] == [
            iri("AlgebraicReconstructionTechnique"),
            iri("FilteredBackProjection"),
        ]

    def test_models_on_seed(self, seed_snapshot):
        table = evaluate(parse_query("SELECT ?m ?p WHERE { ?m mmo:models ?p }"), seed_snapshot)
        assert table.rows == ((iri("XRayTransform"), iri("MicrofractureDetection")),)

    def test_join_across_bridge(self, seed_snapshot):
        table = evaluate(
            parse_query(
                "SELECT ?m ?a WHERE { ?m mmo:usesAlgorithmicProblem ?p . "
                "?a mmo:solves ?p } LIMIT 10"
            ),
            seed_snapshot,
        )
        assert set(table.rows) == {
            (iri("XRayTransform"), iri("AlgebraicReconstructionTechnique")),
            (iri("XRayTransform"), iri("FilteredBackProjection")),
        }

    def test_empty_snapshot_has_no_rows(self):
        table = evaluate(parse_query("SELECT ?s WHERE { ?s ?p ?o }"), empty_snapshot())
        assert table.rows == ()

    def test_unknown_prefix_raises(self, seed_snapshot):
        with pytest.raises(EvaluationError) as info:
            evaluate(parse_query("SELECT ?x WHERE { ?x a nope:Thing }"), seed_snapshot)
        assert info.value.kind is EvaluationErrorKind.UNKNOWN_PREFIX

    def test_repeated_variable_must_agree(self, schema):
        triples = random_instance_graph(random.Random(41), max_entities=10)
        p = Iri(MMO + "specializesModel")
        snapshot = freeze_graph(triples + [Triple(iri("loop"), p, iri("loop"))])
        ast = QueryAst(
            distinct=False,
            projection=("x",),
            patterns=(TriplePattern(Var("x"), p, Var("x")),),
            filters=(),
        )
        table = evaluate(ast, snapshot)
        assert all(row == (iri("loop"),) for row in table.rows)

    def test_distinct_is_identity(self, seed_snapshot):
        plain = evaluate(parse_query("SELECT ?p WHERE { ?s mmo:solves ?p }"), seed_snapshot)
        distinct = evaluate(
            parse_query("SELECT DISTINCT ?p WHERE { ?s mmo:solves ?p }"), seed_snapshot
        )
        assert plain.rows == distinct.rows == ((iri("XRayInversion"),),)

    def test_pattern_order_is_irrelevant(self, seed_snapshot):
        bodies = [
            "?m mmo:usesAlgorithmicProblem ?p",
            "?a mmo:solves ?p",
            "?a a mmo:Algorithm",
        ]
        results = set()
        for order in itertools.permutations(bodies):
            text = "SELECT ?m ?a WHERE { " + " . ".join(order) + " }"
            results.add(evaluate(parse_query(text), seed_snapshot).rows)
        assert len(results) == 1

    def test_limit_offset_window(self, seed_snapshot):
        full = evaluate(parse_query("SELECT ?s WHERE { ?s a ?t }"), seed_snapshot)
        for limit in (1, 2, 5, 50):
            for offset in (0, 1, 3, 99):
                text = f"SELECT ?s WHERE {{ ?s a ?t }} LIMIT {limit} OFFSET {offset}"
                window = evaluate(parse_query(text), seed_snapshot)
                assert window.rows == full.rows[offset : offset + limit]

    def test_contains_filter_on_iri_and_literal(self, seed_snapshot):
        by_iri = evaluate(
            parse_query('SELECT ?a WHERE { ?a a mmo:Algorithm . FILTER CONTAINS(?a, "Filtered") }'),
            seed_snapshot,
        )
        assert by_iri.rows == ((iri("FilteredBackProjection"),),)
        by_literal = evaluate(
            parse_query('SELECT ?o WHERE { ?s rdfs:label ?o . FILTER CONTAINS(?o, "projection") }'),
            seed_snapshot,
        )
        assert by_literal.rows == ((Literal("filtered back projection"),),)

    def test_equals_filter(self, seed_snapshot):
        table = evaluate(
            parse_query(
                "SELECT ?p WHERE { ?a mmo:solves ?p . FILTER (?a = ex:FilteredBackProjection) }"
            ),
            seed_snapshot,
        )
        assert table.rows == ((iri("XRayInversion"),),)

    def test_literal_object_constant(self, seed_snapshot):
        table = evaluate(
            parse_query('SELECT ?s WHERE { ?s mmo:externalId "wikidata:Q20665529" }'),
            seed_snapshot,
        )
        assert table.rows == ((iri("FilteredBackProjection"),),)

    def test_star_uses_first_occurrence_order(self, seed_snapshot):
        table = evaluate(
            parse_query("SELECT * WHERE { ?a mmo:solves ?p }"), seed_snapshot
        )
        assert table.variables == ("a", "p")

    def test_rows_are_sorted(self, seed_snapshot):
        table = evaluate(parse_query("SELECT ?s ?o WHERE { ?s ?p ?o }"), seed_snapshot)
        keys = [tuple(t.sort_key() for t in row) for row in table.rows]
        assert keys == sorted(keys)

    def test_matches_exhaustive_oracle(self, schema):
        rng = random.Random(42)
        for case in range(60):
            triples = random_instance_graph(rng, max_entities=6, max_edges=10, label_chance=0.3)
            snapshot = freeze_graph(triples)
            ast = random_bgp(rng, snapshot)
            got = set(evaluate(ast, snapshot).rows)
            expected = enumerate_query(ast, snapshot)
            assert got == expected, f"case {case} diverged: {ast}"


class TestKeywordSearch:
    def test_substring_hit_on_seed(self, seed_snapshot):
        hits = keyword_search(seed_snapshot, "back projection", 10)
        assert hits[0].iri == iri("FilteredBackProjection")
        assert hits[0].rank is MatchRank.SUBSTRING
        assert hits[0].match_field == "label"

    def test_case_insensitive_prefix(self, seed_snapshot):
        hits = keyword_search(seed_snapshot, "CIVIL", 10)
        assert [h.iri for h in hits] == [iri("CivilEngineering")]
        assert hits[0].rank is MatchRank.PREFIX

    def test_exact_match_outranks_prefix_and_substring(self):
        from msokg.rdf import RDFS_LABEL, Triple, TripleStore

        store = TripleStore({"ex": EX})
        store.insert(Triple(iri("A"), Iri(RDFS_LABEL), Literal("heat")))
        store.insert(Triple(iri("B"), Iri(RDFS_LABEL), Literal("heat equation")))
        store.insert(Triple(iri("C"), Iri(RDFS_LABEL), Literal("no heat here")))
        hits = keyword_search(store.freeze(), "Heat", 10)
        assert [(h.iri, h.rank) for h in hits] == [
            (iri("A"), MatchRank.EXACT),
            (iri("B"), MatchRank.PREFIX),
            (iri("C"), MatchRank.SUBSTRING),
        ]

    def test_ties_break_by_iri(self):
        from msokg.rdf import RDFS_LABEL, Triple, TripleStore

        store = TripleStore({"ex": EX})
        for name in ("Zebra", "Aardvark"):
            store.insert(Triple(iri(name), Iri(RDFS_LABEL), Literal("same label")))
        hits = keyword_search(store.freeze(), "same", 10)
        assert [h.iri for h in hits] == [iri("Aardvark"), iri("Zebra")]

    def test_description_matches_and_label_fallback(self):
        from msokg.rdf import RDFS_COMMENT, Triple, TripleStore

        store = TripleStore({"ex": EX})
        store.insert(
            Triple(iri("OnlyComment"), Iri(RDFS_COMMENT), Literal("background in tomography"))
        )
        hits = keyword_search(store.freeze(), "tomography", 10)
        assert hits == [
            type(hits[0])(
                iri=iri("OnlyComment"),
                label="OnlyComment",
                match_field="description",
                rank=MatchRank.SUBSTRING,
            )
        ]

    def test_empty_query_rejected(self, seed_snapshot):
        with pytest.raises(InvalidQuery):
            keyword_search(seed_snapshot, "   ", 10)

    def test_limit_truncates(self, seed_snapshot):
        assert len(keyword_search(seed_snapshot, "e", 3)) == 3

    def test_hits_genuinely_contain_query(self, seed_snapshot):
        from msokg.rdf import RDFS_COMMENT, RDFS_LABEL

        for query in ("transform", "EQUATION", "radiant", "x"):
            for hit in keyword_search(seed_snapshot, query, 50):
                field = Iri(RDFS_LABEL) if hit.match_field == "label" else Iri(RDFS_COMMENT)
                lit = seed_snapshot.first_literal(hit.iri, field)
                values = [
                    t.object.lexical
                    for t in seed_snapshot.match(s=hit.iri, p=field)
                    if isinstance(t.object, Literal)
                ]
                assert any(query.casefold() in v.casefold() for v in values), (query, hit)
                assert lit is not None
