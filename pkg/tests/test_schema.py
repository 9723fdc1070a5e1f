import pytest

from msokg.rdf import Iri, TripleStore
from msokg.schema import (
    DEFAULT_NAMESPACE,
    Ontology,
    PropertyKind,
    SchemaError,
    SchemaErrorKind,
    builtin_schema,
    check_schema,
    schema_from_triples,
    schema_to_triples,
    SCHEMA_FILE_PREFIXES,
)
from msokg.turtle import parse_turtle, serialize_turtle

from conftest import MMO, ROOT, SCHEMA_TTL


@pytest.fixture(scope="module")
def builtin():
    return builtin_schema()


class TestBuiltinSchema:
    def test_class_and_property_counts(self, builtin):
        assert len(builtin.classes) == 10
        assert len(builtin.properties) == 28
        assert len(builtin.annotation_predicates) == 4

    def test_ontology_partition(self, builtin):
        mathmoddb = {c.iri.local_name() for c in builtin.classes if c.ontology is Ontology.MATHMODDB}
        algodata = {c.iri.local_name() for c in builtin.classes if c.ontology is Ontology.ALGODATA}
        assert mathmoddb == {
            "ApplicationDomain",
            "ApplicationProblem",
            "MathematicalModel",
            "MathematicalFormulation",
            "Quantity",
        }
        assert algodata == {
            "AlgorithmicProblem",
            "Algorithm",
            "Software",
            "Benchmark",
            "Publication",
        }

    def test_every_object_property_pairs_with_its_inverse(self, builtin):
        # a perfect matching: 14 two-cycles covering all 28 properties
        seen = set()
        for p in builtin.properties:
            assert p.kind is PropertyKind.OBJECT
            assert p.inverse_of is not None
            q = builtin.property_def(p.inverse_of)
            assert q is not None, f"{p.iri.value} names a missing inverse"
            assert q.inverse_of == p.iri
            assert q.domain == p.range and q.range == p.domain
            seen.add(frozenset({p.iri, q.iri}))
        assert len(seen) == 14

    def test_transitive_properties(self, builtin):
        transitive = {p.iri.local_name() for p in builtin.properties if p.transitive}
        assert transitive == {
            "generalizedBy",
            "generalizes",
            "specializesModel",
            "specializedByModel",
            "specializesAlgorithm",
            "specializedByAlgorithm",
        }
        for p in builtin.properties:
            if p.transitive:
                assert p.domain == p.range

    def test_bridge_property(self, builtin):
        bridge = builtin.property_by_local_name("usesAlgorithmicProblem")
        assert bridge is not None
        assert bridge.domain == Iri(MMO + "MathematicalModel")
        assert bridge.range == Iri(MMO + "AlgorithmicProblem")
        assert bridge.inverse_of == Iri(MMO + "usedByModelProblem")

    def test_domains_and_ranges_are_declared_classes(self, builtin):
        class_iris = {c.iri for c in builtin.classes}
        for p in builtin.properties:
            assert p.domain in class_iris
            assert p.range in class_iris

    def test_annotation_predicates(self, builtin):
        locals_ = sorted(a.local_name() for a in builtin.annotation_predicates)
        assert locals_ == ["comment", "externalId", "formulaLatex", "label"]

    def test_lookup_helpers(self, builtin):
        assert builtin.class_by_local_name("Algorithm").iri == Iri(MMO + "Algorithm")
        assert builtin.class_by_local_name("NoSuchClass") is None
        assert builtin.property_by_local_name("solves").label == "solves"
        assert builtin.is_annotation(Iri("http://www.w3.org/2000/01/rdf-schema#label"))

    def test_custom_namespace(self):
        ns = "https://kg.example.net/vocab#"
        schema = builtin_schema(ns)
        check_schema(schema)
        assert schema.class_by_local_name("Algorithm").iri == Iri(ns + "Algorithm")


class TestCheckSchema:
    def test_builtin_passes(self, builtin):
        check_schema(builtin)

    def _broken(self, builtin, **replacements):
        import dataclasses

        properties = []
        for p in builtin.properties:
            if p.iri.local_name() in replacements:
                properties.append(dataclasses.replace(p, **replacements[p.iri.local_name()]))
            else:
                properties.append(p)
        return dataclasses.replace(builtin, properties=tuple(properties))

    def test_dangling_domain(self, builtin):
        # keep the inverse mirror intact so only the dangling class fires
        schema = self._broken(
            builtin,
            solves={"domain": Iri(MMO + "Ghost")},
            solvedBy={"range": Iri(MMO + "Ghost")},
        )
        with pytest.raises(SchemaError) as info:
            check_schema(schema)
        assert info.value.kind is SchemaErrorKind.DANGLING_DOMAIN_RANGE

    def test_asymmetric_inverse(self, builtin):
        schema = self._broken(
            builtin, solves={"inverse_of": Iri(MMO + "models")}
        )
        with pytest.raises(SchemaError) as info:
            check_schema(schema)
        assert info.value.kind is SchemaErrorKind.ASYMMETRIC_INVERSE

    def test_transitive_needs_matching_domain_range(self, builtin):
        schema = self._broken(
            builtin, specializesModel={"range": Iri(MMO + "Quantity")}
        )
        with pytest.raises(SchemaError):
            check_schema(schema)

    def test_duplicate_iri(self, builtin):
        import dataclasses

        schema = dataclasses.replace(
            builtin, properties=builtin.properties + (builtin.properties[0],)
        )
        with pytest.raises(SchemaError) as info:
            check_schema(schema)
        assert info.value.kind is SchemaErrorKind.DUPLICATE_IRI


class TestSchemaFiles:
    def test_shipped_file_matches_builtin(self, builtin):
        doc = parse_turtle(SCHEMA_TTL.read_text(encoding="utf-8"))
        assert schema_from_triples(doc) == builtin

    def test_shipped_file_is_canonical_serialization(self, builtin):
        store = TripleStore(SCHEMA_FILE_PREFIXES)
        store.insert_all(schema_to_triples(builtin))
        assert serialize_turtle(store.freeze()) == SCHEMA_TTL.read_text(encoding="utf-8")

    def test_bundled_copy_stays_in_sync(self):
        bundled = ROOT / "src" / "msokg" / "data" / "mso.ttl"
        assert bundled.read_bytes() == SCHEMA_TTL.read_bytes()

    def test_seed_copies_stay_in_sync(self):
        bundled = ROOT / "src" / "msokg" / "data" / "xrct.ttl"
        assert bundled.read_bytes() == (ROOT / "seed" / "xrct.ttl").read_bytes()

    def test_triples_round_trip(self, builtin):
        doc = parse_turtle(SCHEMA_TTL.read_text(encoding="utf-8"))
        again = schema_to_triples(schema_from_triples(doc))
        assert set(again) == set(doc.triples)

    def test_default_namespace_constant(self):
        assert DEFAULT_NAMESPACE == MMO
