from __future__ import annotations

from pathlib import Path

import pytest

from msokg.dataset import load_schema
from msokg.reasoning import materialize
from msokg.turtle import parse_turtle

ROOT = Path(__file__).resolve().parents[1]
SCHEMA_TTL = ROOT / "schema" / "mso.ttl"
SEED_TTL = ROOT / "seed" / "xrct.ttl"

EX = "https://example.org/mardi/xrct#"
MMO = "https://example.org/mardi/mso#"


@pytest.fixture(scope="session")
def schema():
    return load_schema()


@pytest.fixture(scope="session")
def seed_doc():
    return parse_turtle(SEED_TTL.read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def seed_snapshot(seed_doc, schema):
    snapshot, _ = materialize(seed_doc.triples, schema, prefixes=dict(seed_doc.prefixes))
    return snapshot


@pytest.fixture(scope="session")
def seed_stats(seed_doc, schema):
    _, stats = materialize(seed_doc.triples, schema, prefixes=dict(seed_doc.prefixes))
    return stats
