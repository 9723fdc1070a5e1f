"""HTTP/JSON facade over the engine: entity browsing, search, queries.

The core is transport-free: :class:`KgService` routes method + request
target to JSON responses and can be exercised without sockets.
:class:`KgHttpServer` wraps it in a threading stdlib server. All state
lives in one immutable :class:`ServiceState`; reloads build a complete
replacement and publish it with a single attribute assignment, so
concurrent readers always observe one consistent snapshot.
"""

from __future__ import annotations

import json
import sys
import threading
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Any, Mapping, Optional, Sequence
from urllib.parse import parse_qs, unquote

from .dataset import load_dataset
from .query import (
    EvaluationError,
    InvalidQuery,
    QueryParseError,
    evaluate,
    keyword_search,
    parse_query,
)
from .rdf import GraphSnapshot, Iri, Literal, TermError, Triple, expand_curie
from .reasoning import InferenceStats, NotInGraph, explain
from .schema import Schema
from .traversal import CompetencyKind, NotAChainClass, competency, mso_chains, neighbors

DEFAULT_LIMIT = 50
MAX_LIMIT = 500

_STATUS_OF_CODE = {
    "NOT_FOUND": 404,
    "INVALID_QUERY": 400,
    "PARSE_ERROR": 400,
    "INVALID_PARAM": 400,
    "INTERNAL": 500,
}


class ApiError(Exception):
    """Error response with a machine-readable code; code fixes the status."""

    def __init__(self, code: str, message: str, detail: Optional[Any] = None) -> None:
        if code not in _STATUS_OF_CODE:
            raise ValueError(f"unknown error code {code!r}")
        super().__init__(message)
        self.code = code
        self.http_status = _STATUS_OF_CODE[code]
        self.message = message
        self.detail = detail

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "error": {"code": self.code, "message": self.message}
        }
        if self.detail is not None:
            out["error"]["detail"] = self.detail
        return out


@dataclass(frozen=True)
class ServiceState:
    """One atomic unit: everything a request may consult."""

    snapshot: GraphSnapshot
    schema: Schema
    stats: InferenceStats
    dataset_paths: tuple[str, ...]
    started_at: str


def _parse_term_param(text: str, prefixes: Mapping[str, str]):
    """Parse an o= value: a quoted literal with optional @lang/^^type,
    otherwise a CURIE or full IRI."""
    if text.startswith('"'):
        from .query import _tokenize

        try:
            tokens = _tokenize(text)
        except QueryParseError as exc:
            raise ApiError("INVALID_PARAM", f"bad literal: {exc.message}") from exc
        if len(tokens) < 2 or tokens[0].type != "string":
            raise ApiError("INVALID_PARAM", f"bad literal syntax: {text!r}")
        lexical, lang, dtsep = tokens[0].value
        if not dtsep:
            if tokens[1].type != "eof":
                raise ApiError("INVALID_PARAM", f"trailing input in literal: {text!r}")
            return Literal(lexical, lang=lang)
        dt_tok = tokens[1]
        if dt_tok.type == "iriref":
            return Literal(lexical, datatype=str(dt_tok.value))
        if dt_tok.type == "pname":
            prefix, local = dt_tok.value
            ns = prefixes.get(prefix)
            if ns is None:
                raise ApiError("INVALID_PARAM", f"unknown prefix {prefix!r}")
            return Literal(lexical, datatype=ns + local)
        raise ApiError("INVALID_PARAM", f"bad datatype in literal: {text!r}")
    try:
        return expand_curie(text, prefixes)
    except TermError as exc:
        raise ApiError("INVALID_PARAM", f"bad IRI {text!r}: {exc}") from exc


class KgService:
    """Route handler over a swappable immutable state."""

    def __init__(self, state: ServiceState) -> None:
        self._state = state
        self._reload_lock = threading.Lock()

    @classmethod
    def from_files(cls, paths: Sequence[str], schema: Schema) -> "KgService":
        loaded = load_dataset(paths, schema)
        state = ServiceState(
            snapshot=loaded.snapshot,
            schema=schema,
            stats=loaded.stats,
            dataset_paths=loaded.paths,
            started_at=datetime.now(timezone.utc).isoformat(),
        )
        return cls(state)

    @property
    def state(self) -> ServiceState:
        return self._state

    def reload_dataset(self, paths: Optional[Sequence[str]] = None) -> InferenceStats:
        """Reload, swapping state atomically; on failure the old state stays.

        Raises LoadError on parse, validation, or I/O failure.
        """
        with self._reload_lock:
            old = self._state
            use_paths = tuple(paths) if paths is not None else old.dataset_paths
            loaded = load_dataset(use_paths, old.schema)
            self._state = ServiceState(
                snapshot=loaded.snapshot,
                schema=old.schema,
                stats=loaded.stats,
                dataset_paths=loaded.paths,
                started_at=old.started_at,
            )
            return loaded.stats

    # -- request handling ---------------------------------------------------

    def handle(
        self, method: str, target: str, body: Optional[bytes] = None
    ) -> tuple[int, dict[str, Any]]:
        """Dispatch one request; returns (status, JSON-serializable body).

        target is the raw request target: percent-decoding happens per
        path segment, so an encoded slash stays inside its segment.
        """
        state = self._state  # one consistent unit for the whole request
        try:
            path, _, query_string = target.partition("?")
            segments = [unquote(s) for s in path.split("/") if s != ""]
            params = {
                k: vs[0] for k, vs in parse_qs(query_string, keep_blank_values=True).items()
            }
            return self._route(state, method.upper(), segments, params, body)
        except ApiError as exc:
            return exc.http_status, exc.to_json()
        except Exception as exc:  # noqa: BLE001 - boundary: never leak a traceback
            err = ApiError("INTERNAL", f"{type(exc).__name__}: {exc}")
            return err.http_status, err.to_json()

    def _route(
        self,
        state: ServiceState,
        method: str,
        segments: list[str],
        params: Mapping[str, str],
        body: Optional[bytes],
    ) -> tuple[int, dict[str, Any]]:
        if len(segments) >= 1 and segments[0] == "api":
            rest = segments[1:]
            if method == "GET":
                if rest == ["health"]:
                    return 200, self._health(state)
                if rest == ["schema"]:
                    return 200, self._schema(state)
                if rest == ["search"]:
                    return 200, self._search(state, params)
                if rest == ["entities"]:
                    return 200, self._entities(state, params)
                if len(rest) == 2 and rest[0] == "entities":
                    return 200, self._entity(state, rest[1])
                if len(rest) == 3 and rest[0] == "entities" and rest[2] == "chains":
                    return 200, self._chains(state, rest[1])
                if len(rest) == 3 and rest[0] == "entities" and rest[2] == "neighbors":
                    return 200, self._neighbors(state, rest[1], params)
                if rest == ["competency"]:
                    return 200, self._competency(state, params)
                if rest == ["explain"]:
                    return 200, self._explain(state, params)
            if method == "POST" and rest == ["query"]:
                return 200, self._query(state, body)
        raise ApiError("NOT_FOUND", f"no route for {method} /{'/'.join(segments)}")

    # -- route implementations ----------------------------------------------

    def _health(self, state: ServiceState) -> dict[str, Any]:
        stats = state.stats
        return {
            "status": "ok",
            "tripleCounts": {
                "asserted": stats.asserted_count,
                "inferred": stats.inferred_count,
                "total": len(state.snapshot),
            },
            "datasetPaths": list(state.dataset_paths),
            "startedAt": state.started_at,
        }

    def _schema(self, state: ServiceState) -> dict[str, Any]:
        schema = state.schema
        return {
            "prefixes": dict(state.snapshot.prefixes),
            "classes": [
                {
                    "iri": c.iri.value,
                    "label": c.label,
                    "ontology": c.ontology.value,
                }
                for c in schema.classes
            ],
            "properties": [
                {
                    "iri": p.iri.value,
                    "label": p.label,
                    "kind": p.kind.value,
                    "domain": p.domain.value,
                    "range": p.range.value,
                    "inverseOf": p.inverse_of.value if p.inverse_of else None,
                    "transitive": p.transitive,
                }
                for p in schema.properties
            ],
            "annotationPredicates": [a.value for a in schema.annotation_predicates],
        }

    def _int_param(
        self, params: Mapping[str, str], name: str, default: int, maximum: int
    ) -> int:
        raw = params.get(name)
        if raw is None:
            return default
        try:
            value = int(raw)
        except ValueError:
            raise ApiError("INVALID_PARAM", f"{name} must be an integer") from None
        if value < 0:
            raise ApiError("INVALID_PARAM", f"{name} must be non-negative")
        return min(value, maximum)

    def _entity_iri(self, state: ServiceState, text: str) -> Iri:
        try:
            return expand_curie(text, state.snapshot.prefixes)
        except TermError as exc:
            raise ApiError("INVALID_PARAM", f"bad entity IRI {text!r}: {exc}") from exc

    def _search(self, state: ServiceState, params: Mapping[str, str]) -> dict[str, Any]:
        q = params.get("q")
        if q is None:
            raise ApiError("INVALID_PARAM", "missing q parameter")
        limit = self._int_param(params, "limit", 20, MAX_LIMIT)
        try:
            hits = keyword_search(state.snapshot, q, limit)
        except InvalidQuery as exc:
            raise ApiError("INVALID_QUERY", str(exc)) from exc
        return {
            "query": q,
            "hits": [
                {
                    "iri": h.iri.value,
                    "label": h.label,
                    "matchField": h.match_field,
                    "rank": h.rank.value,
                }
                for h in hits
            ],
        }

    def _entities(self, state: ServiceState, params: Mapping[str, str]) -> dict[str, Any]:
        limit = self._int_param(params, "limit", DEFAULT_LIMIT, MAX_LIMIT)
        offset = self._int_param(params, "offset", 0, 10**9)
        subjects = state.snapshot.subject_iris()
        type_param = params.get("type")
        if type_param is not None:
            wanted = self._entity_iri(state, type_param)
            subjects = [s for s in subjects if wanted in state.snapshot.types_of(s)]
        window = subjects[offset : offset + limit]
        return {
            "items": [
                {
                    "iri": s.value,
                    "label": state.snapshot.label_of(s),
                    "types": [t.value for t in sorted(
                        state.snapshot.types_of(s), key=Iri.sort_key
                    )],
                }
                for s in window
            ],
            "total": len(subjects),
            "limit": limit,
            "offset": offset,
        }

    def _entity(self, state: ServiceState, text: str) -> dict[str, Any]:
        iri = self._entity_iri(state, text)
        record = state.snapshot.entity_record(iri)
        if record.is_empty():
            raise ApiError("NOT_FOUND", f"no entity {iri.value}")
        return record.to_json()

    def _chains(self, state: ServiceState, text: str) -> dict[str, Any]:
        iri = self._entity_iri(state, text)
        if state.snapshot.entity_record(iri).is_empty():
            raise ApiError("NOT_FOUND", f"no entity {iri.value}")
        try:
            chains = mso_chains(state.snapshot, state.schema, iri)
        except NotAChainClass as exc:
            raise ApiError("INVALID_PARAM", str(exc)) from exc
        return {"start": iri.value, "chains": [c.to_json() for c in chains]}

    def _neighbors(
        self, state: ServiceState, text: str, params: Mapping[str, str]
    ) -> dict[str, Any]:
        iri = self._entity_iri(state, text)
        direction = params.get("direction", "both")
        try:
            grouped = neighbors(state.snapshot, iri, direction)
        except ValueError as exc:
            raise ApiError("INVALID_PARAM", str(exc)) from exc
        return {
            "iri": iri.value,
            "direction": direction,
            "neighbors": {
                p.value: [o.value for o in endpoints]
                for p, endpoints in grouped.items()
            },
        }

    def _competency(self, state: ServiceState, params: Mapping[str, str]) -> dict[str, Any]:
        kind_name = params.get("kind")
        target_text = params.get("target")
        if kind_name is None or target_text is None:
            raise ApiError("INVALID_PARAM", "kind and target parameters are required")
        try:
            kind = CompetencyKind(kind_name)
        except ValueError:
            valid = ", ".join(k.value for k in CompetencyKind)
            raise ApiError(
                "INVALID_PARAM", f"unknown kind {kind_name!r}; one of: {valid}"
            ) from None
        target = self._entity_iri(state, target_text)
        results = competency(state.snapshot, kind, target, state.schema)
        return {
            "kind": kind.value,
            "target": target.value,
            "results": [i.value for i in results],
        }

    def _query(self, state: ServiceState, body: Optional[bytes]) -> dict[str, Any]:
        if not body:
            raise ApiError("INVALID_PARAM", "missing request body")
        try:
            payload = json.loads(body.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise ApiError("INVALID_PARAM", f"body is not valid JSON: {exc}") from exc
        if not isinstance(payload, dict) or not isinstance(payload.get("query"), str):
            raise ApiError("INVALID_PARAM", 'body must be {"query": "<text>"}')
        try:
            ast = parse_query(payload["query"])
        except QueryParseError as exc:
            raise ApiError(
                "PARSE_ERROR",
                exc.message,
                detail={"kind": exc.kind.value, "line": exc.line, "column": exc.column},
            ) from exc
        try:
            table = evaluate(ast, state.snapshot)
        except EvaluationError as exc:
            raise ApiError(
                "INVALID_QUERY", exc.message, detail={"kind": exc.kind.value}
            ) from exc
        return table.to_json()

    def _explain(self, state: ServiceState, params: Mapping[str, str]) -> dict[str, Any]:
        missing = [name for name in ("s", "p", "o") if params.get(name) is None]
        if missing:
            raise ApiError("INVALID_PARAM", f"missing parameters: {', '.join(missing)}")
        prefixes = state.snapshot.prefixes
        s = self._entity_iri(state, params["s"])
        p = self._entity_iri(state, params["p"])
        o = _parse_term_param(params["o"], prefixes)
        t = Triple(s, p, o)
        try:
            provenance = explain(state.snapshot, t)
        except NotInGraph as exc:
            raise ApiError("NOT_FOUND", str(exc)) from exc
        out = {"triple": t.to_json()}
        out.update(provenance.to_json())
        return out


# -- HTTP wrapper -----------------------------------------------------------


class KgHttpServer:
    """Threaded HTTP server around a KgService."""

    def __init__(
        self,
        service: KgService,
        host: str = "127.0.0.1",
        port: int = 8080,
        cors_origin: str = "*",
        access_log: bool = True,
        log_stream=None,
    ) -> None:
        self.service = service
        self.cors_origin = cors_origin
        self.access_log = access_log
        self.log_stream = log_stream if log_stream is not None else sys.stdout
        handler = self._make_handler()
        self.httpd = ThreadingHTTPServer((host, port), handler)
        self.httpd.daemon_threads = True

    @property
    def address(self) -> tuple[str, int]:
        host, port = self.httpd.server_address[:2]
        return str(host), int(port)

    def serve_forever(self) -> None:
        self.httpd.serve_forever()

    def shutdown(self) -> None:
        self.httpd.shutdown()
        self.httpd.server_close()

    def _log(self, method: str, path: str, status: int, started: float) -> None:
        if not self.access_log:
            return
        line = json.dumps(
            {
                "method": method,
                "path": path,
                "status": status,
                "durationMs": round((time.monotonic() - started) * 1000, 3),
            }
        )
        print(line, file=self.log_stream, flush=True)

    def _make_handler(self) -> type:
        server = self

        class Handler(BaseHTTPRequestHandler):
            protocol_version = "HTTP/1.1"

            def log_message(self, format: str, *args: Any) -> None:
                pass  # structured logging below instead

            def _respond(self, status: int, payload: dict[str, Any]) -> None:
                data = json.dumps(payload, ensure_ascii=False).encode("utf-8")
                self.send_response(status)
                self.send_header("Content-Type", "application/json; charset=utf-8")
                self.send_header("Content-Length", str(len(data)))
                self.send_header("Access-Control-Allow-Origin", server.cors_origin)
                self.end_headers()
                self.wfile.write(data)

            def _handle(self, method: str, body: Optional[bytes]) -> None:
                started = time.monotonic()
                status, payload = server.service.handle(method, self.path, body)
                self._respond(status, payload)
                server._log(method, self.path, status, started)

            def do_GET(self) -> None:
                self._handle("GET", None)

            def do_POST(self) -> None:
                length = int(self.headers.get("Content-Length") or 0)
                body = self.rfile.read(length) if length else b""
                self._handle("POST", body)

            def do_OPTIONS(self) -> None:
                self.send_response(204)
                self.send_header("Access-Control-Allow-Origin", server.cors_origin)
                self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
                self.send_header("Access-Control-Allow-Headers", "Content-Type")
                self.send_header("Content-Length", "0")
                self.end_headers()

        return Handler


def serve(
    paths: Sequence[str],
    schema: Schema,
    host: str = "127.0.0.1",
    port: int = 8080,
    cors_origin: str = "*",
) -> None:
    """Load the dataset and serve until interrupted."""
    service = KgService.from_files(paths, schema)
    server = KgHttpServer(service, host=host, port=port, cors_origin=cors_origin)
    bound_host, bound_port = server.address
    print(
        json.dumps(
            {
                "event": "serving",
                "host": bound_host,
                "port": bound_port,
                "triples": len(service.state.snapshot),
            }
        ),
        flush=True,
    )
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.shutdown()
