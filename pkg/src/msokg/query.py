"""Structured-query parsing and evaluation plus ranked keyword search.

The query subset: ``SELECT [DISTINCT] (?var+ | *) WHERE { pattern
(. pattern)* (FILTER ...)* } [LIMIT n] [OFFSET n]`` with filters
``CONTAINS(?v, "s")`` and ``?v = term``. Results use set semantics with
a deterministic global sort, so DISTINCT is an identity.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Any, Mapping, Optional, Union

from .rdf import (
    RDF_TYPE,
    RDFS_COMMENT,
    RDFS_LABEL,
    GraphSnapshot,
    Iri,
    Literal,
    Term,
    TermError,
)


class QueryParseErrorKind(enum.Enum):
    UNEXPECTED_TOKEN = "UnexpectedToken"
    UNKNOWN_VARIABLE = "UnknownVariable"
    BAD_FILTER = "BadFilter"


class QueryParseError(Exception):
    def __init__(self, kind: QueryParseErrorKind, line: int, column: int, message: str) -> None:
        super().__init__(f"{kind.value} at {line}:{column}: {message}")
        self.kind = kind
        self.line = line
        self.column = column
        self.message = message


class EvaluationErrorKind(enum.Enum):
    UNKNOWN_PREFIX = "UnknownPrefix"


class EvaluationError(Exception):
    def __init__(self, kind: EvaluationErrorKind, message: str) -> None:
        super().__init__(f"{kind.value}: {message}")
        self.kind = kind
        self.message = message


class InvalidQuery(ValueError):
    """Keyword search rejected the query string."""


@dataclass(frozen=True, slots=True)
class Var:
    name: str


@dataclass(frozen=True, slots=True)
class PrefixedName:
    prefix: str
    local: str


@dataclass(frozen=True, slots=True)
class LitTerm:
    lexical: str
    lang: Optional[str] = None
    datatype: Optional[Union[Iri, PrefixedName]] = None


PatternTerm = Union[Var, Iri, PrefixedName, LitTerm]
ConstTerm = Union[Iri, PrefixedName, LitTerm]


@dataclass(frozen=True, slots=True)
class TriplePattern:
    subject: PatternTerm
    predicate: PatternTerm
    object: PatternTerm

    def variables(self) -> list[str]:
        return [t.name for t in (self.subject, self.predicate, self.object) if isinstance(t, Var)]


@dataclass(frozen=True, slots=True)
class ContainsFilter:
    var: str
    needle: str


@dataclass(frozen=True, slots=True)
class EqualsFilter:
    var: str
    term: ConstTerm


Filter = Union[ContainsFilter, EqualsFilter]


@dataclass(frozen=True)
class QueryAst:
    distinct: bool
    projection: Optional[tuple[str, ...]]  # None means '*'
    patterns: tuple[TriplePattern, ...]
    filters: tuple[Filter, ...]
    limit: Optional[int] = None
    offset: Optional[int] = None

    def pattern_variables(self) -> list[str]:
        seen: list[str] = []
        for p in self.patterns:
            for name in p.variables():
                if name not in seen:
                    seen.append(name)
        return seen


@dataclass(frozen=True)
class BindingTable:
    variables: tuple[str, ...]
    rows: tuple[tuple[Term, ...], ...]

    def to_json(self) -> dict[str, Any]:
        from .rdf import term_to_json

        return {
            "variables": list(self.variables),
            "rows": [[term_to_json(t) for t in row] for row in self.rows],
        }


class MatchRank(enum.Enum):
    EXACT = "exact"
    PREFIX = "prefix"
    SUBSTRING = "substring"


_RANK_ORDER = {MatchRank.EXACT: 0, MatchRank.PREFIX: 1, MatchRank.SUBSTRING: 2}


@dataclass(frozen=True, slots=True)
class SearchHit:
    iri: Iri
    label: str
    match_field: str  # "label" or "description"
    rank: MatchRank


# --- tokenizer -------------------------------------------------------------

_KEYWORDS = {"select", "distinct", "where", "filter", "limit", "offset", "contains"}


@dataclass(frozen=True, slots=True)
class _Tok:
    type: str  # keyword name, or one of: var iriref pname string int punct eof
    value: Any
    line: int
    column: int


def _tokenize(text: str) -> list[_Tok]:
    tokens: list[_Tok] = []
    pos, line, col = 0, 1, 1

    def err(message: str, eline: int, ecol: int) -> QueryParseError:
        return QueryParseError(QueryParseErrorKind.UNEXPECTED_TOKEN, eline, ecol, message)

    def advance() -> str:
        nonlocal pos, line, col
        c = text[pos]
        pos += 1
        if c == "\n":
            line += 1
            col = 1
        else:
            col += 1
        return c

    def peek() -> str:
        return text[pos] if pos < len(text) else ""

    while pos < len(text):
        c = peek()
        if c in " \t\r\n":
            advance()
            continue
        sline, scol = line, col
        if c in "{}().,=*":
            advance()
            tokens.append(_Tok("punct", c, sline, scol))
            continue
        if c == "?":
            advance()
            chars = []
            while peek().isascii() and (peek().isalnum() or peek() == "_"):
                chars.append(advance())
            if not chars:
                raise err("'?' must start a variable name", sline, scol)
            tokens.append(_Tok("var", "".join(chars), sline, scol))
            continue
        if c == "<":
            advance()
            chars = []
            while peek() and peek() != ">":
                if peek().isspace() or peek() == "<":
                    raise err("illegal character in IRI", line, col)
                chars.append(advance())
            if not peek():
                raise err("unterminated IRI", sline, scol)
            advance()
            tokens.append(_Tok("iriref", "".join(chars), sline, scol))
            continue
        if c == '"':
            advance()
            chars = []
            escapes = {'"': '"', "\\": "\\", "n": "\n", "t": "\t"}
            while True:
                if not peek() or peek() == "\n":
                    raise err("unterminated string", sline, scol)
                ch = advance()
                if ch == '"':
                    break
                if ch == "\\":
                    esc = peek()
                    if esc not in escapes:
                        raise err(f"bad escape \\{esc}", line, col)
                    chars.append(escapes[advance()])
                else:
                    chars.append(ch)
            lang = None
            dtsep = False
            if peek() == "@":
                advance()
                lchars = []
                while (nxt := peek()) and nxt.isascii() and (
                    nxt.isalpha() or (lchars and nxt in "-0123456789")
                ):
                    lchars.append(advance())
                if not lchars:
                    raise err("malformed language tag", line, col)
                lang = "".join(lchars)
            elif peek() == "^":
                advance()
                if peek() != "^":
                    raise err("stray '^'", line, col)
                advance()
                dtsep = True
            tokens.append(_Tok("string", ("".join(chars), lang, dtsep), sline, scol))
            continue
        if c.isdigit():
            chars = []
            while peek().isdigit():
                chars.append(advance())
            tokens.append(_Tok("int", int("".join(chars)), sline, scol))
            continue
        if c.isascii() and (c.isalpha() or c in "_:"):
            chars = []
            while (nxt := peek()) and nxt.isascii() and (nxt.isalnum() or nxt in "_-:"):
                chars.append(advance())
            word = "".join(chars)
            if ":" in word:
                prefix, local = word.split(":", 1)
                if ":" in local:
                    raise err(f"malformed prefixed name {word!r}", sline, scol)
                tokens.append(_Tok("pname", (prefix, local), sline, scol))
            elif word.lower() in _KEYWORDS:
                tokens.append(_Tok(word.lower(), word, sline, scol))
            elif word == "a":
                tokens.append(_Tok("a", word, sline, scol))
            else:
                raise err(f"unexpected word {word!r}", sline, scol)
            continue
        raise err(f"unexpected character {c!r}", sline, scol)
    tokens.append(_Tok("eof", None, line, col))
    return tokens


# --- parser ----------------------------------------------------------------


class _QueryParser:
    def __init__(self, text: str) -> None:
        self.tokens = _tokenize(text)
        self.index = 0

    @property
    def tok(self) -> _Tok:
        return self.tokens[self.index]

    def bump(self) -> _Tok:
        tok = self.tok
        if tok.type != "eof":
            self.index += 1
        return tok

    def error(self, message: str, kind: QueryParseErrorKind = QueryParseErrorKind.UNEXPECTED_TOKEN,
              tok: Optional[_Tok] = None) -> QueryParseError:
        tok = tok or self.tok
        return QueryParseError(kind, tok.line, tok.column, message)

    def expect_punct(self, char: str) -> None:
        if self.tok.type == "punct" and self.tok.value == char:
            self.bump()
            return
        raise self.error(f"expected {char!r}")

    def at_punct(self, char: str) -> bool:
        return self.tok.type == "punct" and self.tok.value == char

    def parse(self) -> QueryAst:
        if self.tok.type != "select":
            raise self.error("query must start with SELECT")
        self.bump()
        distinct = False
        if self.tok.type == "distinct":
            distinct = True
            self.bump()
        projection: Optional[list[tuple[str, _Tok]]]
        if self.at_punct("*"):
            self.bump()
            projection = None
        else:
            projection = []
            while self.tok.type == "var":
                tok = self.bump()
                projection.append((str(tok.value), tok))
            if not projection:
                raise self.error("expected projection variables or '*'")
        if self.tok.type != "where":
            raise self.error("expected WHERE")
        self.bump()
        self.expect_punct("{")
        patterns: list[TriplePattern] = []
        filters: list[tuple[Filter, _Tok]] = []
        patterns.append(self.parse_pattern())
        while True:
            if self.at_punct("."):
                self.bump()
                if self.at_punct("}") or self.tok.type == "filter":
                    continue
                patterns.append(self.parse_pattern())
                continue
            break
        while self.tok.type == "filter":
            self.bump()
            filters.append(self.parse_filter())
            if self.at_punct("."):
                self.bump()
        self.expect_punct("}")
        limit = offset = None
        while self.tok.type in ("limit", "offset"):
            which = self.bump().type
            if self.tok.type != "int":
                raise self.error(f"expected an integer after {which.upper()}")
            value = int(self.bump().value)
            if which == "limit":
                limit = value
            else:
                offset = value
        if self.tok.type != "eof":
            raise self.error("trailing input after query")

        ast = QueryAst(
            distinct=distinct,
            projection=tuple(name for name, _ in projection) if projection is not None else None,
            patterns=tuple(patterns),
            filters=tuple(f for f, _ in filters),
            limit=limit,
            offset=offset,
        )
        bound = set(ast.pattern_variables())
        if projection is not None:
            for name, tok in projection:
                if name not in bound:
                    raise self.error(
                        f"?{name} is not bound by any pattern",
                        QueryParseErrorKind.UNKNOWN_VARIABLE, tok,
                    )
        for f, tok in filters:
            if f.var not in bound:
                raise self.error(
                    f"?{f.var} is not bound by any pattern",
                    QueryParseErrorKind.UNKNOWN_VARIABLE, tok,
                )
        return ast

    def parse_term(self, position: str) -> PatternTerm:
        tok = self.tok
        if tok.type == "var":
            self.bump()
            return Var(str(tok.value))
        if tok.type == "iriref":
            self.bump()
            try:
                return Iri(str(tok.value))
            except TermError as exc:
                raise self.error(str(exc), tok=tok) from exc
        if tok.type == "pname":
            self.bump()
            prefix, local = tok.value
            return PrefixedName(prefix, local)
        if tok.type == "a" and position == "predicate":
            self.bump()
            return Iri(RDF_TYPE)
        if tok.type == "string" and position == "object":
            self.bump()
            lexical, lang, dtsep = tok.value
            if dtsep:
                dt = self.parse_term("datatype")
                if not isinstance(dt, (Iri, PrefixedName)):
                    raise self.error("expected datatype IRI after '^^'")
                return LitTerm(lexical, datatype=dt)
            return LitTerm(lexical, lang=lang)
        raise self.error(f"expected a {position} term")

    def parse_pattern(self) -> TriplePattern:
        s = self.parse_term("subject")
        p = self.parse_term("predicate")
        o = self.parse_term("object")
        return TriplePattern(s, p, o)

    def parse_filter(self) -> tuple[Filter, _Tok]:
        if self.tok.type == "contains":
            self.bump()
            self.expect_punct("(")
            if self.tok.type != "var":
                raise self.error("CONTAINS expects a variable",
                                 QueryParseErrorKind.BAD_FILTER)
            var_tok = self.bump()
            self.expect_punct(",")
            if self.tok.type != "string":
                raise self.error("CONTAINS expects a string",
                                 QueryParseErrorKind.BAD_FILTER)
            lexical, lang, dtsep = self.bump().value
            if lang is not None or dtsep:
                raise self.error("CONTAINS needle must be a plain string",
                                 QueryParseErrorKind.BAD_FILTER, var_tok)
            self.expect_punct(")")
            return ContainsFilter(str(var_tok.value), lexical), var_tok
        parens = False
        if self.at_punct("("):
            parens = True
            self.bump()
        if self.tok.type != "var":
            raise self.error("filter must compare a variable",
                             QueryParseErrorKind.BAD_FILTER)
        var_tok = self.bump()
        if not self.at_punct("="):
            raise self.error("expected '=' in filter", QueryParseErrorKind.BAD_FILTER)
        self.bump()
        term = self.parse_term("object")
        if isinstance(term, Var):
            raise self.error("filter right-hand side must be a constant",
                             QueryParseErrorKind.BAD_FILTER, var_tok)
        if parens:
            self.expect_punct(")")
        return EqualsFilter(str(var_tok.value), term), var_tok


def parse_query(text: str) -> QueryAst:
    """Parse a query; raises QueryParseError with line/column on failure."""
    return _QueryParser(text).parse()


# --- evaluation ------------------------------------------------------------


def _resolve(term: PatternTerm, prefixes: Mapping[str, str]) -> Union[Var, Term]:
    if isinstance(term, Var) or isinstance(term, Iri):
        return term
    if isinstance(term, PrefixedName):
        ns = prefixes.get(term.prefix)
        if ns is None:
            raise EvaluationError(
                EvaluationErrorKind.UNKNOWN_PREFIX,
                f"prefix {term.prefix + ':'!r} is not declared in the dataset",
            )
        return Iri(ns + term.local)
    dt = term.datatype
    if dt is not None:
        resolved_dt = _resolve(dt, prefixes)
        assert isinstance(resolved_dt, Iri)
        return Literal(term.lexical, datatype=resolved_dt.value)
    return Literal(term.lexical, lang=term.lang)


def _plan(patterns: list[TriplePattern], snapshot: GraphSnapshot,
          resolved: dict[int, tuple[Union[Var, Term], ...]]) -> list[int]:
    """Greedy static join order: fewest unbound variables first, then the
    smallest index estimate over constant positions."""
    remaining = list(range(len(patterns)))
    bound: set[str] = set()
    order: list[int] = []
    while remaining:
        def cost(i: int) -> tuple[int, int, int]:
            terms = resolved[i]
            unbound = len({t.name for t in terms if isinstance(t, Var) and t.name not in bound})
            consts = [None if isinstance(t, Var) else t for t in terms]
            s, p, o = consts
            estimate = snapshot.estimate(
                s if isinstance(s, Iri) else None,
                p if isinstance(p, Iri) else None,
                o,
            )
            return (unbound, estimate, i)

        best = min(remaining, key=cost)
        remaining.remove(best)
        order.append(best)
        for t in resolved[best]:
            if isinstance(t, Var):
                bound.add(t.name)
    return order


def evaluate(ast: QueryAst, snapshot: GraphSnapshot) -> BindingTable:
    """Set-semantics evaluation by binding propagation over the indexes."""
    resolved: dict[int, tuple[Union[Var, Term], ...]] = {
        i: (
            _resolve(p.subject, snapshot.prefixes),
            _resolve(p.predicate, snapshot.prefixes),
            _resolve(p.object, snapshot.prefixes),
        )
        for i, p in enumerate(ast.patterns)
    }
    resolved_filters: list[tuple[str, Union[str, Term]]] = []
    for f in ast.filters:
        if isinstance(f, ContainsFilter):
            resolved_filters.append((f.var, f.needle))
        else:
            term = _resolve(f.term, snapshot.prefixes)
            assert not isinstance(term, Var)
            resolved_filters.append((f.var, term))

    order = _plan(list(ast.patterns), snapshot, resolved)
    rows: list[dict[str, Term]] = [{}]
    for i in order:
        s_t, p_t, o_t = resolved[i]
        new_rows: list[dict[str, Term]] = []
        for row in rows:
            def value(t: Union[Var, Term]) -> Optional[Term]:
                if isinstance(t, Var):
                    return row.get(t.name)
                return t

            s, p, o = value(s_t), value(p_t), value(o_t)
            candidates = snapshot.match(
                s if isinstance(s, Iri) else None,
                p if isinstance(p, Iri) else None,
                o,
            )
            # A non-IRI term in subject/predicate position can never match.
            if (s is not None and not isinstance(s, Iri)) or (
                p is not None and not isinstance(p, Iri)
            ):
                candidates = []
            for t in candidates:
                extended = dict(row)
                ok = True
                for term, val in ((s_t, t.subject), (p_t, t.predicate), (o_t, t.object)):
                    if isinstance(term, Var):
                        existing = extended.get(term.name)
                        if existing is None:
                            extended[term.name] = val
                        elif existing != val:
                            ok = False
                            break
                if ok:
                    new_rows.append(extended)
        rows = new_rows
        if not rows:
            break

    for var, needle_or_term in resolved_filters:
        if isinstance(needle_or_term, str):
            rows = [
                r for r in rows
                if needle_or_term in (
                    r[var].value if isinstance(r[var], Iri) else r[var].lexical
                )
            ]
        else:
            rows = [r for r in rows if r[var] == needle_or_term]

    variables = (
        tuple(ast.projection) if ast.projection is not None
        else tuple(ast.pattern_variables())
    )
    projected = {tuple(r[v] for v in variables) for r in rows}
    ordered = sorted(projected, key=lambda row: tuple(t.sort_key() for t in row))
    start = ast.offset or 0
    end = start + ast.limit if ast.limit is not None else None
    return BindingTable(variables=variables, rows=tuple(ordered[start:end]))


# --- keyword search --------------------------------------------------------


def keyword_search(snapshot: GraphSnapshot, query: str, limit: int = 20) -> list[SearchHit]:
    """Case-folded substring search over label and description literals,
    ranked exact > prefix > substring, ties broken by IRI."""
    needle = query.strip()
    if not needle:
        raise InvalidQuery("search query must be non-empty")
    folded = needle.casefold()
    label_p = Iri(RDFS_LABEL)
    comment_p = Iri(RDFS_COMMENT)

    best: dict[Iri, tuple[int, int, str, MatchRank]] = {}
    for field_index, pred in ((0, label_p), (1, comment_p)):
        for t in snapshot.match(p=pred):
            if not isinstance(t.object, Literal):
                continue
            hay = t.object.lexical.casefold()
            if folded == hay:
                rank = MatchRank.EXACT
            elif hay.startswith(folded):
                rank = MatchRank.PREFIX
            elif folded in hay:
                rank = MatchRank.SUBSTRING
            else:
                continue
            field = "label" if field_index == 0 else "description"
            key = (_RANK_ORDER[rank], field_index, field, rank)
            current = best.get(t.subject)
            if current is None or key[:2] < current[:2]:
                best[t.subject] = key
    hits = [
        SearchHit(
            iri=iri,
            label=snapshot.label_of(iri) or iri.local_name(),
            match_field=field,
            rank=rank,
        )
        for iri, (_, _, field, rank) in best.items()
    ]
    hits.sort(key=lambda h: (_RANK_ORDER[h.rank], h.iri.value))
    return hits[: max(limit, 0)]
