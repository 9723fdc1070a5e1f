"""Turtle subset parser and canonical serializer.

Supported grammar: ``@prefix`` declarations, subject/predicate/object
statements terminated by ``.``, predicate lists with ``;``, object lists
with ``,``, the ``a`` keyword, ``<IRIREF>`` terms, prefixed names,
double-quoted string literals with optional ``@lang`` or ``^^datatype``,
escapes ``\\" \\\\ \\n \\t``, and ``#`` comments. No blank nodes,
collections, numeric/boolean sugar, or multi-line strings.

Parsing is all-or-nothing: the first grammar violation in source order
raises :class:`TurtleParseError`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .rdf import RDF_TYPE, GraphSnapshot, Iri, Literal, Term, TermError, Triple, shrink_iri


class ParseErrorKind(enum.Enum):
    UNDEFINED_PREFIX = "UndefinedPrefix"
    BAD_IRI_REF = "BadIriRef"
    BAD_LITERAL = "BadLiteral"
    UNEXPECTED_TOKEN = "UnexpectedToken"
    UNTERMINATED_STATEMENT = "UnterminatedStatement"


class TurtleParseError(Exception):
    def __init__(self, kind: ParseErrorKind, line: int, column: int, message: str) -> None:
        super().__init__(f"{kind.value} at {line}:{column}: {message}")
        self.kind = kind
        self.line = line
        self.column = column
        self.message = message


@dataclass
class ParsedDocument:
    prefixes: dict[str, str] = field(default_factory=dict)
    triples: list[Triple] = field(default_factory=list)
    source_spans: list[tuple[int, int]] = field(default_factory=list)


# Token types
_IRIREF = "iriref"
_PNAME = "pname"
_STRING = "string"
_LANGTAG = "langtag"
_DTSEP = "^^"
_PREFIX_KW = "@prefix"
_WORD = "word"
_DOT = "."
_SEMI = ";"
_COMMA = ","
_EOF = "eof"

_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "t": "\t"}


def _pn_char(c: str) -> bool:
    return bool(c) and c.isascii() and (c.isalnum() or c in "_-")


@dataclass(frozen=True, slots=True)
class _Token:
    type: str
    value: object
    line: int
    column: int


class _Scanner:
    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0
        self.line = 1
        self.column = 1

    def _advance(self) -> str:
        c = self.text[self.pos]
        self.pos += 1
        if c == "\n":
            self.line += 1
            self.column = 1
        else:
            self.column += 1
        return c

    def _peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _error(self, kind: ParseErrorKind, message: str, line: int | None = None,
               column: int | None = None) -> TurtleParseError:
        return TurtleParseError(
            kind, self.line if line is None else line,
            self.column if column is None else column, message,
        )

    def _skip_layout(self) -> None:
        while self.pos < len(self.text):
            c = self._peek()
            if c in " \t\r\n":
                self._advance()
            elif c == "#":
                while self.pos < len(self.text) and self._peek() != "\n":
                    self._advance()
            else:
                return

    def next_token(self) -> _Token:
        self._skip_layout()
        line, col = self.line, self.column
        if self.pos >= len(self.text):
            return _Token(_EOF, None, line, col)
        c = self._peek()
        if c in ".;,":
            self._advance()
            return _Token(c, c, line, col)
        if c == "<":
            return self._scan_iriref(line, col)
        if c == '"':
            return self._scan_string(line, col)
        if c == "@":
            return self._scan_at(line, col)
        if c == "^":
            self._advance()
            if self._peek() == "^":
                self._advance()
                return _Token(_DTSEP, "^^", line, col)
            raise self._error(ParseErrorKind.UNEXPECTED_TOKEN, "stray '^'", line, col)
        if _pn_char(c) or c == ":":
            return self._scan_word(line, col)
        raise self._error(
            ParseErrorKind.UNEXPECTED_TOKEN, f"unexpected character {c!r}", line, col
        )

    def _scan_iriref(self, line: int, col: int) -> _Token:
        self._advance()  # consume '<'
        chars: list[str] = []
        while True:
            if self.pos >= len(self.text):
                raise self._error(ParseErrorKind.BAD_IRI_REF, "unterminated IRI", line, col)
            c = self._peek()
            if c == ">":
                self._advance()
                break
            if c.isspace() or c == "<":
                raise self._error(
                    ParseErrorKind.BAD_IRI_REF, f"illegal character {c!r} in IRI"
                )
            chars.append(self._advance())
        iri = "".join(chars)
        if not iri:
            raise self._error(ParseErrorKind.BAD_IRI_REF, "empty IRI", line, col)
        return _Token(_IRIREF, iri, line, col)

    def _scan_string(self, line: int, col: int) -> _Token:
        self._advance()  # consume opening quote
        chars: list[str] = []
        while True:
            if self.pos >= len(self.text):
                raise self._error(
                    ParseErrorKind.BAD_LITERAL, "unterminated string literal", line, col
                )
            c = self._peek()
            if c == "\n":
                raise self._error(
                    ParseErrorKind.BAD_LITERAL, "unterminated string literal", line, col
                )
            if c == '"':
                self._advance()
                break
            if c == "\\":
                eline, ecol = self.line, self.column
                self._advance()
                esc = self._peek()
                if esc not in _ESCAPES:
                    raise self._error(
                        ParseErrorKind.BAD_LITERAL, f"bad escape \\{esc}", eline, ecol
                    )
                chars.append(_ESCAPES[self._advance()])
            else:
                chars.append(self._advance())
        return _Token(_STRING, "".join(chars), line, col)

    def _scan_at(self, line: int, col: int) -> _Token:
        self._advance()  # consume '@'
        chars: list[str] = []
        while True:
            c = self._peek()
            if not c or not c.isascii():
                break
            if c.isalpha() or (chars and c in "-0123456789"):
                chars.append(self._advance())
            else:
                break
        word = "".join(chars)
        if word == "prefix":
            return _Token(_PREFIX_KW, word, line, col)
        if not word or word.startswith("-") or word.endswith("-"):
            raise self._error(ParseErrorKind.BAD_LITERAL, "malformed language tag", line, col)
        return _Token(_LANGTAG, word, line, col)

    def _scan_word(self, line: int, col: int) -> _Token:
        chars: list[str] = []
        while _pn_char(self._peek()) or self._peek() == ":":
            chars.append(self._advance())
        word = "".join(chars)
        if ":" in word:
            prefix, local = word.split(":", 1)
            if ":" in local:
                raise self._error(
                    ParseErrorKind.UNEXPECTED_TOKEN, f"malformed prefixed name {word!r}",
                    line, col,
                )
            return _Token(_PNAME, (prefix, local), line, col)
        return _Token(_WORD, word, line, col)


class _Parser:
    def __init__(self, text: str) -> None:
        self.scanner = _Scanner(text)
        self.doc = ParsedDocument()
        self.token = self.scanner.next_token()

    def _bump(self) -> _Token:
        tok = self.token
        self.token = self.scanner.next_token()
        return tok

    def _unexpected(self, expected: str) -> TurtleParseError:
        tok = self.token
        if tok.type == _EOF:
            return TurtleParseError(
                ParseErrorKind.UNTERMINATED_STATEMENT, tok.line, tok.column,
                f"expected {expected}, found end of input",
            )
        return TurtleParseError(
            ParseErrorKind.UNEXPECTED_TOKEN, tok.line, tok.column,
            f"expected {expected}, found {tok.type!r}",
        )

    def parse(self) -> ParsedDocument:
        while self.token.type != _EOF:
            if self.token.type == _PREFIX_KW:
                self._prefix_decl()
            else:
                self._statement()
        return self.doc

    def _expect(self, ttype: str, expected: str) -> _Token:
        if self.token.type != ttype:
            raise self._unexpected(expected)
        return self._bump()

    def _prefix_decl(self) -> None:
        self._bump()  # @prefix
        tok = self._expect(_PNAME, "prefix label")
        prefix, local = tok.value  # type: ignore[misc]
        if local:
            raise TurtleParseError(
                ParseErrorKind.UNEXPECTED_TOKEN, tok.line, tok.column,
                f"prefix label must end with ':', found {prefix + ':' + local!r}",
            )
        ns = self._expect(_IRIREF, "namespace IRI")
        self._expect(_DOT, "'.'")
        self.doc.prefixes[prefix] = str(ns.value)

    def _resolve_pname(self, tok: _Token) -> Iri:
        prefix, local = tok.value  # type: ignore[misc]
        if prefix not in self.doc.prefixes:
            raise TurtleParseError(
                ParseErrorKind.UNDEFINED_PREFIX, tok.line, tok.column,
                f"prefix {prefix + ':'!r} is not declared",
            )
        return self._make_iri(self.doc.prefixes[prefix] + local, tok)

    def _make_iri(self, value: str, tok: _Token) -> Iri:
        try:
            return Iri(value)
        except TermError as exc:
            raise TurtleParseError(
                ParseErrorKind.BAD_IRI_REF, tok.line, tok.column, str(exc)
            ) from exc

    def _iri_term(self, expected: str) -> Iri:
        if self.token.type == _IRIREF:
            tok = self._bump()
            return self._make_iri(str(tok.value), tok)
        if self.token.type == _PNAME:
            return self._resolve_pname(self._bump())
        raise self._unexpected(expected)

    def _verb(self) -> Iri:
        if self.token.type == _WORD and self.token.value == "a":
            self._bump()
            return Iri(RDF_TYPE)
        return self._iri_term("predicate")

    def _object(self) -> Term:
        if self.token.type == _STRING:
            tok = self._bump()
            lexical = str(tok.value)
            if self.token.type == _LANGTAG:
                lang = str(self._bump().value)
                return Literal(lexical, lang=lang)
            if self.token.type == _DTSEP:
                self._bump()
                if self.token.type not in (_IRIREF, _PNAME):
                    raise TurtleParseError(
                        ParseErrorKind.BAD_LITERAL, self.token.line, self.token.column,
                        "expected datatype IRI after '^^'",
                    )
                dt = self._iri_term("datatype IRI")
                return Literal(lexical, datatype=dt.value)
            return Literal(lexical)
        return self._iri_term("object term")

    def _statement(self) -> None:
        start = (self.token.line, self.token.column)
        subject = self._iri_term("subject")
        while True:
            predicate = self._verb()
            while True:
                obj = self._object()
                self.doc.triples.append(Triple(subject, predicate, obj))
                self.doc.source_spans.append(start)
                if self.token.type == _COMMA:
                    self._bump()
                    continue
                break
            if self.token.type == _SEMI:
                self._bump()
                continue
            break
        self._expect(_DOT, "'.'")


def parse_turtle(text: str) -> ParsedDocument:
    """Parse a Turtle document; raises TurtleParseError on the first violation."""
    return _Parser(text).parse()


def _escape(lexical: str) -> str:
    return (
        lexical.replace("\\", "\\\\")
        .replace('"', '\\"')
        .replace("\n", "\\n")
        .replace("\t", "\\t")
    )


def _render_iri(iri: Iri, prefixes: dict[str, str]) -> str:
    short = shrink_iri(iri.value, prefixes)
    return short if short is not None else f"<{iri.value}>"


def _render_term(term: Term, prefixes: dict[str, str]) -> str:
    if isinstance(term, Iri):
        return _render_iri(term, prefixes)
    out = f'"{_escape(term.lexical)}"'
    if term.lang is not None:
        out += f"@{term.lang}"
    elif term.datatype is not None:
        out += f"^^{_render_iri(Iri(term.datatype), prefixes)}"
    return out


def serialize_turtle(snapshot: GraphSnapshot) -> str:
    """Canonical Turtle: a pure function of the triple set and prefix map.

    Prefixes sorted by label; statements grouped by subject with subjects
    sorted; within a subject the type predicate comes first (rendered as
    ``a``) and the rest sort by IRI; objects sort by term string.
    """
    prefixes = dict(snapshot.prefixes)
    lines = [f"@prefix {label}: <{prefixes[label]}> ." for label in sorted(prefixes)]

    by_subject: dict[Iri, dict[Iri, list[Term]]] = {}
    for t in snapshot.triples:
        by_subject.setdefault(t.subject, {}).setdefault(t.predicate, []).append(t.object)

    rdf_type = Iri(RDF_TYPE)
    blocks: list[str] = []
    for subject in sorted(by_subject, key=Iri.sort_key):
        preds = by_subject[subject]
        ordered = sorted(preds, key=lambda p: (p != rdf_type, p.value))
        parts: list[str] = []
        for pred in ordered:
            objs = sorted(preds[pred], key=lambda o: o.sort_key())
            rendered = " , ".join(_render_term(o, prefixes) for o in objs)
            verb = "a" if pred == rdf_type else _render_iri(pred, prefixes)
            parts.append(f"{verb} {rendered}")
        head = _render_iri(subject, prefixes)
        blocks.append(f"{head} " + " ;\n    ".join(parts) + " .")

    sections = []
    if lines:
        sections.append("\n".join(lines))
    if blocks:
        sections.append("\n\n".join(blocks))
    return "\n\n".join(sections) + "\n" if sections else ""
