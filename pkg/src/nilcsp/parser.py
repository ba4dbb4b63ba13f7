"""Concrete textual syntax for process definitions and expressions.

Grammar (ASCII surface; the Unicode forms are accepted on input only):

    file    := { def } [ expr ]
    def     := NAME [ "alpha" "{" NAME { "," NAME } "}" ] "=" expr NEWLINE
    expr    := par
    par     := choice { "||" choice }
    choice  := prefix { "|" prefix }     -- every alternative must be a prefix
    prefix  := event "->" prefix | atom
    atom    := "STOP" | "SKIP" | "mu" NAME "." expr | NAME | "(" expr ")"
    event   := NAME | "nil" | "tick"

``->`` is right-associative and binds tightest, then ``|``, then ``||``;
``mu`` extends maximally to the right.  ``#`` starts a line comment.
Newlines separate definitions but are ignored inside parentheses.  ``→``,
``∥``/``‖``, ``μ`` and ``✓`` are read as ``->``, ``||``, ``mu`` and
``tick``; the printer emits ASCII only.

A NAME in atom position resolves to a bound recursion variable or to a
named definition; binders may not shadow definition names, which keeps the
two readings from ever competing.

:func:`render` is the inverse of parsing up to binder renaming: parsing
its output yields an equal term, with minimal parentheses.
"""

from __future__ import annotations

from dataclasses import dataclass

from .terms import (
    Alphabet,
    Choice,
    Definition,
    DefinitionError,
    Definitions,
    Mu,
    NIL,
    Named,
    Parallel,
    Prefix,
    ProcessTerm,
    Ref,
    SkipLit,
    StopLit,
    TICK,
    TermError,
    Var,
)

__all__ = [
    "ParseError",
    "SemanticError",
    "SourceFile",
    "parse",
    "parse_expression",
    "render",
    "render_definition",
]


@dataclass
class ParseError(Exception):
    """A syntax violation, located at a 1-based line and column."""

    line: int
    column: int
    message: str
    expected: tuple = ()

    def __str__(self) -> str:
        s = f"line {self.line}, column {self.column}: {self.message}"
        if self.expected:
            s += " (expected " + ", ".join(self.expected) + ")"
        return s


@dataclass
class SemanticError(Exception):
    """A resolution failure: unbound name, bad guard, alphabet violation."""

    message: str
    line: int | None = None
    column: int | None = None

    def __str__(self) -> str:
        if self.line is None:
            return self.message
        return f"line {self.line}, column {self.column}: {self.message}"


@dataclass(frozen=True)
class SourceFile:
    """A parsed source: resolved definitions plus an optional main expression."""

    definitions: Definitions
    main: ProcessTerm | None = None


# ---------------------------------------------------------------------------
# Tokenizer

_KEYWORDS = {"STOP": "stop", "SKIP": "skip", "mu": "mu", "nil": "nil",
             "tick": "tick", "alpha": "alpha"}

_PUNCT = {"(": "lparen", ")": "rparen", "{": "lbrace", "}": "rbrace",
          ",": "comma", "=": "equals", ".": "dot"}

_TOKEN_NAMES = {
    "name": "a name", "stop": "'STOP'", "skip": "'SKIP'", "mu": "'mu'",
    "nil": "'nil'", "tick": "'tick'", "alpha": "'alpha'", "arrow": "'->'",
    "bar": "'|'", "parallel": "'||'", "lparen": "'('", "rparen": "')'",
    "lbrace": "'{'", "rbrace": "'}'", "comma": "','", "equals": "'='",
    "dot": "'.'", "newline": "end of line", "eof": "end of input",
}


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(source: str) -> list:
    tokens: list = []
    depth = 0
    line, col = 1, 1
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            if depth == 0 and tokens and tokens[-1].kind != "newline":
                tokens.append(_Token("newline", "\n", line, col))
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and source[i] != "\n":
                i += 1
                col += 1
            continue
        start_col = col
        if source.startswith("->", i):
            tokens.append(_Token("arrow", "->", line, start_col))
            i += 2
            col += 2
            continue
        if source.startswith("||", i):
            tokens.append(_Token("parallel", "||", line, start_col))
            i += 2
            col += 2
            continue
        if ch == "→":  # →
            tokens.append(_Token("arrow", ch, line, start_col))
        elif ch in "∥‖":  # ∥ ‖
            tokens.append(_Token("parallel", ch, line, start_col))
        elif ch == "|":
            tokens.append(_Token("bar", ch, line, start_col))
        elif ch == "μ":  # μ
            tokens.append(_Token("mu", ch, line, start_col))
        elif ch == "✓":  # ✓
            tokens.append(_Token("tick", ch, line, start_col))
        elif ch in _PUNCT:
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth = max(0, depth - 1)
            tokens.append(_Token(_PUNCT[ch], ch, line, start_col))
        elif ch.isalpha():
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            word = source[i:j]
            tokens.append(_Token(_KEYWORDS.get(word, "name"), word, line, start_col))
            col += j - i
            i = j
            continue
        else:
            raise ParseError(line, start_col, f"unexpected character {ch!r}")
        i += 1
        col += 1
    tokens.append(_Token("eof", "", line, col))
    return tokens


# ---------------------------------------------------------------------------
# Parser

_EXPR_START = ("a process name", "an event", "'STOP'", "'SKIP'", "'mu'", "'('")


class _Parser:
    def __init__(self, tokens: list, def_names: frozenset):
        self._tokens = tokens
        self._pos = 0
        self._def_names = def_names

    def peek(self, ahead: int = 0) -> _Token:
        return self._tokens[min(self._pos + ahead, len(self._tokens) - 1)]

    def take(self) -> _Token:
        tok = self.peek()
        if tok.kind != "eof":
            self._pos += 1
        return tok

    def accept(self, kind: str) -> _Token | None:
        if self.peek().kind == kind:
            return self.take()
        return None

    def expect(self, kind: str, context: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(
                tok.line, tok.column,
                f"unexpected {_TOKEN_NAMES.get(tok.kind, tok.text)!s} {context}",
                expected=(_TOKEN_NAMES[kind],),
            )
        return self.take()

    def skip_newlines(self) -> None:
        while self.peek().kind == "newline":
            self.take()

    # expr := par;  par := choice { "||" choice }
    def parse_expr(self, scope: tuple) -> ProcessTerm:
        node = self.parse_choice(scope)
        while self.accept("parallel"):
            node = Parallel(node, self.parse_choice(scope))
        return node

    def parse_choice(self, scope: tuple) -> ProcessTerm:
        first_tok = self.peek()
        first = self.parse_prefix(scope)
        if self.peek().kind != "bar":
            return first
        alts = [(first, first_tok)]
        while self.accept("bar"):
            tok = self.peek()
            alts.append((self.parse_prefix(scope), tok))
        for alt, tok in alts:
            if not isinstance(alt, Prefix):
                raise SemanticError(
                    "choice alternative must be guarded (event -> process)",
                    tok.line, tok.column,
                )
        try:
            return Choice(tuple((a.event, a.rest) for a, _ in alts))
        except TermError as exc:
            raise SemanticError(str(exc), first_tok.line, first_tok.column) from exc

    def parse_prefix(self, scope: tuple) -> ProcessTerm:
        tok = self.peek()
        if tok.kind in ("name", "nil", "tick") and self.peek(1).kind == "arrow":
            event = self.parse_event()
            self.take()  # arrow
            return Prefix(event, self.parse_prefix(scope))
        return self.parse_atom(scope)

    def parse_event(self):
        tok = self.take()
        if tok.kind == "nil":
            return NIL
        if tok.kind == "tick":
            return TICK
        return Named(tok.text)

    def parse_atom(self, scope: tuple) -> ProcessTerm:
        tok = self.peek()
        if tok.kind == "stop":
            self.take()
            return StopLit()
        if tok.kind == "skip":
            self.take()
            return SkipLit()
        if tok.kind == "mu":
            mu_tok = self.take()
            binder = self.expect("name", "after 'mu'").text
            if binder in self._def_names:
                raise SemanticError(
                    f"recursion variable {binder!r} shadows a definition name",
                    mu_tok.line, mu_tok.column,
                )
            self.expect("dot", "after the recursion variable")
            body = self.parse_expr(scope + (binder,))
            try:
                return Mu(binder, body)
            except TermError as exc:
                raise SemanticError(str(exc), mu_tok.line, mu_tok.column) from exc
        if tok.kind == "lparen":
            self.take()
            node = self.parse_expr(scope)
            self.expect("rparen", "to close '('")
            return node
        if tok.kind == "name":
            self.take()
            if tok.text in scope:
                return Var(tok.text)
            if tok.text in self._def_names:
                return Ref(tok.text)
            raise SemanticError(f"unbound name {tok.text!r}", tok.line, tok.column)
        raise ParseError(
            tok.line, tok.column,
            f"unexpected {_TOKEN_NAMES.get(tok.kind, tok.text)!s}",
            expected=_EXPR_START,
        )


def _scan_definition_names(tokens: list) -> frozenset:
    names = {}
    at_line_start = True
    for i, tok in enumerate(tokens):
        if at_line_start and tok.kind == "name":
            nxt = tokens[i + 1] if i + 1 < len(tokens) else None
            if nxt is not None and nxt.kind in ("equals", "alpha"):
                if tok.text in names:
                    raise SemanticError(
                        f"duplicate definition of {tok.text!r}", tok.line, tok.column
                    )
                names[tok.text] = tok
        at_line_start = tok.kind == "newline"
    return frozenset(names)


def parse(source: str) -> SourceFile:
    """Parse a source file into resolved definitions plus an optional main
    expression.

    Raises :class:`ParseError` for syntax violations and
    :class:`SemanticError` for resolution failures (unbound names, bad
    choice guards, alphabet violations, unguarded reference cycles).
    """
    tokens = _tokenize(source)
    def_names = _scan_definition_names(tokens)
    parser = _Parser(tokens, def_names)

    raw_defs: list = []
    def_positions: dict = {}
    main: ProcessTerm | None = None

    while True:
        parser.skip_newlines()
        tok = parser.peek()
        if tok.kind == "eof":
            break
        if tok.kind == "name" and parser.peek(1).kind in ("equals", "alpha"):
            if main is not None:
                raise ParseError(
                    tok.line, tok.column,
                    "definitions must precede the main expression",
                    expected=("end of input",),
                )
            name_tok = parser.take()
            declared: Alphabet | None = None
            if parser.accept("alpha"):
                parser.expect("lbrace", "after 'alpha'")
                labels = [parser.expect("name", "in the alphabet clause").text]
                while parser.accept("comma"):
                    labels.append(parser.expect("name", "in the alphabet clause").text)
                parser.expect("rbrace", "to close the alphabet clause")
                try:
                    declared = Alphabet.of(*labels)
                except TermError as exc:
                    raise SemanticError(str(exc), name_tok.line, name_tok.column) from exc
            parser.expect("equals", "in the definition")
            body = parser.parse_expr(())
            end = parser.peek()
            if end.kind not in ("newline", "eof"):
                raise ParseError(
                    end.line, end.column,
                    f"unexpected {_TOKEN_NAMES.get(end.kind, end.text)!s} after the definition body",
                    expected=("end of line",),
                )
            raw_defs.append((name_tok.text, body, declared))
            def_positions[name_tok.text] = (name_tok.line, name_tok.column)
        else:
            if main is not None:
                raise ParseError(
                    tok.line, tok.column,
                    "only one main expression is allowed",
                    expected=("end of input",),
                )
            main = parser.parse_expr(())
            parser.skip_newlines()
            end = parser.peek()
            if end.kind != "eof":
                looks_like_def = (
                    end.kind == "name" and parser.peek(1).kind in ("equals", "alpha")
                )
                message = (
                    "definitions must precede the main expression"
                    if looks_like_def
                    else f"unexpected {_TOKEN_NAMES.get(end.kind, end.text)!s} "
                    "after the main expression"
                )
                raise ParseError(end.line, end.column, message, expected=("end of input",))

    from .terms import syntactic_alphabet

    entries = []
    for name, body, declared in raw_defs:
        alphabet = declared if declared is not None else syntactic_alphabet(body)
        entries.append(Definition(name, body, alphabet, declared is not None))
    try:
        definitions = Definitions(entries)
    except DefinitionError as exc:
        line, column = def_positions.get(exc.def_name, (None, None))
        raise SemanticError(str(exc), line, column) from exc
    return SourceFile(definitions, main)


def parse_expression(source: str, defs: Definitions | None = None) -> ProcessTerm:
    """Parse a single expression against an existing definition set."""
    tokens = _tokenize(source)
    def_names = frozenset(defs.names()) if defs is not None else frozenset()
    parser = _Parser(tokens, def_names)
    parser.skip_newlines()
    term = parser.parse_expr(())
    parser.skip_newlines()
    end = parser.peek()
    if end.kind != "eof":
        raise ParseError(
            end.line, end.column,
            f"unexpected {_TOKEN_NAMES.get(end.kind, end.text)!s} after the expression",
            expected=("end of input",),
        )
    return term


# ---------------------------------------------------------------------------
# Pretty printer

_LVL_PAR, _LVL_CHOICE, _LVL_PREFIX = 1, 2, 3


def render(term: ProcessTerm) -> str:
    """Emit the grammar above with minimal parentheses.

    Parsing the result yields a term equal to ``term`` (binder names do not
    affect equality).  Output is ASCII: ``nil``, ``tick``, ``->``, ``||``.
    """
    return _render(term, _LVL_PAR, True)


def _render(t: ProcessTerm, min_level: int, tail: bool) -> str:
    if isinstance(t, (Var, Ref)):
        return t.name
    if isinstance(t, StopLit):
        return "STOP"
    if isinstance(t, SkipLit):
        return "SKIP"
    if isinstance(t, Prefix):
        wrapped = min_level > _LVL_PREFIX
        s = f"{t.event.label} -> {_render(t.rest, _LVL_PREFIX, tail or wrapped)}"
        return f"({s})" if wrapped else s
    if isinstance(t, Choice):
        wrapped = min_level > _LVL_CHOICE
        inner_tail = tail or wrapped
        last = len(t.branches) - 1
        parts = [
            f"{g.label} -> {_render(r, _LVL_PREFIX, inner_tail and i == last)}"
            for i, (g, r) in enumerate(t.branches)
        ]
        s = " | ".join(parts)
        return f"({s})" if wrapped else s
    if isinstance(t, Parallel):
        wrapped = min_level > _LVL_PAR
        s = (
            f"{_render(t.left, _LVL_PAR, False)} || "
            f"{_render(t.right, _LVL_CHOICE, tail or wrapped)}"
        )
        return f"({s})" if wrapped else s
    if isinstance(t, Mu):
        s = f"mu {t.binder} . {_render(t.body, _LVL_PAR, True)}"
        return s if tail else f"({s})"
    raise TermError(f"cannot render {t!r}")


def render_definition(d: Definition) -> str:
    """One definition line, with the alphabet clause only when it was declared."""
    if d.alphabet_declared:
        labels = ",".join(d.alphabet.labels())
        return f"{d.name} alpha {{{labels}}} = {render(d.body)}"
    return f"{d.name} = {render(d.body)}"
