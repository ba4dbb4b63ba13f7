"""Process terms for a CSP fragment with an explicit silent event.

``Named`` events are interaction labels drawn from a user alphabet; ``NIL``
(the silent, record-free event) and ``TICK`` (successful termination) are
implicit members of every alphabet and are never stored in one.  Process
terms form a small recursive language: event prefix, guarded choice,
alphabetized parallel composition, mu-recursion, recursion variables, and
references to named definitions.  ``StopLit`` and ``SkipLit`` are surface
literals; :func:`desugar` replaces them by their recursive equations
``mu X . nil -> X`` and ``mu X . tick -> X`` before any semantic operation.

All values are immutable and safe to share.  Term equality and hashing are
structural up to renaming of mu binders, so ``mu X . nil -> X`` equals
``mu Y . nil -> Y``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator

__all__ = [
    "Event",
    "Named",
    "Nil",
    "Tick",
    "NIL",
    "TICK",
    "Alphabet",
    "ProcessTerm",
    "Prefix",
    "Choice",
    "Parallel",
    "Mu",
    "Var",
    "Ref",
    "StopLit",
    "SkipLit",
    "Definition",
    "Definitions",
    "TermError",
    "DefinitionError",
    "substitute",
    "unfold",
    "desugar",
    "syntactic_alphabet",
    "stop_term",
    "skip_term",
]

_IDENT = re.compile(r"[a-zA-Z][a-zA-Z0-9_]*\Z")

#: Spellings that can never name an event, a variable, or a definition.
RESERVED = frozenset({"STOP", "SKIP", "mu", "nil", "tick", "alpha"})


class TermError(ValueError):
    """A term or definition violates a construction rule."""


class DefinitionError(TermError):
    """A named definition is ill-formed; carries the offending name."""

    def __init__(self, def_name: str, message: str):
        super().__init__(message)
        self.def_name = def_name


def _check_ident(name: str, what: str) -> None:
    if not isinstance(name, str) or not _IDENT.match(name):
        raise TermError(f"{what} {name!r} is not a valid identifier")
    if name in RESERVED:
        raise TermError(f"{what} {name!r} is a reserved word")


# ---------------------------------------------------------------------------
# Events

@dataclass(frozen=True)
class Event:
    """An interaction label; concrete events are :class:`Named`, ``NIL``, ``TICK``."""

    def __str__(self) -> str:
        return self.label  # type: ignore[attr-defined]


@dataclass(frozen=True)
class Named(Event):
    """An ordinary named event such as ``coin``."""

    label: str

    def __post_init__(self) -> None:
        _check_ident(self.label, "event name")


@dataclass(frozen=True)
class Nil(Event):
    """The silent event: executable instantly, never recorded on a trace."""

    label: str = field(default="nil", init=False)


@dataclass(frozen=True)
class Tick(Event):
    """The successful-termination event (rendered ``tick`` in text output)."""

    label: str = field(default="tick", init=False)


NIL = Nil()
TICK = Tick()


# ---------------------------------------------------------------------------
# Alphabets

@dataclass(frozen=True)
class Alphabet:
    """A finite set of :class:`Named` events.

    ``NIL`` and ``TICK`` belong to every alphabet implicitly: membership
    tests report them as members, but they are never stored.
    """

    events: frozenset = frozenset()

    def __post_init__(self) -> None:
        events = frozenset(self.events)
        for e in events:
            if not isinstance(e, Named):
                raise TermError(f"alphabets store named events only, got {e!r}")
        object.__setattr__(self, "events", events)

    @classmethod
    def of(cls, *labels: str) -> "Alphabet":
        return cls(frozenset(Named(l) for l in labels))

    def __contains__(self, event: Event) -> bool:
        if isinstance(event, (Nil, Tick)):
            return True
        return event in self.events

    def __or__(self, other: "Alphabet") -> "Alphabet":
        return Alphabet(self.events | other.events)

    def __and__(self, other: "Alphabet") -> "Alphabet":
        return Alphabet(self.events & other.events)

    def __iter__(self) -> Iterator[Named]:
        return iter(sorted(self.events, key=lambda e: e.label))

    def __len__(self) -> int:
        return len(self.events)

    def labels(self) -> tuple:
        return tuple(e.label for e in self)


# ---------------------------------------------------------------------------
# Terms

class ProcessTerm:
    """Base class for process terms.

    Equality and hashing are structural up to renaming of mu binders;
    binder spellings never affect equality.
    """

    __hash__ = None  # replaced below once subclasses exist

    @property
    def free_vars(self) -> frozenset:
        """Names of recursion variables occurring free in this term."""
        return self._free  # type: ignore[attr-defined]

    @property
    def ref_names(self) -> frozenset:
        """Names of definitions referenced anywhere in this term."""
        return self._refs  # type: ignore[attr-defined]

    def key(self):
        """Canonical form with binder names replaced by binding depths."""
        k = getattr(self, "_key", None)
        if k is None:
            k = self._canon({}, 0)
            object.__setattr__(self, "_key", k)
        return k

    def _canon(self, env: dict, depth: int):
        raise NotImplementedError

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, ProcessTerm):
            return NotImplemented
        return self.key() == other.key()

    def __ne__(self, other) -> bool:
        eq = self.__eq__(other)
        return NotImplemented if eq is NotImplemented else not eq


def _term_hash(self) -> int:
    return hash(self.key())


ProcessTerm.__hash__ = _term_hash


def _canon_child(child: ProcessTerm, env: dict, depth: int):
    # Closed subterms have context-independent canonical forms; reuse them.
    if not child._free:
        return child.key()
    return child._canon(env, depth)


@dataclass(frozen=True, eq=False)
class Prefix(ProcessTerm):
    """``event -> rest``: engage in ``event``, then behave as ``rest``."""

    event: Event
    rest: ProcessTerm

    def __post_init__(self) -> None:
        if not isinstance(self.event, Event):
            raise TermError(f"prefix guard must be an Event, got {self.event!r}")
        if not isinstance(self.rest, ProcessTerm):
            raise TermError(f"prefix body must be a term, got {self.rest!r}")
        object.__setattr__(self, "_free", self.rest._free)
        object.__setattr__(self, "_refs", self.rest._refs)

    def _canon(self, env: dict, depth: int):
        return ("pre", self.event, _canon_child(self.rest, env, depth))


@dataclass(frozen=True, eq=False)
class Choice(ProcessTerm):
    """Guarded choice between two or more event-prefixed branches.

    Guards are pairwise distinct and never ``NIL``: a branch selectable
    instantly would make the selection ambiguous.
    """

    branches: tuple

    def __post_init__(self) -> None:
        branches = tuple((g, r) for g, r in self.branches)
        object.__setattr__(self, "branches", branches)
        if len(branches) < 2:
            raise TermError("choice needs at least two branches")
        seen = set()
        for guard, rest in branches:
            if not isinstance(guard, Event):
                raise TermError(f"choice guard must be an Event, got {guard!r}")
            if isinstance(guard, Nil):
                raise TermError("nil cannot guard a choice branch")
            if guard in seen:
                raise TermError(f"duplicate choice guard {guard.label!r}")
            seen.add(guard)
            if not isinstance(rest, ProcessTerm):
                raise TermError(f"choice branch must be a term, got {rest!r}")
        free: frozenset = frozenset()
        refs: frozenset = frozenset()
        for _, rest in branches:
            free |= rest._free
            refs |= rest._refs
        object.__setattr__(self, "_free", free)
        object.__setattr__(self, "_refs", refs)

    def _canon(self, env: dict, depth: int):
        return ("cho",) + tuple(
            (g, _canon_child(r, env, depth)) for g, r in self.branches
        )


@dataclass(frozen=True, eq=False)
class Parallel(ProcessTerm):
    """Alphabetized parallel composition; operands synchronize on shared events."""

    left: ProcessTerm
    right: ProcessTerm

    def __post_init__(self) -> None:
        for side in (self.left, self.right):
            if not isinstance(side, ProcessTerm):
                raise TermError(f"parallel operand must be a term, got {side!r}")
        object.__setattr__(self, "_free", self.left._free | self.right._free)
        object.__setattr__(self, "_refs", self.left._refs | self.right._refs)

    def _canon(self, env: dict, depth: int):
        return (
            "par",
            _canon_child(self.left, env, depth),
            _canon_child(self.right, env, depth),
        )


@dataclass(frozen=True, eq=False)
class Mu(ProcessTerm):
    """``mu X . body``: the process satisfying ``X = body``.

    Every free occurrence of the binder in the body must sit beneath at
    least one prefix or choice guard (nil guards count); ``mu X . X`` is
    rejected.  Occurrences inside a parallel operand are rejected as well:
    recursion through parallel composition grows without bound and would
    break the termination guarantee of silent-step closure.
    """

    binder: str
    body: ProcessTerm

    def __post_init__(self) -> None:
        _check_ident(self.binder, "recursion variable")
        if not isinstance(self.body, ProcessTerm):
            raise TermError(f"mu body must be a term, got {self.body!r}")
        if _has_unguarded_var(self.body, self.binder):
            raise TermError(
                f"unguarded recursion: every occurrence of {self.binder!r} "
                "needs a prefix or choice guard above it"
            )
        if _var_under_parallel(self.body, self.binder):
            raise TermError(
                f"recursion variable {self.binder!r} occurs inside a parallel "
                "operand; recursion through parallel composition is not supported"
            )
        object.__setattr__(self, "_free", self.body._free - {self.binder})
        object.__setattr__(self, "_refs", self.body._refs)

    def _canon(self, env: dict, depth: int):
        inner = dict(env)
        inner[self.binder] = depth
        return ("mu", self.body._canon(inner, depth + 1))


@dataclass(frozen=True, eq=False)
class Var(ProcessTerm):
    """A recursion variable bound by an enclosing :class:`Mu`."""

    name: str

    def __post_init__(self) -> None:
        _check_ident(self.name, "variable")
        object.__setattr__(self, "_free", frozenset({self.name}))
        object.__setattr__(self, "_refs", frozenset())

    def _canon(self, env: dict, depth: int):
        if self.name in env:
            return ("bvar", depth - env[self.name])
        return ("var", self.name)


@dataclass(frozen=True, eq=False)
class Ref(ProcessTerm):
    """A reference to a named definition."""

    name: str

    def __post_init__(self) -> None:
        _check_ident(self.name, "process name")
        object.__setattr__(self, "_free", frozenset())
        object.__setattr__(self, "_refs", frozenset({self.name}))

    def _canon(self, env: dict, depth: int):
        return ("ref", self.name)


@dataclass(frozen=True, eq=False)
class StopLit(ProcessTerm):
    """Surface ``STOP``; desugars to ``mu X . nil -> X``."""

    def __post_init__(self) -> None:
        object.__setattr__(self, "_free", frozenset())
        object.__setattr__(self, "_refs", frozenset())

    def _canon(self, env: dict, depth: int):
        return ("stop",)


@dataclass(frozen=True, eq=False)
class SkipLit(ProcessTerm):
    """Surface ``SKIP``; desugars to ``mu X . tick -> X``."""

    def __post_init__(self) -> None:
        object.__setattr__(self, "_free", frozenset())
        object.__setattr__(self, "_refs", frozenset())

    def _canon(self, env: dict, depth: int):
        return ("skip",)


# ---------------------------------------------------------------------------
# Structural predicates used by constructors and validation

def _has_unguarded_var(term: ProcessTerm, name: str) -> bool:
    """True iff ``Var(name)`` occurs free with no prefix/choice guard above it."""
    if isinstance(term, Var):
        return term.name == name
    if isinstance(term, (Prefix, Choice)):
        return False  # everything below sits beneath a guard
    if isinstance(term, Parallel):
        return _has_unguarded_var(term.left, name) or _has_unguarded_var(term.right, name)
    if isinstance(term, Mu):
        if term.binder == name:
            return False
        return _has_unguarded_var(term.body, name)
    return False


def _var_under_parallel(term: ProcessTerm, name: str) -> bool:
    """True iff ``Var(name)`` occurs free inside some parallel operand."""
    if isinstance(term, Parallel):
        return name in term.left._free or name in term.right._free
    if isinstance(term, Prefix):
        return _var_under_parallel(term.rest, name)
    if isinstance(term, Choice):
        return any(_var_under_parallel(r, name) for _, r in term.branches)
    if isinstance(term, Mu):
        if term.binder == name:
            return False
        return _var_under_parallel(term.body, name)
    return False


def _unguarded_refs(term: ProcessTerm) -> frozenset:
    """Definition names referenced with no prefix/choice guard above them."""
    if isinstance(term, Ref):
        return frozenset({term.name})
    if isinstance(term, (Prefix, Choice)):
        return frozenset()
    if isinstance(term, Parallel):
        return _unguarded_refs(term.left) | _unguarded_refs(term.right)
    if isinstance(term, Mu):
        return _unguarded_refs(term.body)
    return frozenset()


def _refs_under_parallel(term: ProcessTerm) -> frozenset:
    if isinstance(term, Parallel):
        return (
            term.left._refs
            | term.right._refs
            | _refs_under_parallel(term.left)
            | _refs_under_parallel(term.right)
        )
    if isinstance(term, Prefix):
        return _refs_under_parallel(term.rest)
    if isinstance(term, Choice):
        out: frozenset = frozenset()
        for _, rest in term.branches:
            out |= _refs_under_parallel(rest)
        return out
    if isinstance(term, Mu):
        return _refs_under_parallel(term.body)
    return frozenset()


def _identifiers(term: ProcessTerm) -> set:
    """All binder, variable, and reference spellings in a term."""
    out: set = set()
    stack = [term]
    while stack:
        t = stack.pop()
        if isinstance(t, Prefix):
            stack.append(t.rest)
        elif isinstance(t, Choice):
            stack.extend(r for _, r in t.branches)
        elif isinstance(t, Parallel):
            stack.extend((t.left, t.right))
        elif isinstance(t, Mu):
            out.add(t.binder)
            stack.append(t.body)
        elif isinstance(t, (Var, Ref)):
            out.add(t.name)
    return out


# ---------------------------------------------------------------------------
# Operations

def substitute(term: ProcessTerm, var: str, replacement: ProcessTerm) -> ProcessTerm:
    """Replace every free occurrence of ``Var(var)`` with ``replacement``.

    ``replacement`` must be closed, which makes capture impossible.
    Unchanged subterms are reused, not copied.
    """
    if replacement._free:
        raise TermError("replacement term must be closed")
    if var not in term._free:
        return term
    if isinstance(term, Var):
        return replacement
    if isinstance(term, Prefix):
        return Prefix(term.event, substitute(term.rest, var, replacement))
    if isinstance(term, Choice):
        return Choice(tuple((g, substitute(r, var, replacement)) for g, r in term.branches))
    if isinstance(term, Parallel):
        return Parallel(
            substitute(term.left, var, replacement),
            substitute(term.right, var, replacement),
        )
    if isinstance(term, Mu):
        if term.binder == var:
            return term  # occurrences below are bound, not free
        return Mu(term.binder, substitute(term.body, var, replacement))
    return term


def unfold(term: Mu) -> ProcessTerm:
    """One unfolding: the body with the whole mu-term at each free binder occurrence."""
    if not isinstance(term, Mu):
        raise TermError(f"unfold expects a mu-term, got {term!r}")
    return substitute(term.body, term.binder, term)


def _fresh_names(used: set) -> Iterator[str]:
    for base in ("X", "Y", "Z"):
        if base not in used:
            used.add(base)
            yield base
    i = 1
    while True:
        name = f"X{i}"
        if name not in used:
            used.add(name)
            yield name
        i += 1


def stop_term(binder: str = "X") -> Mu:
    """The idle loop ``mu X . nil -> X`` that ``STOP`` desugars to."""
    return Mu(binder, Prefix(NIL, Var(binder)))


def skip_term(binder: str = "X") -> Mu:
    """The termination loop ``mu X . tick -> X`` that ``SKIP`` desugars to."""
    return Mu(binder, Prefix(TICK, Var(binder)))


def desugar(term: ProcessTerm, alphabet: Alphabet | None = None) -> ProcessTerm:
    """Expand every ``STOP``/``SKIP`` literal into its recursive equation.

    Fresh binder names avoid every identifier in the term (and the given
    alphabet's labels), so expansion can never capture or shadow anything.
    The result is idempotent: desugaring a desugared term returns it as is.
    """
    used = _identifiers(term)
    if alphabet is not None:
        used |= set(alphabet.labels())
    fresh = _fresh_names(used)

    def walk(t: ProcessTerm) -> ProcessTerm:
        if isinstance(t, StopLit):
            return stop_term(next(fresh))
        if isinstance(t, SkipLit):
            return skip_term(next(fresh))
        if isinstance(t, Prefix):
            rest = walk(t.rest)
            return t if rest is t.rest else Prefix(t.event, rest)
        if isinstance(t, Choice):
            rests = tuple(walk(r) for _, r in t.branches)
            if all(new is old for new, (_, old) in zip(rests, t.branches)):
                return t
            return Choice(tuple((g, new) for (g, _), new in zip(t.branches, rests)))
        if isinstance(t, Parallel):
            left, right = walk(t.left), walk(t.right)
            if left is t.left and right is t.right:
                return t
            return Parallel(left, right)
        if isinstance(t, Mu):
            body = walk(t.body)
            return t if body is t.body else Mu(t.binder, body)
        return t

    return walk(term)


def syntactic_alphabet(term: ProcessTerm) -> Alphabet:
    """Named events occurring as prefixes or guards anywhere in the term.

    ``nil`` and ``tick`` are implicit alphabet members and never collected.
    References are not resolved; their events belong to their own definition.
    """
    events: set = set()
    stack = [term]
    while stack:
        t = stack.pop()
        if isinstance(t, Prefix):
            if isinstance(t.event, Named):
                events.add(t.event)
            stack.append(t.rest)
        elif isinstance(t, Choice):
            for g, r in t.branches:
                if isinstance(g, Named):
                    events.add(g)
                stack.append(r)
        elif isinstance(t, Parallel):
            stack.extend((t.left, t.right))
        elif isinstance(t, Mu):
            stack.append(t.body)
    return Alphabet(frozenset(events))


# ---------------------------------------------------------------------------
# Named definitions

@dataclass(frozen=True)
class Definition:
    """One named equation ``name = body`` with its alphabet."""

    name: str
    body: ProcessTerm
    alphabet: Alphabet
    alphabet_declared: bool = False


class Definitions:
    """A set of named process equations, validated as a whole.

    Every reference must resolve, reference cycles must pass through a
    guard, no cycle may run through a parallel operand, bodies must be
    closed, and every named event in a body must belong to that
    definition's alphabet.
    """

    def __init__(self, entries: Iterable[Definition] = ()):
        table: dict = {}
        for d in entries:
            if d.name in table:
                raise DefinitionError(d.name, f"duplicate definition of {d.name!r}")
            _check_ident(d.name, "process name")
            table[d.name] = d
        self._table = table
        self._validate()

    def _validate(self) -> None:
        ref_graph = {}
        for d in self._table.values():
            if d.body._free:
                loose = ", ".join(sorted(d.body._free))
                raise DefinitionError(
                    d.name, f"definition {d.name!r} has unbound variables: {loose}"
                )
            for target in sorted(d.body._refs):
                if target not in self._table:
                    raise DefinitionError(
                        d.name, f"definition {d.name!r} references unknown name {target!r}"
                    )
            for e in syntactic_alphabet(d.body):
                if e not in d.alphabet:
                    raise DefinitionError(
                        d.name,
                        f"event {e.label!r} is not in the alphabet of {d.name!r}",
                    )
            ref_graph[d.name] = d.body._refs

        # Cycles are fine only when every loop passes through a guard.
        unguarded = {name: _unguarded_refs(d.body) for name, d in self._table.items()}
        state: dict = {}

        def visit(name: str, trail: tuple) -> None:
            if state.get(name) == "done":
                return
            if state.get(name) == "busy":
                cycle = " -> ".join(trail[trail.index(name):] + (name,))
                raise DefinitionError(
                    name, f"unguarded reference cycle: {cycle}"
                )
            state[name] = "busy"
            for nxt in sorted(unguarded[name]):
                visit(nxt, trail + (name,))
            state[name] = "done"

        for name in self._table:
            visit(name, ())

        # Recursion through a parallel operand grows without bound; reject it.
        for name, d in self._table.items():
            for r in sorted(_refs_under_parallel(d.body)):
                if name in self._reachable(r, ref_graph) or r == name:
                    raise DefinitionError(
                        name,
                        f"definition {name!r} recurses through a parallel operand "
                        f"(via {r!r}); this composition is not supported",
                    )

    @staticmethod
    def _reachable(start: str, graph: dict) -> set:
        seen: set = set()
        stack = [start]
        while stack:
            n = stack.pop()
            for nxt in graph.get(n, ()):
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return seen

    def __contains__(self, name: str) -> bool:
        return name in self._table

    def __iter__(self) -> Iterator[Definition]:
        return iter(self._table.values())

    def __len__(self) -> int:
        return len(self._table)

    def names(self) -> tuple:
        return tuple(self._table)

    def get(self, name: str) -> Definition:
        if name not in self._table:
            raise KeyError(name)
        return self._table[name]

    def body_of(self, name: str) -> ProcessTerm:
        return self.get(name).body

    def alphabet_of(self, name: str) -> Alphabet:
        return self.get(name).alphabet

    def desugared(self) -> "Definitions":
        """A copy with every body's STOP/SKIP literal expanded."""
        return Definitions(
            Definition(d.name, desugar(d.body, d.alphabet), d.alphabet, d.alphabet_declared)
            for d in self
        )


EMPTY_DEFINITIONS = Definitions()
