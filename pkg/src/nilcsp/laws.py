"""Nil laws: syntactic rewriting, normalization, and the checking harness.

The rewrite engine implements the equational laws for the silent event as
directed rules:

    L1  nil -> (x -> P)        =  x -> P        (special case of L3)
    L2  x -> (nil -> P)        =  x -> P
    L3  nil -> P               =  P
    L5  (nil -> P) || (nil -> Q) = P || Q
    L6  (nil -> P) || (x -> Q)   = P || (x -> Q)

plus the inequality L4 ``nil -> P != STOP`` (checked, never rewritten) and
the trace laws T1..T5 for nil-erasure.  L1 is subsumed by L3 and shares its
audit label; rewriting applies the first matching law in the order
L3, L2, L5, L6 at the outermost, leftmost position.  A rewrite that would
strip the sole guard of a recursion variable (turning ``mu X . nil -> X``
into the illegal ``mu X . X``) is blocked, which is exactly why the idle
loop is its own normal form.

Every law is also checked against the trace semantics on generated terms:
the rewriter and the checker share nothing but the term language, so a bug
in either shows up as a counterexample.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator

from .parser import render
from .semantics import Engine
from .terms import (
    Alphabet,
    Choice,
    Mu,
    NIL,
    Named,
    Nil,
    Parallel,
    Prefix,
    ProcessTerm,
    TICK,
    TermError,
    Var,
    skip_term,
    stop_term,
)
from .traces import Trace, concat, erase_nil

__all__ = [
    "LawId",
    "RewriteStep",
    "Counterexample",
    "LawReport",
    "rewrite_once",
    "normalize",
    "nil_prefix_count",
    "gen_terms",
    "check_law",
    "check_all_laws",
    "law_equation",
    "report_to_dict",
]


class LawId(Enum):
    L1 = "L1"
    L2 = "L2"
    L3 = "L3"
    L4 = "L4"
    L5 = "L5"
    L6 = "L6"
    T1 = "T1"
    T2 = "T2"
    T3 = "T3"
    T4 = "T4"
    T5 = "T5"


PROCESS_LAWS = (LawId.L1, LawId.L2, LawId.L3, LawId.L4, LawId.L5, LawId.L6)
TRACE_LAWS = (LawId.T1, LawId.T2, LawId.T3, LawId.T4, LawId.T5)

_EQUATIONS = {
    LawId.L1: "(nil -> (x -> P)) = (x -> P)",
    LawId.L2: "(x -> (nil -> P)) = (x -> P)",
    LawId.L3: "(nil -> P) = P",
    LawId.L4: "(nil -> P) != STOP  [for P with an observable initial event]",
    LawId.L5: "(nil -> P) || (nil -> Q) = (P || Q)",
    LawId.L6: "(nil -> P) || (x -> Q) = (P || (x -> Q))",
    LawId.T1: "<nil> = <>",
    LawId.T2: "<nil,...,nil> = <>",
    LawId.T3: "<x><nil> = <x>",
    LawId.T4: "<nil><x> = <x>",
    LawId.T5: "<x><nil><y> = <x,y>",
}


def law_equation(law: LawId) -> str:
    """The equation a law asserts, in the surface syntax."""
    return _EQUATIONS[law]


@dataclass(frozen=True)
class RewriteStep:
    """An audit record: applying ``law`` at ``position`` in ``before`` yields ``after``."""

    law: LawId
    position: tuple
    before: ProcessTerm
    after: ProcessTerm


@dataclass(frozen=True)
class Counterexample:
    """A failing instantiation and, for equalities, the diverging trace."""

    instantiation: str
    witness: Trace | None = None


@dataclass
class LawReport:
    """Outcome of checking one law over generated instantiations."""

    law: LawId
    instances_checked: int
    counterexamples: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.counterexamples


def report_to_dict(report: LawReport) -> dict:
    return {
        "law": report.law.value,
        "instances": report.instances_checked,
        "passed": report.passed,
        "counterexamples": [
            {
                "term": c.instantiation,
                "witness": c.witness.render() if c.witness is not None else None,
            }
            for c in report.counterexamples
        ],
    }


# ---------------------------------------------------------------------------
# Rewriting

def _children(term: ProcessTerm) -> tuple:
    if isinstance(term, Prefix):
        return ((0, term.rest),)
    if isinstance(term, Choice):
        return tuple((i, r) for i, (_, r) in enumerate(term.branches))
    if isinstance(term, Parallel):
        return ((0, term.left), (1, term.right))
    if isinstance(term, Mu):
        return ((0, term.body),)
    return ()


def _preorder(term: ProcessTerm) -> Iterator[tuple]:
    stack = [((), term)]
    while stack:
        pos, node = stack.pop()
        yield pos, node
        for i, child in reversed(_children(node)):
            stack.append((pos + (i,), child))


def _law_matches(node: ProcessTerm) -> Iterator[tuple]:
    if isinstance(node, Prefix) and isinstance(node.event, Nil):
        yield LawId.L3, node.rest
    if (
        isinstance(node, Prefix)
        and not isinstance(node.event, Nil)
        and isinstance(node.rest, Prefix)
        and isinstance(node.rest.event, Nil)
    ):
        yield LawId.L2, Prefix(node.event, node.rest.rest)
    if isinstance(node, Parallel):
        left_nil = isinstance(node.left, Prefix) and isinstance(node.left.event, Nil)
        right_prefix = isinstance(node.right, Prefix)
        if left_nil and right_prefix and isinstance(node.right.event, Nil):
            yield LawId.L5, Parallel(node.left.rest, node.right.rest)
        elif left_nil and right_prefix:
            yield LawId.L6, Parallel(node.left.rest, node.right)


def _rebuild(term: ProcessTerm, position: tuple, replacement: ProcessTerm) -> ProcessTerm:
    if not position:
        return replacement
    index, rest = position[0], position[1:]
    if isinstance(term, Prefix) and index == 0:
        return Prefix(term.event, _rebuild(term.rest, rest, replacement))
    if isinstance(term, Choice):
        branches = list(term.branches)
        guard, old = branches[index]
        branches[index] = (guard, _rebuild(old, rest, replacement))
        return Choice(tuple(branches))
    if isinstance(term, Parallel):
        if index == 0:
            return Parallel(_rebuild(term.left, rest, replacement), term.right)
        return Parallel(term.left, _rebuild(term.right, rest, replacement))
    if isinstance(term, Mu) and index == 0:
        return Mu(term.binder, _rebuild(term.body, rest, replacement))
    raise TermError(f"no child {index} at this position")


def rewrite_once(term: ProcessTerm):
    """Apply one law at the outermost, leftmost matching position.

    Returns ``(new_term, step)`` or ``None`` when no law applies.  A match
    whose result would be ill-formed (an unguarded recursion) is skipped:
    the sole nil guard of a mu binder is protected.
    """
    for position, node in _preorder(term):
        for law, replacement in _law_matches(node):
            try:
                rebuilt = _rebuild(term, position, replacement)
            except TermError:
                continue  # the rewrite would unguard a recursion variable
            return rebuilt, RewriteStep(law, position, term, rebuilt)
    return None


def normalize(term: ProcessTerm):
    """Rewrite to a fixpoint; returns the normal form and the step trail.

    Terminates because every applied law strictly reduces the number of
    nil-prefix nodes.  The only nil prefixes left are protected mu guards.
    """
    steps = []
    current = term
    while (result := rewrite_once(current)) is not None:
        current, step = result
        steps.append(step)
    return current, tuple(steps)


def nil_prefix_count(term: ProcessTerm) -> int:
    """Number of nil-prefix nodes; an upper bound on normalization steps."""
    count = 0
    for _, node in _preorder(term):
        if isinstance(node, Prefix) and isinstance(node.event, Nil):
            count += 1
    return count


# ---------------------------------------------------------------------------
# Term generation

def gen_terms(
    seed: int,
    size_bound: int,
    alphabet: Alphabet,
    allow_tick: bool = True,
) -> Iterator[ProcessTerm]:
    """A deterministic endless stream of closed, guarded, desugared terms.

    Terms use at most ``size_bound`` operators.  Every constructor shows up
    with nonzero frequency over the stream: named/nil/tick prefixes, guarded
    choice, parallel composition, mu recursion, and the STOP/SKIP loop
    expansions.  Parallel operands are generated tick-free and without
    recursion variables, matching what the semantics supports.  With
    ``allow_tick=False`` the whole term is tick-free (needed when a term is
    going to be dropped into a parallel context).
    """
    if size_bound < 1:
        raise ValueError("size_bound must be at least 1")
    labels = list(alphabet.labels())
    if not labels:
        raise ValueError("alphabet must be nonempty")
    rng = random.Random(seed)
    while True:
        yield _gen(rng, rng.randint(1, size_bound), labels, allow_tick, ())


def _gen(rng, budget: int, labels: list, allow_tick: bool, binders: tuple) -> ProcessTerm:
    if budget <= 1:
        return _gen_leaf(rng, labels, allow_tick, binders)
    kinds = ["prefix", "prefix", "prefix", "mu"]
    if budget >= 3:
        kinds.append("parallel")
        if len(labels) >= 2 or allow_tick:
            kinds.extend(("choice", "choice"))
    kind = rng.choice(kinds)
    if kind == "prefix":
        return Prefix(
            _gen_event(rng, labels, allow_tick),
            _gen(rng, budget - 1, labels, allow_tick, binders),
        )
    if kind == "choice":
        pool = [Named(l) for l in labels]
        if allow_tick:
            pool.append(TICK)
        width = rng.randint(2, min(3, len(pool)))
        guards = rng.sample(pool, width)
        share = max(1, (budget - 1) // width)
        return Choice(
            tuple(
                (g, _gen(rng, share, labels, allow_tick, binders)) for g in guards
            )
        )
    if kind == "parallel":
        share = max(1, (budget - 1) // 2)
        # Operands never hold tick or a recursion variable: tick under
        # parallel is rejected by the semantics, and recursion through a
        # parallel operand would make silent closure unbounded.
        return Parallel(
            _gen(rng, share, labels, False, ()),
            _gen(rng, share, labels, False, ()),
        )
    binder = f"X{len(binders)}"
    guard = _gen_event(rng, labels, allow_tick)
    body = _gen(rng, budget - 2, labels, allow_tick, binders + (binder,))
    return Mu(binder, Prefix(guard, body))


def _gen_event(rng, labels: list, allow_tick: bool):
    roll = rng.random()
    if roll < 0.2:
        return NIL
    if allow_tick and roll < 0.3:
        return TICK
    return Named(rng.choice(labels))


def _gen_leaf(rng, labels: list, allow_tick: bool, binders: tuple) -> ProcessTerm:
    if binders and rng.random() < 0.5:
        return Var(rng.choice(binders))
    binder = f"X{len(binders)}"
    if allow_tick and rng.random() < 0.3:
        return skip_term(binder)
    return stop_term(binder)


# ---------------------------------------------------------------------------
# Law checking

_DEFAULT_ALPHABET = Alphabet.of("a", "b")


def check_law(
    law: LawId,
    samples: int = 1000,
    size_bound: int = 6,
    depth: int = 6,
    seed: int = 42,
    engine: Engine | None = None,
) -> LawReport:
    """Check one law over ``samples`` generated instantiations.

    Equality laws instantiate their metavariables and compare bounded
    observable traces of both sides; L4 checks the inequality against the
    idle loop for every term with an observable initial event; trace laws
    check the nil-erasure equalities on raw traces.  Deterministic for a
    given seed.
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    if engine is None:
        engine = Engine()
    base = seed * 1_000_003 + list(LawId).index(law)
    rng = random.Random(base)
    if law in TRACE_LAWS:
        return _check_trace_law(law, samples, size_bound, rng)
    return _check_process_law(law, samples, size_bound, depth, base, rng, engine)


def _instantiation_text(**bindings) -> str:
    return ", ".join(f"{k} := {v}" for k, v in bindings.items())


def _check_process_law(
    law: LawId, samples: int, size_bound: int, depth: int, base: int, rng, engine: Engine
) -> LawReport:
    alphabet = _DEFAULT_ALPHABET
    labels = list(alphabet.labels())
    tick_ok = law in (LawId.L1, LawId.L2, LawId.L3, LawId.L4)
    terms_p = gen_terms(base + 101, size_bound, alphabet, allow_tick=tick_ok)
    terms_q = gen_terms(base + 202, size_bound, alphabet, allow_tick=tick_ok)
    stop = stop_term()
    report = LawReport(law, 0)

    attempts = 0
    while report.instances_checked < samples:
        attempts += 1
        if attempts > samples * 1000:
            raise RuntimeError(f"could not draw enough instances for {law.value}")
        p = next(terms_p)
        x = Named(rng.choice(labels))
        if law is LawId.L1:
            lhs, rhs = Prefix(NIL, Prefix(x, p)), Prefix(x, p)
            text = _instantiation_text(x=x.label, P=render(p))
        elif law is LawId.L2:
            lhs, rhs = Prefix(x, Prefix(NIL, p)), Prefix(x, p)
            text = _instantiation_text(x=x.label, P=render(p))
        elif law is LawId.L3:
            lhs, rhs = Prefix(NIL, p), p
            text = _instantiation_text(P=render(p))
        elif law is LawId.L4:
            if not engine.observable_step(p):
                continue  # the proviso: P must offer an observable initial event
            lhs, rhs = Prefix(NIL, p), stop
            text = _instantiation_text(P=render(p))
            equal, _ = engine.trace_equiv(lhs, rhs, depth)
            report.instances_checked += 1
            if equal:  # nil -> P collapsed into STOP: the law failed
                report.counterexamples.append(Counterexample(text, None))
            continue
        elif law is LawId.L5:
            q = next(terms_q)
            lhs = Parallel(Prefix(NIL, p), Prefix(NIL, q))
            rhs = Parallel(p, q)
            text = _instantiation_text(P=render(p), Q=render(q))
        else:  # L6
            q = next(terms_q)
            lhs = Parallel(Prefix(NIL, p), Prefix(x, q))
            rhs = Parallel(p, Prefix(x, q))
            text = _instantiation_text(x=x.label, P=render(p), Q=render(q))
        equal, witness = engine.trace_equiv(lhs, rhs, depth)
        report.instances_checked += 1
        if not equal:
            report.counterexamples.append(Counterexample(text, witness))
    return report


def _check_trace_law(law: LawId, samples: int, size_bound: int, rng) -> LawReport:
    labels = list(_DEFAULT_ALPHABET.labels())
    report = LawReport(law, 0)
    empty = Trace()
    for _ in range(samples):
        x = Named(rng.choice(labels))
        y = Named(rng.choice(labels))
        if law is LawId.T1:
            ok = erase_nil(Trace.of(NIL)) == empty
            text = "<nil>"
        elif law is LawId.T2:
            k = rng.randint(1, max(2, size_bound))
            raw = Trace((NIL,) * k)
            ok = erase_nil(raw) == empty
            text = raw.render()
        elif law is LawId.T3:
            raw = concat(Trace.of(x), Trace.of(NIL))
            ok = erase_nil(raw) == Trace.of(x)
            text = _instantiation_text(x=x.label)
        elif law is LawId.T4:
            raw = concat(Trace.of(NIL), Trace.of(x))
            ok = erase_nil(raw) == Trace.of(x)
            text = _instantiation_text(x=x.label)
        else:  # T5
            raw = concat(concat(Trace.of(x), Trace.of(NIL)), Trace.of(y))
            ok = erase_nil(raw) == Trace.of(x, y)
            text = _instantiation_text(x=x.label, y=y.label)
        report.instances_checked += 1
        if not ok:
            report.counterexamples.append(Counterexample(text, None))
    return report


def check_all_laws(
    samples: int = 1000, size_bound: int = 6, depth: int = 6, seed: int = 42
) -> list:
    """Reports for L1..L6 and T1..T5, in that order, sharing one engine."""
    engine = Engine()
    return [
        check_law(law, samples, size_bound, depth, seed, engine)
        for law in PROCESS_LAWS + TRACE_LAWS
    ]
