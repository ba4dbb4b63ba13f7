"""Small-step operational semantics over process terms.

A term offers a finite set of labelled transitions:

* a prefix offers its event;
* a choice offers one transition per branch;
* mu-terms and references are unfolded silently inside the same call, so
  unfolding consumes no label;
* parallel composition synchronizes on named events shared by both
  operands' alphabets, steps solo on events private to one side, and lets
  each side idle on ``nil`` independently (``nil`` never synchronizes).

On top of the raw step relation this module provides silent-step closure
(the set of terms reachable through ``nil`` alone), observable steps,
bounded observable-trace enumeration, liveness classification, and bounded
trace equivalence with a shortest-divergence witness.

``tick`` arising anywhere under a parallel composition is rejected:
distributed termination is out of scope.

The :class:`Engine` memoizes per definition set and is the cheap way to
run many queries; the module-level functions are one-shot conveniences.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .terms import (
    Alphabet,
    Choice,
    Definitions,
    EMPTY_DEFINITIONS,
    Mu,
    Nil,
    Parallel,
    Prefix,
    ProcessTerm,
    Ref,
    SkipLit,
    StopLit,
    TermError,
    Tick,
    Var,
    syntactic_alphabet,
    unfold,
)
from .traces import Trace

__all__ = [
    "Transition",
    "TraceSet",
    "Status",
    "Engine",
    "SemanticsError",
    "TickInParallelError",
    "UnboundNameError",
    "step",
    "silent_closure",
    "observable_step",
    "observable_traces",
    "classify",
    "trace_equiv",
]

#: Hard ceiling on silent-closure size; guarded terms stay far below it.
_CLOSURE_LIMIT = 100_000


class SemanticsError(Exception):
    """The semantics cannot be applied to this term."""


class TickInParallelError(SemanticsError):
    """``tick`` arose under a parallel composition (unsupported)."""


class UnboundNameError(SemanticsError):
    """A reference does not resolve against the given definitions."""


@dataclass(frozen=True)
class Transition:
    """One offered move: an event label and the successor term."""

    label: object
    successor: ProcessTerm


class Status(Enum):
    """What a term can still do, observably.

    ``QUIESCENT``: no observable transition after any silent steps — only
    nil remains.  ``TERMINATING``: observable transitions exist and all are
    ``tick``.  ``LIVE``: some named observable transition exists.
    """

    LIVE = "live"
    QUIESCENT = "quiescent"
    TERMINATING = "terminating"


@dataclass(frozen=True)
class TraceSet:
    """Observable traces up to an event budget.

    The set is prefix-closed, contains the empty trace, and records no
    ``nil``.  ``truncated`` is true iff some trace of exactly ``depth``
    observable events could be extended further.
    """

    traces: frozenset
    depth: int
    truncated: bool

    def __contains__(self, t: Trace) -> bool:
        return t in self.traces

    def __iter__(self):
        return iter(sorted(self.traces, key=lambda t: (len(t), t.labels())))

    def __len__(self) -> int:
        return len(self.traces)


class Engine:
    """Memoizing evaluator for the step semantics over one definition set."""

    def __init__(self, defs: Definitions | None = None):
        self.defs = defs if defs is not None else EMPTY_DEFINITIONS
        self._step: dict = {}
        self._closure: dict = {}
        self._obstep: dict = {}
        self._traces: dict = {}
        self._trunc: dict = {}

    # -- raw step relation --------------------------------------------------

    def step(self, term: ProcessTerm) -> frozenset:
        """All transitions the term offers (unfolding is label-free)."""
        got = self._step.get(term)
        if got is None:
            got = self._compute_step(term)
            self._step[term] = got
        return got

    def _compute_step(self, term: ProcessTerm) -> frozenset:
        if isinstance(term, Prefix):
            return frozenset({Transition(term.event, term.rest)})
        if isinstance(term, Choice):
            return frozenset(Transition(g, r) for g, r in term.branches)
        if isinstance(term, Mu):
            return self.step(unfold(term))
        if isinstance(term, Ref):
            if term.name not in self.defs:
                raise UnboundNameError(f"unknown process name {term.name!r}")
            return self.step(self.defs.body_of(term.name))
        if isinstance(term, Parallel):
            return self._step_parallel(term)
        if isinstance(term, (StopLit, SkipLit)):
            raise TermError("surface STOP/SKIP literal reached the semantics; desugar first")
        if isinstance(term, Var):
            raise TermError(f"open term: unbound variable {term.name!r}")
        raise TermError(f"not a process term: {term!r}")

    def _step_parallel(self, term: Parallel) -> frozenset:
        lt = self.step(term.left)
        rt = self.step(term.right)
        for tr in lt | rt:
            if isinstance(tr.label, Tick):
                raise TickInParallelError(
                    "tick under parallel composition: distributed termination "
                    "is not supported"
                )
        la = self._operand_alphabet(term.left)
        ra = self._operand_alphabet(term.right)
        out = set()
        for tr in lt:
            if isinstance(tr.label, Nil):
                out.add(Transition(tr.label, Parallel(tr.successor, term.right)))
            elif tr.label in ra:  # shared: both sides must move together
                for other in rt:
                    if other.label == tr.label:
                        out.add(Transition(tr.label, Parallel(tr.successor, other.successor)))
            else:  # private to the left side
                out.add(Transition(tr.label, Parallel(tr.successor, term.right)))
        for tr in rt:
            if isinstance(tr.label, Nil):
                out.add(Transition(tr.label, Parallel(term.left, tr.successor)))
            elif tr.label not in la:  # private to the right side
                out.add(Transition(tr.label, Parallel(term.left, tr.successor)))
        return frozenset(out)

    def _operand_alphabet(self, operand: ProcessTerm) -> Alphabet:
        # A bare reference carries its definition's declared alphabet; any
        # other operand speaks for itself syntactically.
        if isinstance(operand, Ref):
            if operand.name not in self.defs:
                raise UnboundNameError(f"unknown process name {operand.name!r}")
            return self.defs.alphabet_of(operand.name)
        return syntactic_alphabet(operand)

    # -- silent steps ---------------------------------------------------------

    def silent_closure(self, term: ProcessTerm) -> frozenset:
        """Terms reachable through zero or more ``nil`` transitions."""
        got = self._closure.get(term)
        if got is None:
            seen = {term}
            frontier = [term]
            while frontier:
                current = frontier.pop()
                for tr in self.step(current):
                    if isinstance(tr.label, Nil) and tr.successor not in seen:
                        seen.add(tr.successor)
                        frontier.append(tr.successor)
                        if len(seen) > _CLOSURE_LIMIT:
                            raise SemanticsError(
                                "silent closure exceeded the state limit; "
                                "the term spins on nil without repeating"
                            )
            got = frozenset(seen)
            self._closure[term] = got
        return got

    def observable_step(self, term: ProcessTerm) -> frozenset:
        """Non-nil transitions available after any number of silent steps."""
        got = self._obstep.get(term)
        if got is None:
            out = set()
            for reached in self.silent_closure(term):
                for tr in self.step(reached):
                    if not isinstance(tr.label, Nil):
                        out.add(tr)
            got = frozenset(out)
            self._obstep[term] = got
        return got

    # -- bounded traces -------------------------------------------------------

    def traces(self, term: ProcessTerm, depth: int) -> frozenset:
        """Prefix-closed observable traces of length at most ``depth``."""
        if depth <= 0:
            return frozenset({Trace()})
        key = (term, depth)
        got = self._traces.get(key)
        if got is None:
            out = {Trace()}
            for tr in self.observable_step(term):
                head = (tr.label,)
                for tail in self.traces(tr.successor, depth - 1):
                    out.add(Trace(head + tail.items))
            got = frozenset(out)
            self._traces[key] = got
        return got

    def truncated(self, term: ProcessTerm, depth: int) -> bool:
        """True iff some depth-length trace still has an observable extension."""
        if depth <= 0:
            return bool(self.observable_step(term))
        key = (term, depth)
        got = self._trunc.get(key)
        if got is None:
            got = any(
                self.truncated(tr.successor, depth - 1)
                for tr in self.observable_step(term)
            )
            self._trunc[key] = got
        return got

    def observable_traces(self, term: ProcessTerm, depth: int) -> TraceSet:
        if depth < 0:
            raise ValueError("depth must be non-negative")
        found = self.traces(term, depth)
        result = TraceSet(found, depth, self.truncated(term, depth))
        assert Trace() in result.traces
        assert all(t.is_observable() for t in result.traces)
        assert all(t[:n] in result.traces for t in result.traces for n in range(len(t)))
        return result

    # -- classification and equivalence ----------------------------------------

    def classify(self, term: ProcessTerm) -> Status:
        offered = self.observable_step(term)
        if not offered:
            return Status.QUIESCENT
        if all(isinstance(tr.label, Tick) for tr in offered):
            return Status.TERMINATING
        return Status.LIVE

    def trace_equiv(self, a: ProcessTerm, b: ProcessTerm, depth: int):
        """Set equality of bounded observable traces.

        Returns ``(True, None)`` or ``(False, witness)`` where the witness
        is a shortest trace in the symmetric difference (ties broken by
        label order, so runs are reproducible).
        """
        ta = self.traces(a, depth)
        tb = self.traces(b, depth)
        if ta == tb:
            return True, None
        witness = min(ta ^ tb, key=lambda t: (len(t), t.labels()))
        return False, witness


# ---------------------------------------------------------------------------
# One-shot conveniences

def step(term: ProcessTerm, defs: Definitions | None = None) -> frozenset:
    return Engine(defs).step(term)


def silent_closure(term: ProcessTerm, defs: Definitions | None = None) -> frozenset:
    return Engine(defs).silent_closure(term)


def observable_step(term: ProcessTerm, defs: Definitions | None = None) -> frozenset:
    return Engine(defs).observable_step(term)


def observable_traces(
    term: ProcessTerm, defs: Definitions | None = None, depth: int = 8
) -> TraceSet:
    return Engine(defs).observable_traces(term, depth)


def classify(term: ProcessTerm, defs: Definitions | None = None) -> Status:
    return Engine(defs).classify(term)


def trace_equiv(
    a: ProcessTerm, b: ProcessTerm, defs: Definitions | None = None, depth: int = 8
):
    return Engine(defs).trace_equiv(a, b, depth)
