"""Independent trace-collection oracle for the semantics tests.

Reimplements the step rules and observable-trace collection from scratch:
plain recursion, no memoization, no shared closure machinery.  Traces are
gathered by depth-first search over raw transitions, erasing nils on the
fly; silent cycles are pruned with a per-path visited set that resets at
every observable event.  Slow but obviously faithful to the rules, which
is the point.
"""

from __future__ import annotations

from nilcsp import (
    Choice,
    Definitions,
    Mu,
    Nil,
    Parallel,
    Prefix,
    Ref,
    Tick,
    Trace,
    syntactic_alphabet,
    unfold,
)


def naive_step(term, defs: Definitions):
    if isinstance(term, Prefix):
        return [(term.event, term.rest)]
    if isinstance(term, Choice):
        return [(g, r) for g, r in term.branches]
    if isinstance(term, Mu):
        return naive_step(unfold(term), defs)
    if isinstance(term, Ref):
        return naive_step(defs.body_of(term.name), defs)
    if isinstance(term, Parallel):
        lt = naive_step(term.left, defs)
        rt = naive_step(term.right, defs)
        if any(isinstance(e, Tick) for e, _ in lt + rt):
            raise AssertionError("oracle: tick under parallel")
        la = _operand_alphabet(term.left, defs)
        ra = _operand_alphabet(term.right, defs)
        out = []
        for e, succ in lt:
            if isinstance(e, Nil):
                out.append((e, Parallel(succ, term.right)))
            elif e in ra:
                out.extend(
                    (e, Parallel(succ, rsucc)) for re, rsucc in rt if re == e
                )
            else:
                out.append((e, Parallel(succ, term.right)))
        for e, succ in rt:
            if isinstance(e, Nil):
                out.append((e, Parallel(term.left, succ)))
            elif e not in la:
                out.append((e, Parallel(term.left, succ)))
        return out
    raise AssertionError(f"oracle: cannot step {term!r}")


def _operand_alphabet(operand, defs: Definitions):
    if isinstance(operand, Ref):
        return defs.alphabet_of(operand.name)
    return syntactic_alphabet(operand)


def naive_observable_traces(term, defs: Definitions, depth: int) -> frozenset:
    found = {Trace()}

    def explore(t, prefix: tuple, silent_seen: frozenset) -> None:
        for label, succ in naive_step(t, defs):
            if isinstance(label, Nil):
                if succ in silent_seen:
                    continue
                explore(succ, prefix, silent_seen | {succ})
            elif len(prefix) < depth:
                extended = prefix + (label,)
                found.add(Trace(extended))
                explore(succ, extended, frozenset({succ}))

    explore(term, (), frozenset({term}))
    return frozenset(found)


def naive_truncated(term, defs: Definitions, depth: int) -> bool:
    longer = naive_observable_traces(term, defs, depth + 1)
    return any(len(t) == depth + 1 for t in longer)
