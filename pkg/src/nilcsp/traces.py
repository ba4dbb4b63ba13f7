"""Finite event traces and the nil-erasure algebra.

A raw trace may record ``nil`` events; the observable form of a trace is
what the environment can see, i.e. the trace with every ``nil`` removed.
``tick`` is an ordinary recorded event and is never erased.  Erasure is a
monoid homomorphism from raw traces to observable traces, which is the
single fact behind the concatenation laws checked by the law harness.

Text format (machine-readable, bit-exact): ``<e1,e2,...>`` with no spaces
inside the angle brackets, ``nil`` and ``tick`` as reserved spellings, and
``<>`` for the empty trace.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .terms import Event, Nil

__all__ = ["Trace", "EMPTY_TRACE", "concat", "erase_nil", "observable_eq"]


@dataclass(frozen=True)
class Trace:
    """An immutable finite sequence of events."""

    items: tuple = ()

    def __post_init__(self) -> None:
        items = tuple(self.items)
        for e in items:
            if not isinstance(e, Event):
                raise TypeError(f"traces hold events, got {e!r}")
        object.__setattr__(self, "items", items)

    @classmethod
    def of(cls, *events: Event) -> "Trace":
        return cls(events)

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self) -> Iterator[Event]:
        return iter(self.items)

    def __getitem__(self, index):
        got = self.items[index]
        return Trace(got) if isinstance(index, slice) else got

    def __add__(self, other: "Trace") -> "Trace":
        return concat(self, other)

    def is_observable(self) -> bool:
        """True iff the trace records no ``nil``."""
        return not any(isinstance(e, Nil) for e in self.items)

    def labels(self) -> tuple:
        return tuple(e.label for e in self.items)

    def render(self) -> str:
        return "<" + ",".join(self.labels()) + ">"

    def __str__(self) -> str:
        return self.render()


EMPTY_TRACE = Trace()


def concat(a: Trace, b: Trace) -> Trace:
    """Sequence concatenation; lengths add."""
    return Trace(a.items + b.items)


def erase_nil(t: Trace) -> Trace:
    """The observable form of ``t``: every ``nil`` removed, order preserved."""
    return Trace(tuple(e for e in t.items if not isinstance(e, Nil)))


def observable_eq(a: Trace, b: Trace) -> bool:
    """Equality modulo nil-erasure: the environment cannot tell ``a`` from ``b``."""
    return erase_nil(a) == erase_nil(b)
