"""Workbench for a CSP fragment with an explicit silent (nil) event.

The package covers the full path from text to behavior: parse process
definitions, run them under a small-step semantics with silent-step
closure, extract observable traces, normalize terms by the nil laws, and
machine-check every law against the trace semantics.  A CLI (``nilcsp``)
and an HTTP session service expose the same operations for scripting and
for the browser animator.
"""

from .terms import (
    Alphabet,
    Choice,
    Definition,
    Definitions,
    DefinitionError,
    Event,
    Mu,
    NIL,
    Named,
    Nil,
    Parallel,
    Prefix,
    ProcessTerm,
    Ref,
    SkipLit,
    StopLit,
    TICK,
    TermError,
    Tick,
    Var,
    desugar,
    skip_term,
    stop_term,
    substitute,
    syntactic_alphabet,
    unfold,
)
from .traces import Trace, concat, erase_nil, observable_eq
from .semantics import (
    Engine,
    SemanticsError,
    Status,
    TickInParallelError,
    TraceSet,
    Transition,
    UnboundNameError,
    classify,
    observable_step,
    observable_traces,
    silent_closure,
    step,
    trace_equiv,
)
from .laws import (
    Counterexample,
    LawId,
    LawReport,
    RewriteStep,
    check_all_laws,
    check_law,
    gen_terms,
    law_equation,
    nil_prefix_count,
    normalize,
    rewrite_once,
)
from .parser import (
    ParseError,
    SemanticError,
    SourceFile,
    parse,
    parse_expression,
    render,
    render_definition,
)

__version__ = "0.1.0"
