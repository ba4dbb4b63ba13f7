import itertools

import pytest

from oracle import naive_observable_traces, naive_truncated

from conftest import expr

from nilcsp import (
    Alphabet,
    Engine,
    NIL,
    Named,
    Parallel,
    Prefix,
    Ref,
    Status,
    StopLit,
    TICK,
    TermError,
    TickInParallelError,
    Trace,
    Transition,
    UnboundNameError,
    Var,
    gen_terms,
    parse,
    skip_term,
    stop_term,
)

coin = Named("coin")
choc = Named("choc")
a = Named("a")
b = Named("b")


class TestStep:
    def test_prefix_rule(self, engine):
        term = expr("coin -> choc -> STOP")
        assert engine.step(term) == {Transition(coin, expr("choc -> STOP"))}

    def test_idle_loop_offers_nil_to_itself(self, engine):
        loop = stop_term()
        assert engine.step(loop) == {Transition(NIL, loop)}

    def test_choice_offers_each_branch(self, engine):
        term = expr("choc -> SKIP | toffee -> SKIP")
        labels = {t.label.label for t in engine.step(term)}
        assert labels == {"choc", "toffee"}

    def test_parallel_nil_idles_each_side_independently(self, engine):
        p = expr("a -> STOP")
        q = expr("b -> STOP")
        term = Parallel(Prefix(NIL, p), Prefix(NIL, q))
        assert engine.step(term) == {
            Transition(NIL, Parallel(p, Prefix(NIL, q))),
            Transition(NIL, Parallel(Prefix(NIL, p), q)),
        }
        # and the observable behavior matches the composition without nils
        assert engine.trace_equiv(term, Parallel(p, q), 6) == (True, None)

    def test_parallel_synchronizes_shared_events(self, engine):
        # both operands speak {a}: the event happens once, together
        term = Parallel(expr("a -> STOP"), expr("a -> STOP"))
        traces = engine.observable_traces(term, 4)
        assert {t.render() for t in traces.traces} == {"<>", "<a>"}

    def test_parallel_blocks_on_disagreement(self, engine):
        # both speak {a,b} but insist on different first events: deadlock
        term = Parallel(expr("a -> b -> STOP"), expr("b -> a -> STOP"))
        traces = engine.observable_traces(term, 4)
        assert {t.render() for t in traces.traces} == {"<>"}

    def test_parallel_interleaves_private_events(self, engine):
        term = Parallel(expr("a -> STOP"), expr("b -> STOP"))
        traces = engine.observable_traces(term, 4)
        assert {t.render() for t in traces.traces} == {"<>", "<a>", "<b>", "<a,b>", "<b,a>"}

    def test_declared_alphabet_governs_synchronization(self):
        # P's declared alphabet includes b, so initially b is shared and
        # blocked; with only the syntactic alphabet it interleaves freely.
        # Alphabets are recomputed per step, so once P is exhausted (an idle
        # loop with an empty syntactic alphabet) it stops constraining b.
        defs = parse("P alpha {a,b} = a -> STOP\n").definitions.desugared()
        engine = Engine(defs)
        term = Parallel(Ref("P"), expr("b -> STOP"))
        got = {t.render() for t in engine.observable_traces(term, 4).traces}
        assert got == {"<>", "<a>", "<a,b>"}

        defs2 = parse("P = a -> STOP\n").definitions.desugared()
        engine2 = Engine(defs2)
        got2 = {t.render() for t in engine2.observable_traces(term, 4).traces}
        assert got2 == {"<>", "<a>", "<b>", "<a,b>", "<b,a>"}

    def test_tick_under_parallel_rejected(self, engine):
        with pytest.raises(TickInParallelError):
            engine.step(Parallel(skip_term(), expr("a -> STOP")))
        with pytest.raises(TickInParallelError):
            engine.observable_traces(Parallel(expr("a -> SKIP"), expr("a -> STOP")), 3)

    def test_surface_literals_rejected(self, engine):
        with pytest.raises(TermError, match="desugar"):
            engine.step(StopLit())

    def test_open_terms_rejected(self, engine):
        with pytest.raises(TermError, match="unbound"):
            engine.step(Var("X"))

    def test_unknown_reference_rejected(self, engine):
        with pytest.raises(UnboundNameError):
            engine.step(Ref("NOPE"))

    def test_determinism(self, engine):
        term = expr("a -> STOP | b -> SKIP")
        assert engine.step(term) == engine.step(term)
        assert Engine().step(term) == Engine().step(term)


class TestSilentClosure:
    def test_idle_loop_is_a_singleton(self, engine):
        loop = stop_term()
        assert engine.silent_closure(loop) == {loop}

    def test_nil_prefix_reaches_through(self, engine):
        target = expr("coin -> STOP")
        term = Prefix(NIL, target)
        assert engine.silent_closure(term) == {term, target}

    def test_no_silent_moves(self, engine):
        term = expr("coin -> STOP")
        assert engine.silent_closure(term) == {term}


class TestObservableStep:
    def test_nil_is_transparent(self, engine):
        p = expr("coin -> a -> STOP")
        got = engine.observable_step(Prefix(NIL, p))
        assert got == {Transition(coin, expr("a -> STOP"))}

    def test_idle_loop_offers_nothing(self, engine):
        assert engine.observable_step(stop_term()) == frozenset()

    def test_termination_loop_offers_tick(self, engine):
        loop = skip_term()
        assert engine.observable_step(loop) == {Transition(TICK, loop)}


class TestObservableTraces:
    def test_vms_golden(self, vms):
        engine = Engine(vms)
        ts = engine.observable_traces(vms.body_of("VMS"), 8)
        assert {t.render() for t in ts.traces} == {
            "<>", "<coin>", "<coin,choc>", "<coin,choc,coin>", "<coin,choc,coin,choc>",
        }
        assert ts.truncated is False

    def test_idle_loop(self, engine):
        ts = engine.observable_traces(stop_term(), 8)
        assert ts.traces == {Trace()}
        assert ts.truncated is False

    def test_termination_loop_depth_two(self, engine):
        ts = engine.observable_traces(skip_term(), 2)
        assert {t.render() for t in ts.traces} == {"<>", "<tick>", "<tick,tick>"}
        assert ts.truncated is True

    def test_zero_budget(self, engine):
        ts = engine.observable_traces(expr("a -> STOP"), 0)
        assert ts.traces == {Trace()}
        assert ts.truncated is True

    def test_monotonic_in_depth(self, engine):
        for term in itertools.islice(gen_terms(23, 6, Alphabet.of("a", "b")), 60):
            smaller = engine.traces(term, 3)
            assert smaller <= engine.traces(term, 4)

    def test_agrees_with_naive_oracle(self, engine):
        for term in itertools.islice(gen_terms(99, 6, Alphabet.of("a", "b")), 150):
            for depth in (0, 2, 4):
                got = engine.observable_traces(term, depth)
                assert got.traces == naive_observable_traces(term, engine.defs, depth)
                assert got.truncated == naive_truncated(term, engine.defs, depth)

    def test_named_definitions_against_oracle(self, vms, vmone):
        for defs, name in ((vms, "VMS"), (vmone, "VMONE")):
            engine = Engine(defs)
            body = defs.body_of(name)
            got = engine.observable_traces(body, 5)
            assert got.traces == naive_observable_traces(body, defs, 5)
            assert got.truncated == naive_truncated(body, defs, 5)


class TestClassify:
    def test_idle_loop_quiescent(self, engine):
        assert engine.classify(stop_term()) is Status.QUIESCENT

    def test_nil_prefix_live(self, engine):
        assert engine.classify(Prefix(NIL, expr("coin -> STOP"))) is Status.LIVE

    def test_termination_loop_terminating(self, engine):
        assert engine.classify(skip_term()) is Status.TERMINATING

    def test_mixed_offers_are_live(self, engine):
        term = expr("tick -> SKIP | a -> STOP")
        assert engine.classify(term) is Status.LIVE


class TestTraceEquiv:
    def test_nil_prefix_invisible(self, engine):
        for term in itertools.islice(gen_terms(51, 5, Alphabet.of("a", "b")), 100):
            assert engine.trace_equiv(Prefix(NIL, term), term, 6) == (True, None)

    def test_idle_loop_differs_from_live_process(self, engine):
        equal, witness = engine.trace_equiv(
            stop_term(), Prefix(NIL, expr("coin -> STOP")), 6
        )
        assert equal is False
        assert witness == Trace.of(coin)

    def test_reflexive(self, engine):
        term = expr("a -> b -> STOP")
        assert engine.trace_equiv(term, term, 5) == (True, None)

    def test_nil_in_parallel_left_and_right(self, engine):
        # nil idling on either side of a composition is unobservable
        for seed in (1, 2, 3):
            terms = gen_terms(seed, 5, Alphabet.of("a", "b"), allow_tick=False)
            p, q = next(terms), next(terms)
            lhs = Parallel(Prefix(NIL, p), Prefix(NIL, q))
            assert engine.trace_equiv(lhs, Parallel(p, q), 6) == (True, None)
            x = Named("a")
            lhs2 = Parallel(Prefix(NIL, p), Prefix(x, q))
            rhs2 = Parallel(p, Prefix(x, q))
            assert engine.trace_equiv(lhs2, rhs2, 6) == (True, None)
