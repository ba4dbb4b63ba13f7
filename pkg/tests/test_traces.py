from hypothesis import given, strategies as st

from nilcsp import NIL, Named, TICK, Trace, concat, erase_nil, observable_eq

coin = Named("coin")
choc = Named("choc")
x = Named("x")
y = Named("y")

events = st.sampled_from([Named("a"), Named("b"), Named("c"), NIL, TICK])
raw_traces = st.lists(events, max_size=12).map(lambda es: Trace(tuple(es)))


def test_concat_examples():
    assert concat(Trace.of(x), Trace.of(NIL)) == Trace.of(x, NIL)
    assert erase_nil(concat(Trace.of(x), Trace.of(NIL))) == Trace.of(x)
    t = Trace.of(coin, choc)
    assert concat(Trace(), t) == t
    assert concat(Trace.of(coin), Trace.of(choc)) == Trace.of(coin, choc)


def test_erase_nil_examples():
    assert erase_nil(Trace.of(NIL)) == Trace()
    assert erase_nil(Trace.of(x, NIL, y)) == Trace.of(x, y)
    assert erase_nil(Trace.of(NIL, NIL, NIL)) == Trace()
    assert erase_nil(Trace.of(coin, choc)) == Trace.of(coin, choc)


def test_observable_eq_examples():
    assert observable_eq(Trace.of(coin, choc, coin, choc, NIL), Trace.of(coin, choc, coin, choc))
    assert observable_eq(Trace.of(NIL), Trace())
    assert not observable_eq(Trace.of(x), Trace.of(y))


def test_tick_is_observable_and_kept():
    assert erase_nil(Trace.of(TICK, NIL, TICK)) == Trace.of(TICK, TICK)
    assert not observable_eq(Trace.of(TICK, TICK), Trace.of(TICK))


def test_rendering_is_bit_exact():
    assert Trace().render() == "<>"
    assert Trace.of(coin, choc).render() == "<coin,choc>"
    assert Trace.of(NIL).render() == "<nil>"
    assert Trace.of(TICK).render() == "<tick>"
    assert str(Trace.of(coin)) == "<coin>"


def test_sequence_protocol():
    t = Trace.of(coin, choc, coin)
    assert len(t) == 3
    assert list(t) == [coin, choc, coin]
    assert t[0] == coin
    assert t[:2] == Trace.of(coin, choc)
    assert t + Trace.of(choc) == Trace.of(coin, choc, coin, choc)
    assert not Trace.of(NIL).is_observable()
    assert Trace.of(coin).is_observable()


@given(raw_traces)
def test_erase_nil_idempotent(t):
    assert erase_nil(erase_nil(t)) == erase_nil(t)


@given(raw_traces, raw_traces)
def test_erase_nil_is_monoid_homomorphism(a, b):
    # This single property implies the concatenation laws T3, T4, T5.
    assert erase_nil(concat(a, b)) == concat(erase_nil(a), erase_nil(b))


@given(raw_traces)
def test_erased_length(t):
    nils = sum(1 for e in t if e == NIL)
    assert len(erase_nil(t)) == len(t) - nils


@given(raw_traces, raw_traces, raw_traces)
def test_observable_eq_is_an_equivalence(a, b, c):
    assert observable_eq(a, a)
    assert observable_eq(a, b) == observable_eq(b, a)
    if observable_eq(a, b) and observable_eq(b, c):
        assert observable_eq(a, c)
