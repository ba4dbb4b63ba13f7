import itertools

import pytest

from nilcsp import (
    Alphabet,
    Choice,
    Mu,
    NIL,
    Named,
    Parallel,
    ParseError,
    Prefix,
    Ref,
    SemanticError,
    SkipLit,
    StopLit,
    Var,
    gen_terms,
    parse,
    parse_expression,
    render,
    render_definition,
)

coin = Named("coin")
choc = Named("choc")


class TestParse:
    def test_vending_machine(self):
        f = parse("VMS = coin -> choc -> coin -> choc -> STOP")
        body = f.definitions.body_of("VMS")
        assert body == Prefix(coin, Prefix(choc, Prefix(coin, Prefix(choc, StopLit()))))
        assert f.definitions.alphabet_of("VMS").labels() == ("choc", "coin")
        assert f.main is None

    def test_idle_loop_equation(self):
        f = parse("S = mu X . nil -> X")
        assert f.definitions.body_of("S") == Mu("X", Prefix(NIL, Var("X")))

    def test_guarded_choice(self):
        f = parse("VMONE = coin -> (choc -> SKIP | toffee -> SKIP)")
        body = f.definitions.body_of("VMONE")
        assert body == Prefix(
            coin,
            Choice(((choc, SkipLit()), (Named("toffee"), SkipLit()))),
        )

    def test_malformed_input_position(self):
        with pytest.raises(ParseError) as err:
            parse("P = ->")
        assert err.value.line == 1
        assert err.value.column == 5
        assert err.value.expected

    def test_empty_file(self):
        f = parse("")
        assert len(f.definitions) == 0
        assert f.main is None

    def test_comments_and_blank_lines(self):
        f = parse("# a machine\n\nP = coin -> STOP  # trailing\n\n# done\n")
        assert "P" in f.definitions

    def test_alphabet_clause(self):
        f = parse("P alpha {coin, choc, toffee} = coin -> STOP")
        assert f.definitions.alphabet_of("P").labels() == ("choc", "coin", "toffee")
        assert f.definitions.get("P").alphabet_declared

    def test_main_expression(self):
        f = parse("P = coin -> STOP\nP || P\n")
        assert f.main == Parallel(Ref("P"), Ref("P"))

    def test_definition_after_main_rejected(self):
        with pytest.raises(ParseError, match="precede"):
            parse("P = coin -> STOP\ncoin -> P\nQ = STOP\n")

    def test_parenthesized_multiline_definition(self):
        f = parse("P = coin -> (\n  choc -> STOP\n  | toffee -> STOP\n)\n")
        assert "P" in f.definitions

    def test_unicode_synonyms(self):
        ascii_file = parse("P = coin -> (choc -> SKIP | toffee -> SKIP) || mu X . nil -> X")
        unicode_file = parse("P = coin → (choc → SKIP | toffee → SKIP) ∥ μ X . nil → X")
        assert ascii_file.definitions.body_of("P") == unicode_file.definitions.body_of("P")

    def test_unicode_tick(self):
        from nilcsp import TICK

        assert parse_expression("✓ -> SKIP") == Prefix(TICK, SkipLit())

    def test_precedence_arrow_then_bar_then_parallel(self):
        got = parse_expression("a -> STOP | b -> STOP || c -> STOP")
        assert got == Parallel(
            Choice(((Named("a"), StopLit()), (Named("b"), StopLit()))),
            Prefix(Named("c"), StopLit()),
        )

    def test_parallel_left_associative(self):
        got = parse_expression("STOP || SKIP || STOP")
        assert got == Parallel(Parallel(StopLit(), SkipLit()), StopLit())

    def test_mu_extends_maximally_right(self):
        # the body swallows the rest of the expression, parallel included
        got = parse_expression("mu X . coin -> STOP || choc -> STOP")
        assert got == Mu(
            "X", Parallel(Prefix(coin, StopLit()), Prefix(choc, StopLit()))
        )
        # consequence: a recursion variable would land inside the parallel
        with pytest.raises(SemanticError, match="parallel"):
            parse_expression("mu X . coin -> X || choc -> STOP")


class TestResolutionErrors:
    def test_unbound_name(self):
        with pytest.raises(SemanticError, match="unbound name 'Q'"):
            parse("P = coin -> Q")

    def test_duplicate_definition(self):
        with pytest.raises(SemanticError, match="duplicate"):
            parse("P = STOP\nP = SKIP\n")

    def test_nil_choice_guard(self):
        with pytest.raises(SemanticError, match="nil"):
            parse("P = nil -> STOP | coin -> STOP")

    def test_duplicate_choice_guards(self):
        with pytest.raises(SemanticError, match="duplicate"):
            parse("P = coin -> STOP | coin -> SKIP")

    def test_unguarded_alternative(self):
        with pytest.raises(SemanticError, match="guarded"):
            parse("P = STOP | coin -> STOP")

    def test_alphabet_violation_keeps_position(self):
        with pytest.raises(SemanticError) as err:
            parse("# comment\nP alpha {coin} = choc -> STOP")
        assert err.value.line == 2

    def test_binder_shadowing_definition(self):
        with pytest.raises(SemanticError, match="shadows"):
            parse("P = STOP\nQ = mu P . coin -> P\n")

    def test_unguarded_recursion(self):
        with pytest.raises(SemanticError, match="unguarded"):
            parse("P = mu X . X")

    def test_reserved_words_rejected_as_names(self):
        for bad in ("mu = STOP", "nil = STOP", "P = STOP || alpha"):
            with pytest.raises((ParseError, SemanticError)):
                parse(bad)

    def test_error_positions_inside_input(self):
        sources = ["P = ->", "P = (coin -> STOP", "P = coin ->", "=", "P = foo bar"]
        for src in sources:
            with pytest.raises((ParseError, SemanticError)) as err:
                parse(src)
            if isinstance(err.value, ParseError):
                lines = src.split("\n")
                assert 1 <= err.value.line <= len(lines)
                assert err.value.column >= 1


class TestRender:
    def test_direct_rendering(self):
        assert render(Prefix(coin, Prefix(choc, StopLit()))) == "coin -> choc -> STOP"

    def test_idle_loop_equation(self):
        assert render(Mu("X", Prefix(NIL, Var("X")))) == "mu X . nil -> X"

    def test_minimal_parens_for_choice_under_prefix(self):
        term = Prefix(coin, Choice(((choc, SkipLit()), (Named("toffee"), SkipLit()))))
        assert render(term) == "coin -> (choc -> SKIP | toffee -> SKIP)"

    def test_mu_parenthesized_when_something_follows(self):
        term = Parallel(Mu("X", Prefix(coin, Var("X"))), StopLit())
        assert render(term) == "(mu X . coin -> X) || STOP"

    def test_ascii_only_output(self):
        term = parse_expression("coin → (choc → SKIP | toffee → SKIP) ∥ μ X . nil → X")
        text = render(term)
        assert text.isascii()
        assert "→" not in text

    def test_definition_rendering(self):
        f = parse("P alpha {coin,choc} = coin -> STOP")
        assert render_definition(f.definitions.get("P")) == "P alpha {choc,coin} = coin -> STOP"
        g = parse("P = coin -> STOP")
        assert render_definition(g.definitions.get("P")) == "P = coin -> STOP"


class TestRoundTrip:
    def test_generated_terms(self):
        for term in itertools.islice(gen_terms(19, 7, Alphabet.of("a", "b", "c")), 400):
            assert parse_expression(render(term)) == term

    @pytest.mark.parametrize(
        "source",
        [
            "coin -> choc -> STOP",
            "mu X . nil -> X",
            "mu X . coin -> mu Y . choc -> X",
            "(mu X . coin -> X) || mu Y . choc -> Y",
            "a -> STOP | b -> STOP || c -> STOP",
            "a -> (b -> STOP | c -> SKIP)",
            "STOP || (SKIP || STOP)",
            "(a -> STOP | b -> STOP) || c -> STOP || d -> STOP",
            "a -> (mu X . b -> X) | c -> STOP",
            "nil -> a -> nil -> STOP",
        ],
    )
    def test_handwritten_round_trips(self, source):
        term = parse_expression(source)
        assert parse_expression(render(term)) == term
