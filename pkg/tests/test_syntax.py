import pytest
from hypothesis import given, settings

from pru.gen import random_terms
from pru.syntax import ParseError, parse, print_term
from pru.terms import ArityError, Comp, Pair, Proj, S, Z, mk_diagonal, mk_identity, mk_multi_proj, mk_product, mk_twist

from strategies import terms

NULL_2 = "(comp z (comp (pi 2 1) (pair s s)))"


def test_leaves():
    assert parse("z") is Z
    assert parse("s") is S
    assert parse("(pi 2 1)") == Proj(2, 1)


def test_null_description():
    assert parse(NULL_2) == Comp(Z, Comp(Proj(2, 1), Pair(S, S)))


def test_print():
    assert print_term(Z) == "z"
    assert print_term(Proj(2, 1)) == "(pi 2 1)"
    assert print_term(Pair(S, Z)) == "(pair s z)"
    assert Comp(S, Z).text == "(comp s z)"


def test_macros_expand():
    assert parse("(id 3)") == mk_identity(3) == mk_multi_proj(3, [1, 2, 3])
    assert parse("(diag 2)") == mk_diagonal(2)
    assert parse("(tw 1 2)") == mk_twist(1, 2)
    assert parse("(proj 3 [3 1])") == mk_multi_proj(3, [3, 1])
    assert parse("(prod s z)") == mk_product(S, Z)
    assert "tw" not in parse("(tw 1 1)").text


def test_whitespace_insensitive():
    assert parse("  (comp\n s\t(comp s  z) )\n") == parse("(comp s (comp s z))")


@pytest.mark.parametrize("text,line,col", [
    ("(comp s", 1, 8),
    ("(foo s)", 1, 2),
    ("s z", 1, 3),
    ("(pi 2\n x)", 2, 2),
    ("", 1, 1),
])
def test_parse_errors_have_positions(text, line, col):
    with pytest.raises(ParseError) as err:
        parse(text)
    assert (err.value.line, err.value.column) == (line, col)


def test_type_errors_surface_from_parse():
    with pytest.raises(ArityError):
        parse("(comp z (pair s s))")
    with pytest.raises(TypeError):
        parse("(pi 1 2)")


def test_round_trip_corpus():
    corpus = list(random_terms(10_000, seed=7))
    assert len({t.text for t in corpus}) > 5000
    for t in corpus:
        assert parse(print_term(t)) == t


@given(terms(depth=4))
@settings(max_examples=300)
def test_round_trip_property(t):
    assert parse(t.text) == t
    assert parse(t.text).text == t.text
