import itertools
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pru.semantics import (
    ArityMismatch,
    Budget,
    BudgetExceeded,
    Fingerprint,
    evaluate,
    fingerprint,
    grid,
    semantically_equal_on,
)
from pru.syntax import parse
from pru.terms import Comp, Pair, Proj, Rec, S, Z

from strategies import terms

ADD = parse("(rec (pi 1 1) (comp s (pi 2 2)))")
MUL = Rec(Z, Comp(ADD, Pair(Proj(2, 2), Proj(2, 1))))
NULLS = [
    parse("z"),
    parse("(comp z (comp (pi 2 1) (pair s s)))"),
    parse("(comp z (comp s (comp s s)))"),
]


def test_leaves():
    assert evaluate(Z, (5,)) == (0,)
    assert evaluate(S, (5,)) == (6,)
    assert evaluate(Proj(3, 2), (4, 5, 6)) == (5,)


def test_null_descriptions():
    assert evaluate(NULLS[1], (7,)) == (0,)
    fps = [fingerprint(t, 4) for t in NULLS]
    assert fps[0] == fps[1] == fps[2]


@pytest.mark.parametrize("x,y", list(itertools.product(range(6), repeat=2)))
def test_addition_and_multiplication_oracle(x, y):
    assert evaluate(ADD, (x, y)) == (x + y,)
    assert evaluate(MUL, (x, y)) == (x * y,)


def test_counter_is_last_coordinate():
    pred_like = Rec(Z, Proj(2, 1))     # h(x, 0) = 0, h(x, n+1) = x
    assert evaluate(pred_like, (9, 0)) == (0,)
    assert evaluate(pred_like, (9, 3)) == (9,)


def test_large_counter_does_not_recurse_deeply():
    assert evaluate(ADD, (1, 50_000)) == (50_001,)


def test_input_validation():
    with pytest.raises(ArityMismatch):
        evaluate(S, (1, 2))
    with pytest.raises(ValueError):
        evaluate(S, (-1,))


def test_budget():
    with pytest.raises(BudgetExceeded):
        evaluate(ADD, (0, 100), Budget(max_steps=50))
    with pytest.raises(BudgetExceeded):
        evaluate(S, (2**64 - 1,), Budget(max_bits=64))
    assert evaluate(S, (2**64 - 2,), Budget(max_bits=64)) == (2**64 - 1,)


def test_grid_order():
    assert list(grid(2, 2)) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_fingerprint_examples():
    assert fingerprint(Z, 3).table == ((0,), (0,), (0,))
    assert fingerprint(Proj(2, 2), 2).table == ((0,), (1,), (0,), (1,))


def test_partial_fingerprint():
    fp = fingerprint(ADD, 4, Budget(max_steps=8))
    assert fp.partial
    assert len(fp.table) < 16
    assert not semantically_equal_on(ADD, ADD, 4, Budget(max_steps=8))


def test_fingerprint_json_schema():
    fp = fingerprint(ADD, 2)
    data = json.loads(fp.dumps())
    assert set(data) == {"arity", "grid", "table", "partial"}
    assert data["arity"] == [2, 1] and data["grid"] == 2
    assert data["table"] == [[0], [1], [1], [2]]
    assert Fingerprint.from_json(data) == fp


def test_semantically_equal_on():
    assert semantically_equal_on(Comp(Z, S), Z, 4)
    assert not semantically_equal_on(Comp(S, Z), Comp(Z, S), 4)
    with pytest.raises(ArityMismatch):
        semantically_equal_on(S, Proj(2, 1), 2)


@given(terms(), st.integers(1, 3), st.integers(1, 2))
@settings(max_examples=150, deadline=None)
def test_grids_are_monotone(t, k, extra):
    small = fingerprint(t, k)
    big = fingerprint(t, k + extra)
    if not (small.partial or big.partial):
        assert big.restrict(k) == small.table


@given(terms())
@settings(max_examples=150, deadline=None)
def test_outputs_have_codomain_width(t):
    fp = fingerprint(t, 2)
    assert len(fp.table) == 2 ** t.dom or fp.partial
    assert all(len(row) == t.cod and all(v >= 0 for v in row) for row in fp.table)


def _nno_squares_hold(f, g, x, n):
    h = Rec(f, g)
    assert evaluate(h, x + (0,)) == evaluate(f, x)
    assert evaluate(h, x + (n + 1,)) == evaluate(g, x + evaluate(h, x + (n,)))


@given(st.data())
@settings(max_examples=200, deadline=None)
def test_nno_squares(data):
    from strategies import typed_term

    a = data.draw(st.integers(1, 2))
    b = data.draw(st.integers(1, 2))
    f = data.draw(typed_term(a, b, 2))
    g = data.draw(typed_term(a + b, b, 2))
    x = tuple(data.draw(st.lists(st.integers(0, 3), min_size=a, max_size=a)))
    n = data.draw(st.integers(0, 3))
    _nno_squares_hold(f, g, x, n)
