"""Evaluation of descriptions as functions on tuples of naturals.

``evaluate`` is the quotient map from descriptions to the functions they
describe; ``fingerprint`` restricts that function to a finite input grid so
descriptions can be compared and partitioned.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Sequence

from pru.terms import Arity, ArityError, Comp, Pair, Proj, Rec, Succ, Term, Zero

__all__ = [
    "ArityMismatch",
    "Budget",
    "BudgetExceeded",
    "DEFAULT_BUDGET",
    "Fingerprint",
    "evaluate",
    "fingerprint",
    "grid",
    "semantically_equal_on",
]


class BudgetExceeded(RuntimeError):
    """Evaluation ran past its step or magnitude budget.

    This is a cutoff, not a semantic failure: every description denotes a
    total function.
    """


class ArityMismatch(ArityError):
    pass


@dataclass(frozen=True)
class Budget:
    max_steps: int = 10**6
    max_bits: int = 4096

    def __post_init__(self):
        if self.max_steps < 1 or self.max_bits < 1:
            raise ValueError("budget bounds must be positive")


DEFAULT_BUDGET = Budget()


class _Run:
    __slots__ = ("steps", "budget")

    def __init__(self, budget):
        self.steps = 0
        self.budget = budget

    def tick(self):
        self.steps += 1
        if self.steps > self.budget.max_steps:
            raise BudgetExceeded(f"more than {self.budget.max_steps} evaluation steps")

    def check(self, value):
        if value.bit_length() > self.budget.max_bits:
            raise BudgetExceeded(f"intermediate value exceeds {self.budget.max_bits} bits")
        return value


def _eval(t: Term, x: tuple, run: _Run) -> tuple:
    run.tick()
    if isinstance(t, Zero):
        return (0,)
    if isinstance(t, Succ):
        return (run.check(x[0] + 1),)
    if isinstance(t, Proj):
        return (x[t.i - 1],)
    if isinstance(t, Comp):
        return _eval(t.g, _eval(t.f, x, run), run)
    if isinstance(t, Pair):
        return _eval(t.f, x, run) + _eval(t.g, x, run)
    if isinstance(t, Rec):
        params, n = x[:-1], x[-1]
        acc = _eval(t.f, params, run)
        for _ in range(n):
            run.tick()
            acc = _eval(t.g, params + acc, run)
        return acc
    raise TypeError(f"not a term: {t!r}")


def evaluate(t: Term, x: Sequence[int], budget: Budget = DEFAULT_BUDGET) -> tuple:
    """Apply the function described by ``t`` to the tuple ``x``.

    Recursion ``f # g`` runs its counter (the last coordinate) upward from 0,
    so ``h(x, 0) = f(x)`` and ``h(x, n+1) = g(x, h(x, n))`` without deep
    call stacks.

    >>> from pru.syntax import parse
    >>> evaluate(parse("(rec (pi 1 1) (comp s (pi 2 2)))"), (2, 3))
    (5,)
    """
    x = tuple(x)
    if len(x) != t.dom:
        raise ArityMismatch(f"{t.text} expects {t.dom} inputs, got {len(x)}")
    if any((not isinstance(v, int)) or v < 0 for v in x):
        raise ValueError(f"inputs must be natural numbers, got {x}")
    return _eval(t, x, _Run(budget))


def grid(dom: int, bound: int):
    """Input tuples of ``{0..bound-1}^dom``, leftmost coordinate most significant."""
    return itertools.product(range(bound), repeat=dom)


@dataclass(frozen=True)
class Fingerprint:
    arity: Arity
    grid: int
    table: tuple
    partial: bool = False

    def to_json(self) -> dict:
        return {
            "arity": list(self.arity),
            "grid": self.grid,
            "table": [list(row) for row in self.table],
            "partial": self.partial,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data: dict) -> "Fingerprint":
        return cls(
            Arity(*data["arity"]),
            data["grid"],
            tuple(tuple(row) for row in data["table"]),
            bool(data["partial"]),
        )

    def restrict(self, bound: int) -> tuple:
        """Table entries for the sub-grid ``{0..bound-1}^dom``."""
        if bound > self.grid:
            raise ValueError("can only restrict to a smaller grid")
        keep = []
        for k, x in enumerate(grid(self.arity.dom, self.grid)):
            if k >= len(self.table):
                break
            if all(v < bound for v in x):
                keep.append(self.table[k])
        return tuple(keep)


def fingerprint(t: Term, grid_bound: int, budget: Budget = DEFAULT_BUDGET) -> Fingerprint:
    """Value table of ``t`` on the grid ``{0..grid_bound-1}^dom``.

    If the budget runs out on some input, the table stops there and the
    fingerprint is marked partial.  The budget applies per input tuple.
    """
    if grid_bound < 1:
        raise ValueError("grid bound must be at least 1")
    rows = []
    partial = False
    for x in grid(t.dom, grid_bound):
        try:
            rows.append(_eval(t, x, _Run(budget)))
        except BudgetExceeded:
            partial = True
            break
    return Fingerprint(t.arity, grid_bound, tuple(rows), partial)


def semantically_equal_on(t1: Term, t2: Term, grid_bound: int,
                          budget: Budget = DEFAULT_BUDGET) -> bool:
    if t1.arity != t2.arity:
        raise ArityMismatch(f"arities differ: {t1.arity} vs {t2.arity}")
    f1 = fingerprint(t1, grid_bound, budget)
    f2 = fingerprint(t2, grid_bound, budget)
    return not f1.partial and not f2.partial and f1 == f2
