"""Relation schemas that generate the quotient universes.

Each schema knows how to rewrite a term at its root in either direction and
how to build random instances for soundness testing.  Matching is
hand-written per schema: the schemas mention width-indexed macros (identity,
twist, block projections) that a generic first-order matcher cannot see.

Projection macros are recognized by their index list, not their bracket
nesting, so ``<<pi1, pi2>, pi3>`` counts as the identity on ``N^3``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional

from pru.terms import (
    Comp,
    Pair,
    Rec,
    S,
    Term,
    Z,
    is_identity,
    mk_first,
    mk_identity,
    mk_last,
    mk_multi_proj,
    mk_product,
    mk_twist,
    projection_indices,
    twist_widths,
)

Pool = dict  # Arity -> list[Term]


@dataclass(frozen=True)
class RuleSchema:
    """One relation ``lhs ~ rhs``.

    ``forward`` and ``backward`` return every root rewrite in the respective
    direction.  ``backward`` is None when the lhs has a metavariable absent
    from the rhs, so the schema can only be applied left to right.
    """

    id: str
    universe: str
    summary: str
    forward: Callable[[Term], list]
    backward: Optional[Callable[[Term], list]]
    draw: Callable[[random.Random, Pool], Optional[tuple]] = field(repr=False)
    enumerate_all: Optional[Callable[[], Iterator[tuple]]] = field(default=None, repr=False)
    enabled: bool = True

    @property
    def bidirectional(self) -> bool:
        return self.backward is not None

    def apply(self, t: Term, direction: str) -> list:
        if direction == "forward":
            return self.forward(t)
        if direction == "backward":
            return self.backward(t) if self.backward else []
        raise ValueError(f"unknown direction {direction!r}")

    def instances(self, pool: Pool, count: int = 100, seed: int = 0) -> list:
        """Distinct ``(lhs, rhs)`` pairs: exhaustive for width-only schemas,
        otherwise ``count`` random draws from ``pool``."""
        if self.enumerate_all is not None:
            return list(self.enumerate_all())
        rng = random.Random(f"{self.id}:{seed}")
        seen = {}
        attempts = 0
        while len(seen) < count and attempts < 200 * count:
            attempts += 1
            pair = self.draw(rng, pool)
            if pair is not None:
                seen.setdefault(pair, None)
        return list(seen)


def _has_indices(t: Term, n: int, idx) -> bool:
    return t.dom == n and projection_indices(t) == tuple(idx)


def _is_first(t: Term, total: int, a: int) -> bool:
    return _has_indices(t, total, range(1, a + 1))


def _is_last(t: Term, total: int, c: int) -> bool:
    return _has_indices(t, total, range(total - c + 1, total + 1))


def _pick(rng, pool, dom, cod):
    terms = pool.get((dom, cod))
    if not terms:
        return None
    return rng.choice(terms)


def _widths(rng, hi=2):
    return rng.randint(1, hi)


# -- category ---------------------------------------------------------------


def _assoc_comp_fwd(t):
    if isinstance(t, Comp) and isinstance(t.f, Comp):
        return [Comp(Comp(t.g, t.f.g), t.f.f)]
    return []


def _assoc_comp_bwd(t):
    if isinstance(t, Comp) and isinstance(t.g, Comp):
        return [Comp(t.g.g, Comp(t.g.f, t.f))]
    return []


def _assoc_comp_draw(rng, pool):
    a, b, c, d = (_widths(rng) for _ in range(4))
    f, g, h = _pick(rng, pool, a, b), _pick(rng, pool, b, c), _pick(rng, pool, c, d)
    if None in (f, g, h):
        return None
    return Comp(h, Comp(g, f)), Comp(Comp(h, g), f)


def _id_right_fwd(t):
    if isinstance(t, Comp) and is_identity(t.f):
        return [t.g]
    return []


def _id_right_bwd(t):
    return [Comp(t, mk_identity(t.dom))]


def _id_right_draw(rng, pool):
    f = _pick(rng, pool, _widths(rng, 3), _widths(rng, 3))
    if f is None:
        return None
    return Comp(f, mk_identity(f.dom)), f


def _id_left_fwd(t):
    if isinstance(t, Comp) and is_identity(t.g):
        return [t.f]
    return []


def _id_left_bwd(t):
    return [Comp(mk_identity(t.cod), t)]


def _id_left_draw(rng, pool):
    f = _pick(rng, pool, _widths(rng, 3), _widths(rng, 3))
    if f is None:
        return None
    return Comp(mk_identity(f.cod), f), f


# -- bracket / product ------------------------------------------------------------


def _assoc_pair_fwd(t):
    if isinstance(t, Pair) and isinstance(t.f, Pair):
        return [Pair(t.f.f, Pair(t.f.g, t.g))]
    return []


def _assoc_pair_bwd(t):
    if isinstance(t, Pair) and isinstance(t.g, Pair):
        return [Pair(Pair(t.f, t.g.f), t.g.g)]
    return []


def _assoc_pair_draw(rng, pool):
    a = _widths(rng)
    f, g, h = (_pick(rng, pool, a, _widths(rng)) for _ in range(3))
    if None in (f, g, h):
        return None
    return Pair(Pair(f, g), h), Pair(f, Pair(g, h))


def _distrib_fwd(t):
    if isinstance(t, Comp) and isinstance(t.g, Pair):
        return [Pair(Comp(t.g.f, t.f), Comp(t.g.g, t.f))]
    return []


def _distrib_bwd(t):
    if (isinstance(t, Pair) and isinstance(t.f, Comp) and isinstance(t.g, Comp)
            and t.f.f == t.g.f):
        return [Comp(Pair(t.f.g, t.g.g), t.f.f)]
    return []


def _distrib_draw(rng, pool):
    a, b = _widths(rng), _widths(rng)
    g = _pick(rng, pool, a, b)
    f1, f2 = _pick(rng, pool, b, _widths(rng)), _pick(rng, pool, b, _widths(rng))
    if None in (g, f1, f2):
        return None
    return Comp(Pair(f1, f2), g), Pair(Comp(f1, g), Comp(f2, g))


def _comm_fwd(t):
    if isinstance(t, Pair):
        f, g = t.f, t.g
        return [Comp(mk_twist(g.cod, f.cod), Pair(g, f))]
    return []


def _comm_bwd(t):
    if isinstance(t, Comp) and isinstance(t.f, Pair):
        g, f = t.f.f, t.f.g
        if (g.cod, f.cod) in twist_widths(t.g):
            return [Pair(f, g)]
    return []


def _comm_draw(rng, pool):
    a = _widths(rng)
    f, g = _pick(rng, pool, a, _widths(rng)), _pick(rng, pool, a, _widths(rng))
    if None in (f, g):
        return None
    return Pair(f, g), Comp(mk_twist(g.cod, f.cod), Pair(g, f))


def _twist_idem_fwd(t):
    if isinstance(t, Comp):
        inner = twist_widths(t.f)
        outer = twist_widths(t.g)
        if any((b, a) in outer for a, b in inner):
            return [mk_identity(t.dom)]
    return []


def _twist_idem_bwd(t):
    n = t.dom
    if n < 2 or not is_identity(t):
        return []
    return [Comp(mk_twist(n - a, a), mk_twist(a, n - a)) for a in range(1, n)]


def _twist_idem_all(max_width=6):
    for n in range(2, max_width + 1):
        for a in range(1, n):
            b = n - a
            yield Comp(mk_twist(b, a), mk_twist(a, b)), mk_identity(n)


def hexagon_sides(a: int, b: int, c: int) -> tuple:
    """Both sides of the hexagon law on ``N^a x N^b x N^c``."""
    ida, idb, idc = mk_identity(a), mk_identity(b), mk_identity(c)
    lhs = Comp(
        Comp(mk_product(mk_twist(b, c), ida), mk_product(idb, mk_twist(a, c))),
        mk_product(mk_twist(a, b), idc),
    )
    rhs = Comp(
        Comp(mk_product(idc, mk_twist(a, b)), mk_product(mk_twist(a, c), idb)),
        mk_product(ida, mk_twist(b, c)),
    )
    return lhs, rhs


_HEXAGON_CACHE: dict = {}


def _hexagons(n):
    if n not in _HEXAGON_CACHE:
        _HEXAGON_CACHE[n] = [
            hexagon_sides(a, b, n - a - b)
            for a in range(1, n - 1) for b in range(1, n - a)
        ]
    return _HEXAGON_CACHE[n]


def _hexagon_fwd(t):
    if not isinstance(t, Comp) or t.dom != t.cod or t.dom < 3:
        return []
    return [rhs for lhs, rhs in _hexagons(t.dom) if lhs == t]


def _hexagon_bwd(t):
    if not isinstance(t, Comp) or t.dom != t.cod or t.dom < 3:
        return []
    return [lhs for lhs, rhs in _hexagons(t.dom) if rhs == t]


def _hexagon_all(max_width=6):
    for n in range(3, max_width + 1):
        yield from _hexagons(n)


# -- natural number object --------------------------------------------------------


def _nno_left_fwd(t):
    if isinstance(t, Comp) and isinstance(t.g, Rec):
        f = t.g.f
        a = f.dom
        if t.f == mk_product(mk_identity(a), Z):
            return [Comp(f, mk_first(a + 1, a))]
    return []


def _nno_left_draw(rng, pool):
    a, b = _widths(rng), _widths(rng)
    f, g = _pick(rng, pool, a, b), _pick(rng, pool, a + b, b)
    if None in (f, g):
        return None
    lhs = Comp(Rec(f, g), mk_product(mk_identity(a), Z))
    return lhs, Comp(f, mk_first(a + 1, a))


def _nno_right_fwd(t):
    if isinstance(t, Comp) and isinstance(t.g, Rec):
        h = t.g
        a = h.f.dom
        if t.f == mk_product(mk_identity(a), S):
            return [Comp(h.g, Pair(mk_first(a + 1, a), h))]
    return []


def _nno_right_bwd(t):
    if isinstance(t, Comp) and isinstance(t.f, Pair) and isinstance(t.f.g, Rec):
        h = t.f.g
        a = h.f.dom
        if h.g == t.g and _is_first(t.f.f, a + 1, a):
            return [Comp(h, mk_product(mk_identity(a), S))]
    return []


def _nno_right_draw(rng, pool):
    a, b = _widths(rng), _widths(rng)
    f, g = _pick(rng, pool, a, b), _pick(rng, pool, a + b, b)
    if None in (f, g):
        return None
    h = Rec(f, g)
    return Comp(h, mk_product(mk_identity(a), S)), Comp(g, Pair(mk_first(a + 1, a), h))


def _nno_id_fwd(t):
    if isinstance(t, Rec):
        a, b = t.f.arity
        if _is_last(t.g, a + b, b):
            return [Comp(t.f, mk_first(a + 1, a))]
    return []


def _nno_id_bwd(t):
    if isinstance(t, Comp):
        f = t.g
        a, b = f.arity
        if t.f.dom == a + 1 and _is_first(t.f, a + 1, a):
            return [Rec(f, mk_last(a + b, b))]
    return []


def _nno_id_draw(rng, pool):
    a, b = _widths(rng), _widths(rng)
    f = _pick(rng, pool, a, b)
    if f is None:
        return None
    return Rec(f, mk_last(a + b, b)), Comp(f, mk_first(a + 1, a))


# The two schemas below use operators (threaded composition, parameterized
# box product) whose definitions live outside this package's sources.  They
# are implemented under the reading documented on each helper and ship
# disabled; pass include_disabled=True to use them.


def threaded(g: Term, h: Term, a: int) -> Term:
    """``g o_t h = g . <pi_first_a, h>``: run ``g`` on the parameters and ``h``'s output."""
    return Comp(g, Pair(mk_first(h.dom, a), h))


def _nno_comp_sides(f, g1, g2):
    a = f.dom
    lhs = threaded(g1, Rec(f, threaded(g2, g1, a)), a)
    rhs = Rec(threaded(g1, f, a), threaded(g1, g2, a))
    return lhs, rhs


def _nno_comp_fwd(t):
    # g1 . <first_a, f # (g2 . <first_a, g1>)>
    if not (isinstance(t, Comp) and isinstance(t.f, Pair) and isinstance(t.f.g, Rec)):
        return []
    g1, rec = t.g, t.f.g
    f, step = rec.f, rec.g
    a, b = f.arity
    if not _is_first(t.f.f, a + 1, a):
        return []
    if not (isinstance(step, Comp) and isinstance(step.f, Pair) and step.f.g == g1):
        return []
    if not _is_first(step.f.f, a + b, a):
        return []
    g2 = step.g
    return [_nno_comp_sides(f, g1, g2)[1]]


def _nno_comp_bwd(t):
    # (g1 . <first_a, f>) # (g1 . <first_a, g2>)
    if not (isinstance(t, Rec) and isinstance(t.f, Comp) and isinstance(t.g, Comp)):
        return []
    base, step = t.f, t.g
    if base.g != step.g or not isinstance(base.f, Pair) or not isinstance(step.f, Pair):
        return []
    g1, f, g2 = base.g, base.f.g, step.f.g
    a = f.dom
    if not (_is_first(base.f.f, a, a) and _is_first(step.f.f, step.dom, a)):
        return []
    try:
        return [_nno_comp_sides(f, g1, g2)[0]]
    except TypeError:
        return []


def _nno_comp_draw(rng, pool):
    a, b, c = _widths(rng), _widths(rng), _widths(rng)
    f, g1, g2 = _pick(rng, pool, a, b), _pick(rng, pool, a + b, c), _pick(rng, pool, a + c, b)
    if None in (f, g1, g2):
        return None
    return _nno_comp_sides(f, g1, g2)


def box(g1: Term, g2: Term, a: int) -> Term:
    """Parameterized product: on ``(x, y1, y2)`` return ``(g1(x, y1), g2(x, y2))``."""
    b1, b2 = g1.cod, g2.cod
    n = a + b1 + b2
    left = mk_multi_proj(n, [*range(1, a + 1), *range(a + 1, a + b1 + 1)])
    right = mk_multi_proj(n, [*range(1, a + 1), *range(a + b1 + 1, n + 1)])
    return Pair(Comp(g1, left), Comp(g2, right))


def _nno_pair_fwd(t):
    if not (isinstance(t, Rec) and isinstance(t.f, Pair) and isinstance(t.g, Pair)):
        return []
    f1, f2 = t.f.f, t.f.g
    a = f1.dom
    l, r = t.g.f, t.g.g
    if not (isinstance(l, Comp) and isinstance(r, Comp)):
        return []
    g1, g2 = l.g, r.g
    if g1.arity != (a + f1.cod, f1.cod) or g2.arity != (a + f2.cod, f2.cod):
        return []
    if t.g != box(g1, g2, a):
        return []
    return [Pair(Rec(f1, g1), Rec(f2, g2))]


def _nno_pair_bwd(t):
    if not (isinstance(t, Pair) and isinstance(t.f, Rec) and isinstance(t.g, Rec)):
        return []
    (f1, g1), (f2, g2) = t.f.children, t.g.children
    return [Rec(Pair(f1, f2), box(g1, g2, f1.dom))]


def _nno_pair_draw(rng, pool):
    a, b1, b2 = _widths(rng), _widths(rng), _widths(rng)
    f1, f2 = _pick(rng, pool, a, b1), _pick(rng, pool, a, b2)
    g1, g2 = _pick(rng, pool, a + b1, b1), _pick(rng, pool, a + b2, b2)
    if None in (f1, f2, g1, g2):
        return None
    return Rec(Pair(f1, f2), box(g1, g2, a)), Pair(Rec(f1, g1), Rec(f2, g2))


def _no_draw(rng, pool):
    return None


ASSOC_COMP = RuleSchema("assoc-comp", "C", "h.(g.f) ~ (h.g).f",
                        _assoc_comp_fwd, _assoc_comp_bwd, _assoc_comp_draw)
ID_RIGHT = RuleSchema("id-right", "I", "f.id ~ f", _id_right_fwd, _id_right_bwd, _id_right_draw)
ID_LEFT = RuleSchema("id-left", "I", "id.f ~ f", _id_left_fwd, _id_left_bwd, _id_left_draw)

ASSOC_PAIR = RuleSchema("assoc-pair", "CatX", "<<f,g>,h> ~ <f,<g,h>>",
                        _assoc_pair_fwd, _assoc_pair_bwd, _assoc_pair_draw)
DISTRIB = RuleSchema("distrib", "CatX", "<f1,f2>.g ~ <f1.g, f2.g>",
                     _distrib_fwd, _distrib_bwd, _distrib_draw)
ALMOST_COMM = RuleSchema("almost-comm", "CatX", "<f,g> ~ tw.<g,f>",
                         _comm_fwd, _comm_bwd, _comm_draw)
TWIST_IDEM = RuleSchema("twist-idem", "CatX", "tw.tw ~ id", _twist_idem_fwd, _twist_idem_bwd,
                        _no_draw, _twist_idem_all)
HEXAGON = RuleSchema("hexagon", "CatX",
                     "(tw_bc x id).(id x tw_ac).(tw_ab x id) ~ (id x tw_ab).(tw_ac x id).(id x tw_bc)",
                     _hexagon_fwd, _hexagon_bwd, _no_draw, _hexagon_all)

NNO_LEFT = RuleSchema("nno-left", "CatN", "(f#g).(id x z) ~ f.pi_first",
                      _nno_left_fwd, None, _nno_left_draw)
NNO_RIGHT = RuleSchema("nno-right", "CatN", "(f#g).(id x s) ~ g.<pi_first, f#g>",
                       _nno_right_fwd, _nno_right_bwd, _nno_right_draw)
NNO_ID = RuleSchema("nno-id", "CatN", "f # pi_last ~ f.pi_first",
                    _nno_id_fwd, _nno_id_bwd, _nno_id_draw)
NNO_COMP = RuleSchema("nno-comp", "CatN", "g1 o_t (f # (g2 o_t g1)) ~ (g1 o_t f) # (g1 o_t g2)",
                      _nno_comp_fwd, _nno_comp_bwd, _nno_comp_draw, enabled=False)
NNO_PAIR = RuleSchema("nno-pair", "CatXN", "<f1,f2> # (g1 [x] g2) ~ <f1#g1, f2#g2>",
                      _nno_pair_fwd, _nno_pair_bwd, _nno_pair_draw, enabled=False)

ALL_RULES = (ASSOC_COMP, ID_RIGHT, ID_LEFT, ASSOC_PAIR, DISTRIB, ALMOST_COMM, TWIST_IDEM,
             HEXAGON, NNO_LEFT, NNO_RIGHT, NNO_ID, NNO_COMP, NNO_PAIR)
RULES_BY_ID = {r.id: r for r in ALL_RULES}
