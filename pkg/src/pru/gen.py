"""Seeded random generation of well-typed descriptions."""

from __future__ import annotations

import random

from pru.terms import Comp, Pair, Proj, Rec, S, Term, Z


def random_leaf(rng: random.Random, dom: int) -> Term:
    """A size-1 or size-3 term of arity (dom, 1)."""
    if dom == 1:
        return rng.choice([S, Z, Proj(1, 1)])
    p = Proj(dom, rng.randint(1, dom))
    if rng.random() < 0.3:
        return Comp(rng.choice([S, Z]), p)
    return p


def random_term(rng: random.Random, dom: int, cod: int, depth: int = 4,
                max_width: int = 3, allow_rec: bool = True) -> Term:
    """A random term of arity (dom, cod) whose intermediate widths stay below ``max_width``.

    ``depth`` bounds nesting; at depth 0 only leaves and brackets of leaves
    are produced.
    """
    if dom < 1 or cod < 1:
        raise ValueError("arities must be positive")
    if depth <= 0:
        if cod == 1:
            return random_leaf(rng, dom)
        c = rng.randint(1, cod - 1)
        return Pair(random_term(rng, dom, c, 0, max_width), random_term(rng, dom, cod - c, 0, max_width))

    kinds = ["comp"]
    if cod == 1:
        kinds.append("leaf")
    else:
        kinds += ["pair", "pair"]
    if allow_rec and dom >= 2 and dom - 1 + cod <= max_width:
        kinds.append("rec")
    kind = rng.choice(kinds)
    sub = dict(max_width=max_width, allow_rec=allow_rec)
    if kind == "leaf":
        return random_leaf(rng, dom)
    if kind == "pair":
        c = rng.randint(1, cod - 1)
        return Pair(random_term(rng, dom, c, depth - 1, **sub),
                    random_term(rng, dom, cod - c, depth - 1, **sub))
    if kind == "rec":
        a = dom - 1
        return Rec(random_term(rng, a, cod, depth - 1, **sub),
                   random_term(rng, a + cod, cod, depth - 1, **sub))
    m = rng.randint(1, max_width)
    return Comp(random_term(rng, m, cod, depth - 1, **sub), random_term(rng, dom, m, depth - 1, **sub))


def random_arity(rng: random.Random, max_width: int = 3) -> tuple:
    return rng.randint(1, max_width), rng.randint(1, max_width)


def random_terms(count: int, seed: int = 0, depth: int = 4, max_width: int = 3,
                 allow_rec: bool = True):
    """``count`` random terms of random arities, reproducible from ``seed``."""
    rng = random.Random(seed)
    for _ in range(count):
        dom, cod = random_arity(rng, max_width)
        yield random_term(rng, dom, cod, depth, max_width, allow_rec)


def default_pool(per_arity: int = 30, max_width: int = 3, depth: int = 2, seed: int = 0) -> dict:
    """Distinct random terms for every arity up to ``max_width``, keyed by ``Arity``.

    Used to instantiate the metavariables of relation schemas.
    """
    from pru.terms import Arity

    rng = random.Random(f"pool:{seed}")
    pool = {}
    for dom in range(1, max_width + 1):
        for cod in range(1, max_width + 1):
            seen = {}
            attempts = 0
            while len(seen) < per_arity and attempts < 20 * per_arity:
                attempts += 1
                seen.setdefault(random_term(rng, dom, cod, rng.randint(0, depth), max_width), None)
            pool[Arity(dom, cod)] = sorted(seen, key=lambda t: (t.size, t.text))
    return pool
