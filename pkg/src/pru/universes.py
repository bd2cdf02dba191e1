"""Algorithmic universes: quotients of descriptions by relation schemas.

The eight universes form a lattice, finest first::

            Desc
           /    \\
          C      I
           \\    /
            Cat
           /    \\
        CatX    CatN
           \\    /
           CatXN
             |
           Func

Each universe inherits the relations of the universes above it.  ``C``,
``I`` and ``Cat`` are decided exactly by canonical forms, ``CatX`` by a
best-effort canonical form backed by bounded search, ``CatN`` and ``CatXN``
by bounded search only, and ``Func`` by comparing value tables.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Union

from pru import rules as R
from pru.semantics import DEFAULT_BUDGET, ArityMismatch, Budget, fingerprint
from pru.syntax import parse
from pru.terms import Pair, Term, positions, projection_indices, replace_at, subterm_at

__all__ = [
    "Caps",
    "Closure",
    "Rewrite",
    "Step",
    "UNIVERSES",
    "Universe",
    "Verdict",
    "closure",
    "equiv",
    "get_universe",
    "is_refined_by",
    "normalize",
    "normalize_best_effort",
    "replay",
    "rewrite_instances",
    "rules_of",
]


@dataclass(frozen=True)
class Universe:
    name: str
    parents: tuple
    own_rules: tuple = ()

    def __str__(self):
        return self.name


UNIVERSES = {
    u.name: u
    for u in (
        Universe("Desc", ()),
        Universe("C", ("Desc",), (R.ASSOC_COMP,)),
        Universe("I", ("Desc",), (R.ID_RIGHT, R.ID_LEFT)),
        Universe("Cat", ("C", "I")),
        Universe("CatX", ("Cat",), (R.ASSOC_PAIR, R.DISTRIB, R.ALMOST_COMM, R.TWIST_IDEM,
                                    R.HEXAGON)),
        Universe("CatN", ("Cat",), (R.NNO_LEFT, R.NNO_RIGHT, R.NNO_ID, R.NNO_COMP)),
        Universe("CatXN", ("CatX", "CatN"), (R.NNO_PAIR,)),
        Universe("Func", ("CatXN",)),
    )
}

UniverseLike = Union[str, Universe]


def get_universe(u: UniverseLike) -> Universe:
    if isinstance(u, Universe):
        return u
    try:
        return UNIVERSES[u]
    except KeyError:
        raise ValueError(f"unknown universe {u!r}; expected one of {', '.join(UNIVERSES)}") from None


def ancestors(u: UniverseLike) -> set:
    """Names of ``u`` and every finer universe it is a quotient of."""
    u = get_universe(u)
    out = {u.name}
    for p in u.parents:
        out |= ancestors(p)
    return out


def is_refined_by(coarse: UniverseLike, fine: UniverseLike) -> bool:
    """True when ``coarse`` is a quotient of ``fine`` (or the same universe)."""
    return get_universe(fine).name in ancestors(coarse)


def rules_of(u: UniverseLike, include_disabled: bool = False) -> frozenset:
    """Cumulative relation schemas of ``u``.

    ``Func`` adds none: it is decided by value tables, not by rewriting.
    """
    u = get_universe(u)
    out = set()
    for name in ancestors(u):
        out.update(r for r in UNIVERSES[name].own_rules if r.enabled or include_disabled)
    return frozenset(out)


def _ordered(rule_set) -> list:
    order = {r.id: k for k, r in enumerate(R.ALL_RULES)}
    return sorted(rule_set, key=lambda r: order[r.id])


# -- single steps -------------------------------------------------------------------


@dataclass(frozen=True)
class Step:
    """One rewrite: ``rule`` applied at ``path`` in ``direction``, giving ``result``."""

    rule: str
    path: tuple
    direction: str
    result: Term

    def to_json(self) -> dict:
        return {"rule": self.rule, "path": list(self.path), "direction": self.direction,
                "result": self.result.text}

    @classmethod
    def from_json(cls, data: dict) -> "Step":
        return cls(data["rule"], tuple(data["path"]), data["direction"], parse(data["result"]))


Rewrite = Step

_OPPOSITE = {"forward": "backward", "backward": "forward"}


def _root_rewrites(sub: Term, rule_list, directions):
    for rule in rule_list:
        for d in directions:
            for r in rule.apply(sub, d):
                yield rule, d, r


def rewrite_instances(t: Term, u: UniverseLike, direction: str = "oriented",
                      include_disabled: bool = False) -> list:
    """Every single-step rewrite of ``t`` under the relations of ``u``.

    ``direction="oriented"`` applies schemas left to right only;
    ``"both"`` also applies the reverse direction wherever it is
    constructible (so identity insertion matches any term).
    """
    if direction not in ("oriented", "both"):
        raise ValueError("direction must be 'oriented' or 'both'")
    dirs = ("forward",) if direction == "oriented" else ("forward", "backward")
    rule_list = _ordered(rules_of(u, include_disabled))
    out = []
    seen = set()
    for path, sub in positions(t):
        for rule, d, r in _root_rewrites(sub, rule_list, dirs):
            new = replace_at(t, path, r)
            key = (rule.id, path, new)
            if key not in seen:
                seen.add(key)
                out.append(Step(rule.id, path, d, new))
    return out


def replay(start: Term, steps: Iterable[Step]) -> Term:
    """Check a witness step by step and return the final term.

    A step from ``x`` to ``y`` is accepted when the named rule rewrites ``x``
    to ``y`` in the stated direction, or ``y`` to ``x`` in the opposite one
    (schemas that are only constructible left to right still witness an
    equivalence read backwards).
    """
    current = start
    for k, step in enumerate(steps):
        rule = R.RULES_BY_ID[step.rule]
        ok = False
        try:
            sub = subterm_at(current, step.path)
            for r in rule.apply(sub, step.direction):
                if replace_at(current, step.path, r) == step.result:
                    ok = True
                    break
            if not ok:
                back = subterm_at(step.result, step.path)
                for r in rule.apply(back, _OPPOSITE[step.direction]):
                    if replace_at(step.result, step.path, r) == current:
                        ok = True
                        break
        except (IndexError, TypeError):
            ok = False
        if not ok:
            raise ValueError(f"witness step {k} ({step.rule} at {list(step.path)}) does not replay")
        current = step.result
    return current


def _invert(start: Term, steps: list) -> list:
    """Steps leading from the end of ``steps`` back to ``start``."""
    terms = [start] + [s.result for s in steps]
    return [
        Step(s.rule, s.path, _OPPOSITE[s.direction], terms[k])
        for k, s in reversed(list(enumerate(steps)))
    ]


# -- canonical forms ------------------------------------------------------------------


class NormalizationLimit(RuntimeError):
    pass


def _postorder(t: Term, prefix=()):
    for k, c in enumerate(t.children):
        yield from _postorder(c, prefix + (k,))
    yield prefix, t


def _run_strategy(t: Term, strategy, prepass=(), limit=10_000):
    """Rewrite innermost-leftmost with the first matching ``(rule, direction, guard)``.

    ``prepass`` entries are tried first, outermost-first, on each round.
    """
    steps = []
    for _ in range(limit):
        hit = None
        for path, sub in positions(t):
            for rule, d, guard in prepass:
                res = [r for r in rule.apply(sub, d) if guard is None or guard(sub, r)]
                if res:
                    hit = (rule, path, d, res[0])
                    break
            if hit:
                break
        if hit is None:
            for path, sub in _postorder(t):
                for rule, d, guard in strategy:
                    res = [r for r in rule.apply(sub, d) if guard is None or guard(sub, r)]
                    if res:
                        hit = (rule, path, d, res[0])
                        break
                if hit:
                    break
        if hit is None:
            return t, steps
        rule, path, d, r = hit
        t = replace_at(t, path, r)
        steps.append(Step(rule.id, path, d, t))
    raise NormalizationLimit(f"no normal form within {limit} steps")


_STRATEGIES = {
    "Desc": [],
    "C": [(R.ASSOC_COMP, "forward", None)],
    "I": [(R.ID_RIGHT, "forward", None), (R.ID_LEFT, "forward", None)],
    "Cat": [(R.ID_RIGHT, "forward", None), (R.ID_LEFT, "forward", None),
            (R.ASSOC_COMP, "forward", None)],
}


def _not_projection_tree(sub, result):
    return projection_indices(sub.g) is None


def _unsorted_atoms(sub, result):
    f, g = sub.f, sub.g
    if projection_indices(sub) is not None:
        return False
    return (not isinstance(f, Pair) and not isinstance(g, Pair)) and g.text < f.text


_CATX_PREPASS = [(R.HEXAGON, "forward", None), (R.TWIST_IDEM, "forward", None)]
_CATX_STRATEGY = [
    (R.ID_RIGHT, "forward", None),
    (R.ID_LEFT, "forward", None),
    (R.TWIST_IDEM, "forward", None),
    (R.ASSOC_COMP, "forward", None),
    (R.ASSOC_PAIR, "backward", None),
    (R.DISTRIB, "forward", _not_projection_tree),
    (R.ALMOST_COMM, "forward", _unsorted_atoms),
]


def normalize_trace(t: Term, u: UniverseLike) -> tuple:
    """Canonical form of ``t`` and the steps reaching it.

    Supported: ``Desc`` (identity), ``C``, ``I``, ``Cat`` and ``CatX``
    (best effort).
    """
    name = get_universe(u).name
    if name == "CatX":
        return _run_strategy(t, _CATX_STRATEGY, _CATX_PREPASS)
    if name not in _STRATEGIES:
        raise ValueError(f"no canonical form procedure for universe {name}")
    return _run_strategy(t, _STRATEGIES[name])


def normalize(t: Term, u: UniverseLike) -> Term:
    """Canonical form under ``C`` (left-associated compositions), ``I``
    (identities removed) or ``Cat`` (both).

    These systems terminate and are confluent, so the result decides
    equivalence in the universe.

    >>> from pru.terms import Comp, S, Z
    >>> normalize(Comp(S, Comp(S, Z)), "C").text
    '(comp (comp s s) z)'
    """
    name = get_universe(u).name
    if name not in ("C", "I", "Cat"):
        raise ValueError(f"normalize supports C, I and Cat; use normalize_best_effort for {name}")
    return normalize_trace(t, name)[0]


def normalize_best_effort(t: Term, u: UniverseLike = "CatX") -> Term:
    """Oriented normal form for ``CatX``; not claimed complete.

    Strategy: cancel literal twist pairs and hexagon configurations first,
    then innermost: drop identities, left-associate compositions and
    brackets, distribute compositions over non-projection brackets, and
    order bracket components by printed text through the twist.
    """
    name = get_universe(u).name
    if name != "CatX":
        raise ValueError("best-effort normalization is only defined for CatX")
    return normalize_trace(t, name)[0]


# -- bounded closure ---------------------------------------------------------------


@dataclass(frozen=True)
class Caps:
    size: int = 12
    count: int = 5000

    def __post_init__(self):
        if self.size < 1 or self.count < 1:
            raise ValueError("caps must be positive")

    def to_json(self):
        return {"size": self.size, "count": self.count}


DEFAULT_CAPS = Caps()


@dataclass
class Closure:
    """Terms reachable from ``root`` by two-way rewriting, with BFS parents."""

    root: Term
    parents: dict
    complete: bool

    def __contains__(self, t):
        return t in self.parents

    def __len__(self):
        return len(self.parents)

    def __iter__(self):
        return iter(self.parents)

    @property
    def terms(self) -> set:
        return set(self.parents)

    def path_to(self, t: Term) -> list:
        """Steps from ``root`` to ``t``."""
        steps = []
        while True:
            entry = self.parents[t]
            if entry is None:
                break
            prev, step = entry
            steps.append(step)
            t = prev
        return steps[::-1]


def closure(t: Term, u: UniverseLike, size_cap: int = DEFAULT_CAPS.size,
            count_cap: int = DEFAULT_CAPS.count, include_disabled: bool = False) -> Closure:
    """Breadth-first closure under single rewrites in both directions.

    Intermediates larger than ``size_cap`` are discarded.  The result is
    complete when the frontier empties before ``count_cap`` terms are found.
    """
    if size_cap < 1 or count_cap < 1:
        raise ValueError("caps must be positive")
    parents = {t: None}
    queue = deque([t])
    rule_list = _ordered(rules_of(u, include_disabled))
    while queue:
        x = queue.popleft()
        for path, sub in positions(x):
            for rule, d, r in _root_rewrites(sub, rule_list, ("forward", "backward")):
                if x.size - sub.size + r.size > size_cap:
                    continue
                y = replace_at(x, path, r)
                if y in parents:
                    continue
                if len(parents) >= count_cap:
                    return Closure(t, parents, False)
                parents[y] = (x, Step(rule.id, path, d, y))
                queue.append(y)
    return Closure(t, parents, True)


# -- equivalence ---------------------------------------------------------------------


@dataclass
class Verdict:
    """Outcome of an equivalence query.

    ``equal`` carries a replayable witness from the first term to the
    second; ``notequal`` a reason (distinct canonical forms, distinct
    structure, or a value-table mismatch); ``unknown`` means a bound was hit.
    Verdicts in ``Func`` are marked approximate: they compare value tables
    on a finite grid.
    """

    verdict: str
    universe: str
    witness: list = field(default_factory=list)
    reason: str = ""
    approximate: bool = False
    caps: Caps = DEFAULT_CAPS

    def __bool__(self):
        return self.verdict == "equal"

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "witness": [s.to_json() for s in self.witness],
            "universe": self.universe,
            "caps": self.caps.to_json(),
            "reason": self.reason,
            "approximate": self.approximate,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def _shorten(start: Term, steps: list) -> list:
    """Drop detours: whenever a term recurs along the path, cut the loop between."""
    out = []
    seen = {start: 0}
    for s in steps:
        if s.result in seen:
            del out[seen[s.result]:]
            seen = {t: k for t, k in seen.items() if k <= len(out)}
            continue
        out.append(s)
        seen[s.result] = len(out)
    return out


def _equal(name, start, steps, caps):
    return Verdict("equal", name, _shorten(start, steps), caps=caps)


def _fingerprints_differ(t1, t2, grid_bound, budget):
    f1, f2 = fingerprint(t1, grid_bound, budget), fingerprint(t2, grid_bound, budget)
    if f1.partial or f2.partial:
        return None
    return f1 != f2


def _search(t1, t2, u, caps, include_disabled):
    """Witness from t1 to t2 via bounded closures, or None.  Also returns truncation."""
    c1 = closure(t1, u, caps.size, caps.count, include_disabled)
    if t2 in c1:
        return c1.path_to(t2), True
    c2 = closure(t2, u, caps.size, caps.count, include_disabled)
    for m in c1:
        if m in c2:
            return c1.path_to(m) + _invert(t2, c2.path_to(m)), True
    return None, c1.complete and c2.complete


def equiv(t1: Term, t2: Term, u: UniverseLike, caps: Caps = DEFAULT_CAPS,
          grid_bound: int = 4, budget: Budget = DEFAULT_BUDGET,
          include_disabled: bool = False) -> Verdict:
    """Decide, or bound-search, whether ``t1`` and ``t2`` coincide in ``u``."""
    name = get_universe(u).name
    if t1.arity != t2.arity:
        raise ArityMismatch(f"arities differ: {t1.arity} vs {t2.arity}")

    if name == "Desc":
        if t1 == t2:
            return Verdict("equal", name, caps=caps)
        return Verdict("notequal", name, reason="structurally distinct", caps=caps)

    if name == "Func":
        differ = _fingerprints_differ(t1, t2, grid_bound, budget)
        if differ is None:
            return Verdict("unknown", name, reason="evaluation budget exhausted",
                           approximate=True, caps=caps)
        if differ:
            return Verdict("notequal", name, reason=f"value tables differ on grid {grid_bound}",
                           caps=caps)
        return Verdict("equal", name, reason=f"value tables agree on grid {grid_bound}",
                       approximate=True, caps=caps)

    if name in ("C", "I", "Cat"):
        n1, s1 = normalize_trace(t1, name)
        n2, s2 = normalize_trace(t2, name)
        if n1 == n2:
            return _equal(name, t1, s1 + _invert(t2, s2), caps)
        return Verdict("notequal", name, reason=f"canonical forms differ: {n1.text} vs {n2.text}",
                       caps=caps)

    # CatX, CatN, CatXN: canonical-form shortcuts, value tables, then bounded search.
    if name == "CatX":
        n1, s1 = normalize_trace(t1, name)
        n2, s2 = normalize_trace(t2, name)
    else:
        n1, s1 = normalize_trace(t1, "Cat")
        n2, s2 = normalize_trace(t2, "Cat")
    if n1 == n2:
        return _equal(name, t1, s1 + _invert(t2, s2), caps)
    if _fingerprints_differ(t1, t2, grid_bound, budget):
        return Verdict("notequal", name, reason=f"value tables differ on grid {grid_bound}",
                       caps=caps)
    path, exhausted = _search(n1, n2, name, caps, include_disabled)
    if path is not None:
        return _equal(name, t1, s1 + path + _invert(t2, s2), caps)
    if exhausted and name == "CatX":
        reason = "bounded closures are complete and disjoint"
    else:
        reason = "search bound reached"
    return Verdict("unknown", name, reason=reason, caps=caps)
