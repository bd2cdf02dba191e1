"""Finite fragments of the description graph and the Galois correspondence on them.

A fragment lists every well-typed description up to a size and width bound,
grouped into hom-sets by arity.  On a fragment we can compute

* partitions: semantic (value tables), per universe (rewriting), or the
  orbits of a permutation group;
* groups: the full stabilizer of a partition, or subgroups given by
  generators;

and check the two maps between them: ``orbit_partition(full_stabilizer(P))``
gives back ``P`` exactly, while for a subgroup ``H`` only
``H <= full_stabilizer(orbit_partition(H))`` holds in general.  Subgroups
where the inclusion is strict are reported as closure defects.

Groups act on the disjoint union of all hom-sets (global term indices) and
never move a term out of its hom-set.
"""

from __future__ import annotations

import itertools
import json
import math
import random
from collections import defaultdict, deque
from dataclasses import asdict, dataclass
from typing import Iterable, Optional

from pru import perm as P
from pru.rules import ALL_RULES
from pru.semantics import DEFAULT_BUDGET, Budget, fingerprint
from pru.terms import Arity, Comp, Pair, Proj, Rec, S, Term, Z, sort_key
from pru.universes import (
    DEFAULT_CAPS,
    UNIVERSES,
    Caps,
    get_universe,
    is_refined_by,
    normalize,
    normalize_trace,
    rules_of,
)

LATTICE_ORDER = ("Desc", "C", "I", "Cat", "CatX", "CatN", "CatXN", "Func")
OPS = {"comp": Comp, "rec": Rec, "pair": Pair}


class CapacityError(RuntimeError):
    pass


class PartitionError(RuntimeError):
    """A universe partition failed to refine the semantic partition."""


# -- fragments ----------------------------------------------------------------------


@dataclass(frozen=True)
class FragmentParams:
    max_size: int = 5
    max_width: int = 2
    allow_rec: bool = True
    grid_bound: int = 4
    max_homset: int = 5000

    def __post_init__(self):
        if self.max_size < 1 or self.max_width < 1 or self.grid_bound < 1:
            raise ValueError("fragment bounds must be positive")


class Fragment:
    """Hom-sets of a finite, subterm-closed set of descriptions."""

    def __init__(self, params: FragmentParams, homsets: dict):
        self.params = params
        self.homsets = {a: tuple(ts) for a, ts in sorted(homsets.items())}
        self.terms = []
        self.offsets = {}
        for a, ts in self.homsets.items():
            self.offsets[a] = len(self.terms)
            self.terms.extend(ts)
        self.index = {t: k for k, t in enumerate(self.terms)}
        self._fingerprints = None
        self.by_size = sorted(range(len(self.terms)), key=lambda k: self.terms[k].size)
        # (op, left child index, right child index) for composite terms, and its inverse
        self.shape = [None] * len(self.terms)
        for k, t in enumerate(self.terms):
            if t.children:
                self.shape[k] = (_op_name(t),) + tuple(self.index[c] for c in t.children)
        self.by_shape = {sh: k for k, sh in enumerate(self.shape) if sh is not None}

    def __len__(self):
        return len(self.terms)

    def __contains__(self, t):
        return t in self.index

    def homset_of(self, k: int) -> Arity:
        return self.terms[k].arity

    def fingerprints(self, budget: Budget = DEFAULT_BUDGET) -> list:
        if self._fingerprints is None:
            self._fingerprints = [fingerprint(t, self.params.grid_bound, budget) for t in self.terms]
        return self._fingerprints

    def summary(self) -> dict:
        return {
            "params": asdict(self.params),
            "homsets": {str(a): len(ts) for a, ts in self.homsets.items()},
            "terms": len(self.terms),
        }


def enumerate_fragment(params: FragmentParams = FragmentParams()) -> Fragment:
    """All well-typed terms with at most ``max_size`` nodes and every
    intermediate width at most ``max_width``, sorted by (size, text)."""
    w = params.max_width
    by_size = {1: defaultdict(list)}
    leaves = by_size[1]
    leaves[Arity(1, 1)] += [S, Z]
    for n in range(1, w + 1):
        leaves[Arity(n, 1)] += [Proj(n, i) for i in range(1, n + 1)]
    totals = defaultdict(int)
    for a, ts in leaves.items():
        totals[a] += len(ts)

    def grow(level, arity, terms_of):
        totals[arity] += terms_of[0]
        if totals[arity] > params.max_homset:
            raise CapacityError(f"hom-set {arity} exceeds {params.max_homset} terms")
        level[arity] += terms_of[1]()

    for k in range(3, params.max_size + 1, 2):
        level = defaultdict(list)
        for s1 in range(1, k - 1, 2):
            s2 = k - 1 - s1
            for (a1, b1), left in by_size[s1].items():
                for (a2, b2), right in by_size[s2].items():
                    n = len(left) * len(right)
                    if b2 == a1:
                        grow(level, Arity(a2, b1),
                             (n, lambda: [Comp(g, f) for g in left for f in right]))
                    if a1 == a2 and b1 + b2 <= w:
                        grow(level, Arity(a1, b1 + b2),
                             (n, lambda: [Pair(f, g) for f in left for g in right]))
                    if params.allow_rec and (a2, b2) == (a1 + b1, b1) and a1 + 1 <= w:
                        grow(level, Arity(a1 + 1, b1),
                             (n, lambda: [Rec(f, g) for f in left for g in right]))
        by_size[k] = level
    homsets = defaultdict(list)
    for level in by_size.values():
        for a, ts in level.items():
            homsets[a].extend(ts)
    for ts in homsets.values():
        ts.sort(key=sort_key)
    return Fragment(params, homsets)


# -- partitions --------------------------------------------------------------------


def _canonical(labels: Iterable) -> tuple:
    seen = {}
    return tuple(seen.setdefault(x, len(seen)) for x in labels)


class Partition:
    """Block labels for the terms of a fragment, never mixing hom-sets.

    Labels are renumbered by first occurrence, so two partitions are equal
    exactly when their label tuples are.
    """

    def __init__(self, fragment: Fragment, labels: Iterable, name: str = "",
                 complete: bool = True, notes: Optional[dict] = None):
        self.fragment = fragment
        raw = list(labels)
        if len(raw) != len(fragment):
            raise ValueError("one label per fragment term is required")
        self.labels = _canonical((fragment.terms[k].arity, x) for k, x in enumerate(raw))
        self.name = name
        self.complete = complete
        self.notes = notes or {}

    def __eq__(self, other):
        return isinstance(other, Partition) and self.labels == other.labels

    def __hash__(self):
        return hash(self.labels)

    def __repr__(self):
        return f"<Partition {self.name or '?'}: {self.num_blocks()} blocks>"

    def blocks(self) -> list:
        """Blocks as sorted lists of global term indices, ordered by least member."""
        groups = defaultdict(list)
        for k, x in enumerate(self.labels):
            groups[x].append(k)
        return sorted(groups.values())

    def num_blocks(self) -> int:
        return len(set(self.labels))

    def same_block(self, i: int, j: int) -> bool:
        return self.labels[i] == self.labels[j]

    def refines(self, other: "Partition") -> bool:
        """True when every block of ``self`` lies inside a block of ``other``."""
        if other.fragment is not self.fragment:
            raise ValueError("partitions of different fragments are not comparable")
        image = {}
        for x, y in zip(self.labels, other.labels):
            if image.setdefault(x, y) != y:
                return False
        return True

    def witness_pair(self, other: "Partition"):
        """Two terms in one block of ``self`` but different blocks of ``other``."""
        first = {}
        for k, (x, y) in enumerate(zip(self.labels, other.labels)):
            j = first.setdefault(x, k)
            if other.labels[j] != y:
                return j, k
        return None

    def join(self, other: "Partition", name: str = "") -> "Partition":
        uf = _UnionFind(len(self.labels))
        for part in (self, other):
            for block in part.blocks():
                for k in block[1:]:
                    uf.union(block[0], k)
        return Partition(self.fragment, [uf.find(k) for k in range(len(self.labels))], name,
                         self.complete and other.complete)

    def order_of_stabilizer(self) -> int:
        return math.prod(math.factorial(len(b)) for b in self.blocks())

    def to_json(self) -> list:
        terms = self.fragment.terms
        return [[terms[k].text for k in block] for block in self.blocks()]


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[max(rx, ry)] = min(rx, ry)


def discrete_partition(F: Fragment, name: str = "Desc") -> Partition:
    return Partition(F, range(len(F)), name)


def semantic_partition(F: Fragment, budget: Budget = DEFAULT_BUDGET) -> Partition:
    """Blocks of equal value tables on the fragment's grid.

    This refines true functional equality only in one direction (different
    tables mean different functions).  A term whose evaluation ran out of
    budget gets a singleton block and is listed under ``notes["partial"]``.
    """
    labels = []
    partial = []
    for k, fp in enumerate(F.fingerprints(budget)):
        if fp.partial:
            labels.append(("partial", k))
            partial.append(F.terms[k].text)
        else:
            labels.append(("table", fp.table))
    return Partition(F, labels, "Func", notes={"basis": "fingerprint", "partial": partial})


def _search_canon(name):
    if name == "CatN":
        return lambda t: normalize_trace(t, "Cat")[0]
    return lambda t: normalize_trace(t, "CatX")[0]


def _component_search(F: Fragment, name: str, caps: Caps, base: Partition):
    """Merge fragment terms connected by rewriting under ``name``.

    Search nodes are canonical forms (Cat forms for CatN, best-effort CatX
    forms otherwise); an edge applies one relation of the universe, in either
    direction, anywhere in the node and re-canonicalizes.  Intermediates over
    ``caps.size`` are dropped; each search stops after ``caps.count`` nodes.
    """
    canon = _search_canon(name)
    rule_list = sorted(rules_of(name), key=lambda r: [x.id for x in ALL_RULES].index(r.id))
    uf = _UnionFind(len(F))
    for block in base.blocks():
        for k in block[1:]:
            uf.union(block[0], k)
    forms = [canon(t) for t in F.terms]
    owners = defaultdict(list)
    for k, c in enumerate(forms):
        owners[c].append(k)
    for ks in owners.values():
        for k in ks[1:]:
            uf.union(ks[0], k)

    from pru.terms import positions, replace_at

    truncated = 0
    for start, ks in owners.items():
        seen = {start}
        queue = deque([start])
        while queue and len(seen) < caps.count:
            x = queue.popleft()
            for path, sub in positions(x):
                for rule in rule_list:
                    for d in ("forward", "backward"):
                        for r in rule.apply(sub, d):
                            if x.size - sub.size + r.size > caps.size:
                                continue
                            y = canon(replace_at(x, path, r))
                            if y.size > caps.size or y in seen:
                                continue
                            seen.add(y)
                            queue.append(y)
                            if y in owners:
                                uf.union(ks[0], owners[y][0])
        if queue:
            truncated += 1
    labels = [uf.find(k) for k in range(len(F))]
    return labels, truncated


def universe_partition(F: Fragment, u, caps: Caps = DEFAULT_CAPS, method: str = "auto",
                       budget: Budget = DEFAULT_BUDGET, _cache: Optional[dict] = None) -> Partition:
    """Equivalence classes of ``u`` restricted to the fragment.

    ``C``, ``I`` and ``Cat`` use canonical forms (exact); ``method="closure"``
    instead merges terms found in each other's bounded two-way closures.
    ``CatX``, ``CatN`` and ``CatXN`` start from the join of their parent
    universes and add connections found by bounded search; the result is
    marked incomplete if any search hit ``caps.count``.  Every result is
    checked to refine the semantic partition.
    """
    name = get_universe(u).name
    cache = _cache if _cache is not None else {}
    key = (name, method, caps)
    if key in cache:
        return cache[key]

    semantic = cache.get("semantic")
    if semantic is None:
        semantic = cache["semantic"] = semantic_partition(F, budget)

    if name == "Desc":
        part = discrete_partition(F)
    elif name == "Func":
        part = semantic
    elif name in ("C", "I", "Cat") and method == "auto":
        part = Partition(F, [normalize(t, name) for t in F.terms], name)
    elif name in ("C", "I", "Cat"):
        part = closure_partition(F, name, caps)
    else:
        parents = [universe_partition(F, p, caps, method, budget, cache)
                   for p in UNIVERSES[name].parents]
        base = parents[0]
        for q in parents[1:]:
            base = base.join(q)
        labels, truncated = _component_search(F, name, caps, base)
        part = Partition(F, labels, name, truncated == 0 and all(p.complete for p in parents),
                         notes={"truncated_searches": truncated})
    part.name = name
    if not part.refines(semantic):
        i, j = part.witness_pair(semantic)
        raise PartitionError(
            f"{name} merges {F.terms[i].text} and {F.terms[j].text} with different value tables"
        )
    cache[key] = part
    return part


def closure_partition(F: Fragment, u, caps: Caps = DEFAULT_CAPS) -> Partition:
    """Connected components via bounded closures from each fragment term.

    A complete closure is a whole component, so its members are not searched
    again.
    """
    from pru.universes import closure

    name = get_universe(u).name
    uf = _UnionFind(len(F))
    covered = set()
    truncated = 0
    for k, t in enumerate(F.terms):
        if k in covered:
            continue
        c = closure(t, name, caps.size, caps.count)
        members = [F.index[x] for x in c if x in F.index]
        for j in members:
            uf.union(k, j)
        if c.complete:
            covered.update(members)
        else:
            truncated += 1
    return Partition(F, [uf.find(k) for k in range(len(F))], name, truncated == 0,
                     notes={"truncated_searches": truncated})


# -- groups -----------------------------------------------------------------------


class PermGroupFamily:
    """A group of arity-preserving permutations of the fragment's terms."""

    def __init__(self, fragment: Fragment, group: P.PermGroup, name: str = ""):
        self.fragment = fragment
        self.group = group
        self.name = name
        for g in group.gens:
            if any(fragment.terms[i].arity != fragment.terms[j].arity for i, j in enumerate(g)):
                raise ValueError("generator moves a term out of its hom-set")

    @classmethod
    def generated(cls, F: Fragment, gens: Iterable, name: str = "") -> "PermGroupFamily":
        return cls(F, P.PermGroup(len(F), gens), name)

    def __repr__(self):
        return f"<PermGroupFamily {self.name or '?'}: {len(self.group.gens)} generators>"

    @property
    def generators(self) -> list:
        return self.group.gens

    def order(self) -> int:
        return self.group.order()

    def contains(self, p) -> bool:
        return self.group.contains(p)

    __contains__ = contains

    def is_subgroup_of(self, other: "PermGroupFamily") -> bool:
        return self.group.is_subgroup_of(other.group)

    def homset_orders(self) -> dict:
        """Order of the induced action on each hom-set."""
        F = self.fragment
        out = {}
        for a, ts in F.homsets.items():
            lo = F.offsets[a]
            n = len(ts)
            gens = [tuple(g[lo + i] - lo for i in range(n)) for g in self.group.gens]
            out[a] = P.PermGroup(n, gens).order()
        return out

    def to_json(self, max_generators: Optional[int] = None) -> dict:
        gens = self.group.gens if max_generators is None else self.group.gens[:max_generators]
        return {
            "order": str(self.order()),
            "generators": [P.cycles(g) for g in gens],
            "num_generators": len(self.group.gens),
        }


def full_stabilizer(part: Partition) -> PermGroupFamily:
    """All permutations fixing every block setwise; order is the product of block factorials."""
    F = part.fragment
    return PermGroupFamily(F, P.PermGroup.block_stabilizer(len(F), part.blocks()),
                           f"Stab({part.name})")


def orbit_partition(G: PermGroupFamily, F: Optional[Fragment] = None) -> Partition:
    F = F or G.fragment
    if len(F) != G.group.degree:
        raise ValueError("group does not act on this fragment")
    label = {}
    for k, orbit in enumerate(G.group.orbits()):
        for x in orbit:
            label[x] = k
    return Partition(F, [label[x] for x in range(len(F))], f"Orb({G.name})")


# -- op-preserving subgroups ---------------------------------------------------------


def _op_name(t: Term):
    for name, cls in OPS.items():
        if isinstance(t, cls):
            return name
    return None


def preserves_ops(p, F: Fragment, ops, fix_initials: bool = False) -> bool:
    """Whether ``p`` commutes with every operation in ``ops`` wherever it can be checked on F."""
    for k, sh in enumerate(F.shape):
        if sh is None:
            if fix_initials and p[k] != k:
                return False
            continue
        if sh[0] not in ops:
            continue
        if F.by_shape.get((sh[0], p[sh[1]], p[sh[2]])) != p[k]:
            return False
    return True


def _extend_atom_swap(F: Fragment, ops, a: int, b: int):
    """Extend the swap of atoms ``a`` and ``b`` to all of F through ``ops``, or None."""
    image = list(range(len(F)))
    image[a], image[b] = b, a
    shape, by_shape = F.shape, F.by_shape
    for k in F.by_size:
        sh = shape[k]
        if k in (a, b) or sh is None or sh[0] not in ops:
            continue
        j = by_shape.get((sh[0], image[sh[1]], image[sh[2]]))
        if j is None:
            return None
        image[k] = j
    if len(set(image)) != len(image):
        return None
    return tuple(image)


def op_preserving_subgroup(G: PermGroupFamily, ops: Iterable[str] = (), fix_initials: bool = False,
                           F: Optional[Fragment] = None) -> PermGroupFamily:
    """Subgroup of G whose elements commute with the chosen operations on F.

    With every operation preserved, a map is fixed by what it does to the
    initial functions; fixing those too leaves only the identity.

    Generators are G's own generators that pass the check, plus extensions
    of atom transpositions (swapping two terms whose top operation is not
    preserved, with the same arity and size) that land in G.  Candidates for
    an operation set include those for every larger set, so preserving more
    operations always yields a subgroup.  The result is the largest such
    subgroup only when these candidates generate it; it is never larger.
    """
    F = F or G.fragment
    ops = frozenset(ops)
    unknown = ops - set(OPS)
    if unknown:
        raise ValueError(f"unknown operations {sorted(unknown)}")
    if not ops and not fix_initials:
        return G
    gens = [g for g in G.generators if preserves_ops(g, F, ops, fix_initials)]
    supersets = [frozenset(c) for r in range(1, 4) for c in itertools.combinations(sorted(OPS), r)
                 if ops <= frozenset(c)]
    for big in supersets:
        classes = defaultdict(list)
        for k, t in enumerate(F.terms):
            if _op_name(t) in big:
                continue
            if fix_initials and not t.children:
                continue
            classes[(t.arity, t.size)].append(k)
        for members in classes.values():
            uf = _UnionFind(len(members))
            for x, y in itertools.combinations(range(len(members)), 2):
                if uf.find(x) == uf.find(y):
                    continue
                cand = _extend_atom_swap(F, big, members[x], members[y])
                if cand is None or not G.contains(cand):
                    continue
                if preserves_ops(cand, F, ops, fix_initials):
                    gens.append(cand)
                    uf.union(x, y)
    label = "".join(sorted(o[0].upper() for o in ops))
    return PermGroupFamily.generated(F, gens, f"{G.name}_{label}" if label else G.name)


# -- sampled subgroups and the correspondence checks ------------------------------------


def sample_subgroups(F: Fragment, semantic: Partition, count: int = 20, seed: int = 0) -> list:
    """Subgroups of the functionality-preserving group, generated by small cycles.

    Each generator is a 2-, 3- or 4-cycle inside one semantic block; half of
    the samples use several generators.
    """
    rng = random.Random(seed)
    big_blocks = [b for b in semantic.blocks() if len(b) >= 2]
    out = []
    for s in range(count):
        gens = []
        for _ in range(1 + (s % 2) * rng.randint(1, 3)):
            block = rng.choice(big_blocks)
            k = rng.randint(2, min(4, len(block)))
            gens.append(P.cycle(len(F), rng.sample(block, k)))
        out.append(PermGroupFamily.generated(F, gens, f"H{s}"))
    return out


def _check(name, ok, **detail):
    return {"name": name, "pass": bool(ok), **detail}


def galois_check(F: Fragment, universes=LATTICE_ORDER, caps: Caps = DEFAULT_CAPS,
                 samples: int = 20, seed: int = 0, budget: Budget = DEFAULT_BUDGET,
                 _cache: Optional[dict] = None) -> dict:
    """Run the correspondence checks on F and return a JSON-ready report.

    Hard checks: each universe partition refines the semantic one; the
    partition -> stabilizer -> orbits round trip is exact; each sampled H is
    contained in the stabilizer of its own orbits, with equality when H is a
    full stabilizer; both maps are antitone.  Closure defects
    (H strictly inside the stabilizer of its orbits) are listed, not failed.
    """
    cache = {} if _cache is None else _cache
    names = [get_universe(u).name for u in universes]
    semantic = universe_partition(F, "Func", caps, budget=budget, _cache=cache)
    parts = {u: universe_partition(F, u, caps, budget=budget, _cache=cache) for u in names}
    stabs = {u: full_stabilizer(p) for u, p in parts.items()}
    checks = []
    warnings = []

    for u, p in parts.items():
        checks.append(_check(f"refines-semantic:{u}", p.refines(semantic)))
        if not p.complete:
            warnings.append(f"{u}: bounded search truncated ({p.notes.get('truncated_searches')})")
    for u, p in parts.items():
        back = orbit_partition(stabs[u], F)
        checks.append(_check(f"roundtrip-Alg:{u}", back == p))

    aut = stabs.get("Func") or full_stabilizer(semantic)
    sampled = [(f"Stab({u})", stabs[u], True) for u in names]
    sampled += [(H.name, H, False) for H in sample_subgroups(F, semantic, samples, seed)]
    defects = []
    for label, H, is_full in sampled:
        inside_aut = all(aut.contains(g) for g in H.generators)
        orbits = orbit_partition(H, F)
        K = full_stabilizer(orbits)
        contained = all(K.contains(g) for g in H.generators)
        oh, ok_ = H.order(), K.order()
        if oh != ok_:
            defects.append({"group": label, "order": str(oh), "closure_order": str(ok_),
                            "index": str(ok_ // oh)})
        checks.append(_check(f"H-in-H_Alg:{label}", inside_aut and contained
                             and (oh == ok_ if is_full else ok_ % oh == 0),
                             full=is_full, order=str(oh), closure_order=str(ok_)))

    for u in names:
        for v in names:
            if u != v and is_refined_by(v, u):
                ok = stabs[u].is_subgroup_of(stabs[v]) and parts[u].refines(parts[v])
                checks.append(_check(f"antitone-universe:{u}<={v}", ok))

    rng = random.Random(seed + 1)
    big_blocks = [b for b in semantic.blocks() if len(b) >= 2]
    for label, H, is_full in sampled:
        if is_full:
            continue
        block = rng.choice(big_blocks)
        extra = P.cycle(len(F), rng.sample(block, 2))
        H2 = PermGroupFamily.generated(F, list(H.generators) + [extra], label + "+")
        ok = H.is_subgroup_of(H2) and orbit_partition(H, F).refines(orbit_partition(H2, F))
        checks.append(_check(f"antitone-group:{label}<={label}+", ok))

    return {
        "fragment": F.summary(),
        "partitions": {u: p.to_json() for u, p in parts.items()},
        "groups": {u: {"order": str(p.order_of_stabilizer()),
                       "generators": [P.cycles(g) for g in stabs[u].generators]}
                   for u, p in parts.items()},
        "checks": checks,
        "closure_defects": defects,
        "warnings": warnings,
        "semantic_basis": "fingerprint",
        "ok": all(c["pass"] for c in checks),
    }


EXPECTED_EDGES = (
    ("Desc", "C"), ("Desc", "I"), ("C", "Cat"), ("I", "Cat"), ("Cat", "CatX"),
    ("Cat", "CatN"), ("CatX", "CatXN"), ("CatN", "CatXN"), ("CatXN", "Func"),
)


def lattice_report(F: Fragment, universes=LATTICE_ORDER, caps: Caps = DEFAULT_CAPS,
                   budget: Budget = DEFAULT_BUDGET, _cache: Optional[dict] = None) -> dict:
    """Refinement diagram of the computed partitions and the dual inclusion of stabilizers.

    For each edge of the universe lattice among ``universes`` the report says
    whether refinement holds (a hard requirement) and gives a witness pair
    when it is strict; an edge that is not strict on this fragment is listed
    under ``not_strict`` rather than failed.
    """
    cache = {} if _cache is None else _cache
    names = [get_universe(u).name for u in universes]
    parts = {u: universe_partition(F, u, caps, budget=budget, _cache=cache) for u in names}
    terms = F.terms

    edges = []
    for fine, coarse in _lattice_edges(names):
        pf, pc = parts[fine], parts[coarse]
        witness = pc.witness_pair(pf)
        edges.append({
            "fine": fine,
            "coarse": coarse,
            "refines": pf.refines(pc),
            "strict": witness is not None,
            "witness": [terms[witness[0]].text, terms[witness[1]].text] if witness else None,
            "complete": pf.complete and pc.complete,
        })

    hasse = []
    for u in names:
        for v in names:
            if u == v or not parts[u].refines(parts[v]):
                continue
            between = [w for w in names if w not in (u, v)
                       and parts[u].refines(parts[w]) and parts[w].refines(parts[v])
                       and parts[w] != parts[u] and parts[w] != parts[v]]
            if not between and parts[u] != parts[v]:
                hasse.append([u, v])

    incomparable = []
    for u, v in itertools.combinations(names, 2):
        pu, pv = parts[u], parts[v]
        if not pu.refines(pv) and not pv.refines(pu):
            a, b = pv.witness_pair(pu), pu.witness_pair(pv)
            incomparable.append({
                "pair": [u, v],
                f"merged_in_{v}_only": [terms[a[0]].text, terms[a[1]].text],
                f"merged_in_{u}_only": [terms[b[0]].text, terms[b[1]].text],
            })

    orders = {u: parts[u].order_of_stabilizer() for u in names}
    inclusions = [[u, v] for u, v in _lattice_edges(names)
                  if full_stabilizer(parts[u]).is_subgroup_of(full_stabilizer(parts[v]))]
    return {
        "fragment": F.summary(),
        "partitions": {u: p.to_json() for u, p in parts.items()},
        "blocks": {u: p.num_blocks() for u, p in parts.items()},
        "complete": {u: p.complete for u, p in parts.items()},
        "edges": edges,
        "not_strict": [[e["fine"], e["coarse"]] for e in edges if not e["strict"]],
        "hasse": hasse,
        "incomparable": incomparable,
        "groups": {u: {"order": str(orders[u])} for u in names},
        "group_inclusions": inclusions,
        "checks": [_check(f"refines:{e['fine']}->{e['coarse']}", e["refines"]) for e in edges]
                  + [_check(f"stabilizer-inclusion:{u}->{v}", [u, v] in inclusions)
                     for u, v in _lattice_edges(names)],
    }


def _lattice_edges(names):
    """Covering pairs of the universe lattice restricted to ``names``."""
    out = []
    for fine in names:
        for coarse in names:
            if fine == coarse or not is_refined_by(coarse, fine):
                continue
            between = [w for w in names if w not in (fine, coarse)
                       and is_refined_by(w, fine) and is_refined_by(coarse, w)]
            if not between:
                out.append((fine, coarse))
    return out


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, default=str)
