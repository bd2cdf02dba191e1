import functools
import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pru import perm as P
from pru.galois import (
    CapacityError,
    FragmentParams,
    Partition,
    PermGroupFamily,
    discrete_partition,
    enumerate_fragment,
    full_stabilizer,
    galois_check,
    lattice_report,
    op_preserving_subgroup,
    orbit_partition,
    semantic_partition,
    universe_partition,
)
from pru.syntax import parse
from pru.terms import Comp, Pair, Proj, Rec, S, Z, sort_key

SMALL = FragmentParams(max_size=3, max_width=2, allow_rec=False)


@pytest.fixture(scope="module")
def default():
    return enumerate_fragment()


@pytest.fixture(scope="module")
def cache():
    return {}


def _top_down(max_size, w, allow_rec):
    """Independent enumerator: terms of a given arity and exact size, built top-down."""

    @functools.lru_cache(maxsize=None)
    def build(dom, cod, n):
        out = []
        if n == 1 and cod == 1:
            out += [Proj(dom, i) for i in range(1, dom + 1)]
            if dom == 1:
                out += [S, Z]
        for left in range(1, n - 1):
            right = n - 1 - left
            for m in range(1, w + 1):
                out += [Comp(g, f) for g in build(m, cod, left) for f in build(dom, m, right)]
            for c in range(1, cod):
                out += [Pair(f, g) for f in build(dom, c, left) for g in build(dom, cod - c, right)]
            if allow_rec and dom >= 2 and dom - 1 + cod <= w:
                out += [Rec(f, g) for f in build(dom - 1, cod, left) for g in build(dom - 1 + cod, cod, right)]
        return tuple(out)

    result = {}
    for dom in range(1, w + 1):
        for cod in range(1, w + 1):
            ts = [t for n in range(1, max_size + 1) for t in build(dom, cod, n)]
            if ts:
                result[(dom, cod)] = sorted(ts, key=sort_key)
    return result


def test_leaves_only():
    F = enumerate_fragment(FragmentParams(max_size=1, max_width=2))
    assert [t.text for t in F.homsets[(1, 1)]] == ["s", "z", "(pi 1 1)"]
    assert [t.text for t in F.homsets[(2, 1)]] == ["(pi 2 1)", "(pi 2 2)"]


def test_size_three_counts_by_hand():
    F = enumerate_fragment(SMALL)
    # (1,1): 3 leaves + 3*3 compositions; (1,2): 3*3 pairs;
    # (2,1): 2 leaves + 3*2 compositions; (2,2): 2*2 pairs
    assert {a: len(ts) for a, ts in F.homsets.items()} == {(1, 1): 12, (1, 2): 9, (2, 1): 8, (2, 2): 4}
    assert {Comp(S, S), Comp(S, Z), Comp(Z, S), Comp(Z, Z), Comp(S, Proj(1, 1))} <= set(F.homsets[(1, 1)])


@pytest.mark.parametrize("size,width,rec", [(5, 2, True), (5, 2, False), (5, 3, True), (7, 1, False)])
def test_matches_independent_enumerator(size, width, rec):
    F = enumerate_fragment(FragmentParams(size, width, rec))
    oracle = _top_down(size, width, rec)
    assert {a: list(ts) for a, ts in F.homsets.items()} == oracle


def test_rec_respects_widths(default):
    for t in default.terms:
        if isinstance(t, Rec):
            assert t.f.dom + t.f.cod == t.g.dom


def test_fragment_invariants(default):
    assert len(set(default.terms)) == len(default.terms)
    for a, ts in default.homsets.items():
        assert all(t.arity == a for t in ts)
        assert list(ts) == sorted(ts, key=sort_key)
    for t in default.terms:
        for c in t.children:
            assert c in default


def test_capacity():
    with pytest.raises(CapacityError):
        enumerate_fragment(FragmentParams(max_size=9, max_width=3, max_homset=1000))


def test_semantic_partition(default):
    part = semantic_partition(default)
    idx = default.index
    z2 = parse("(comp z (comp s s))")
    assert part.same_block(idx[Z], idx[Comp(Z, S)])
    assert part.same_block(idx[Z], idx[z2])
    assert not part.same_block(idx[S], idx[Z])
    assert not part.same_block(idx[Comp(S, Z)], idx[Comp(Z, S)])
    assert part.notes["basis"] == "fingerprint"


def test_universe_partition_examples(default, cache):
    desc = universe_partition(default, "Desc", _cache=cache)
    assert desc == discrete_partition(default)
    c = universe_partition(default, "C", _cache=cache)
    idx = default.index
    assert c.same_block(idx[Comp(S, Comp(S, S))], idx[Comp(Comp(S, S), S)])
    cat = universe_partition(default, "Cat", _cache=cache)
    assert desc.refines(c) and c.refines(cat)


def test_closure_partition_agrees_with_deciders():
    F = enumerate_fragment(SMALL)
    for u in ("C", "I", "Cat"):
        assert universe_partition(F, u) == universe_partition(F, u, method="closure")


def test_every_partition_refines_semantic(default, cache):
    sem = semantic_partition(default)
    for u in ("Desc", "C", "I", "Cat", "CatX", "CatN", "CatXN", "Func"):
        p = universe_partition(default, u, _cache=cache)
        assert p.refines(sem) and p.complete


def test_full_stabilizer_examples():
    F = enumerate_fragment(FragmentParams(max_size=1, max_width=2))
    assert full_stabilizer(discrete_partition(F)).order() == 1
    three = Partition(F, [0, 0, 0, 1, 2])        # s, z, pi11 in one block
    assert full_stabilizer(three).order() == 6


def test_stabilizer_order_is_factorial_product(default, cache):
    sem = semantic_partition(default)
    expected = math.prod(math.factorial(len(b)) for b in sem.blocks())
    assert full_stabilizer(sem).order() == expected
    plain = P.PermGroup(len(default), full_stabilizer(sem).generators[:40])
    assert plain.order() == math.prod(
        math.factorial(k) for k in _run_lengths(full_stabilizer(sem).generators[:40]))


def _run_lengths(transpositions):
    """Block sizes generated by a list of adjacent transpositions."""
    uf = {}

    def find(x):
        while uf.get(x, x) != x:
            x = uf[x]
        return x

    for t in transpositions:
        i, j = P.cycles(t)[0]
        uf[find(j)] = find(i)
    sizes = {}
    for x in {x for t in transpositions for x in P.cycles(t)[0]}:
        sizes[find(x)] = sizes.get(find(x), 0) + 1
    return sizes.values()


def test_orbit_partition_examples():
    F = enumerate_fragment(SMALL)
    trivial = PermGroupFamily.generated(F, [])
    assert orbit_partition(trivial) == discrete_partition(F)
    swap = PermGroupFamily.generated(F, [P.transposition(len(F), 3, 7)])
    blocks = orbit_partition(swap).blocks()
    assert [3, 7] in blocks and all(len(b) == 1 for b in blocks if b != [3, 7])


def test_generators_must_stay_in_homset():
    F = enumerate_fragment(SMALL)
    far = len(F) - 1
    with pytest.raises(ValueError):
        PermGroupFamily.generated(F, [P.transposition(len(F), 0, far)])


@st.composite
def partitions_of(draw, F):
    labels = [draw(st.integers(0, 3)) for _ in range(len(F))]
    return Partition(F, labels)


SMALL_F = enumerate_fragment(SMALL)


@given(partitions_of(SMALL_F))
@settings(max_examples=100, deadline=None)
def test_round_trip_on_arbitrary_partitions(part):
    assert orbit_partition(full_stabilizer(part)) == part


@given(st.lists(st.permutations(range(4)), min_size=1, max_size=3), st.integers(0, 3))
@settings(max_examples=100, deadline=None)
def test_group_inside_closure(perms, offset):
    F = SMALL_F
    lo = F.offsets[(1, 1)] + offset * 2
    gens = []
    for p in perms:
        g = list(range(len(F)))
        for i, j in enumerate(p):
            g[lo + i] = lo + j
        gens.append(tuple(g))
    H = PermGroupFamily.generated(F, gens)
    K = full_stabilizer(orbit_partition(H))
    assert H.is_subgroup_of(K)
    assert K.order() % H.order() == 0


def test_three_cycle_defect():
    F = enumerate_fragment(FragmentParams(max_size=1, max_width=2))
    H = PermGroupFamily.generated(F, [P.cycle(len(F), [0, 1, 2])])
    K = full_stabilizer(orbit_partition(H))
    assert (H.order(), K.order()) == (3, 6)


def test_galois_check(default, cache):
    report = galois_check(default, samples=20, seed=0, _cache=cache)
    assert report["ok"]
    names = {c["name"] for c in report["checks"]}
    for u in ("Desc", "C", "I", "Cat"):
        assert f"roundtrip-Alg:{u}" in names
    sampled = [c for c in report["checks"] if c["name"].startswith("H-in-H_Alg:H")]
    assert len(sampled) >= 20
    orders = {u: int(g["order"]) for u, g in report["groups"].items()}
    assert orders["Cat"] % orders["C"] == 0
    assert orders["Desc"] == 1
    json.dumps(report)
    assert set(report) >= {"fragment", "partitions", "groups", "checks"}


def test_galois_check_finds_defect_in_semantic_block(default):
    sem = semantic_partition(default)
    block = next(b for b in sem.blocks() if len(b) == 3)
    H = PermGroupFamily.generated(default, [P.cycle(len(default), block)])
    K = full_stabilizer(orbit_partition(H))
    assert K.order() // H.order() == 2


def test_op_preserving_chain(default):
    G = full_stabilizer(semantic_partition(default))
    assert op_preserving_subgroup(G, []) is G
    Hcr = op_preserving_subgroup(G, ["comp", "rec"])
    Hcrp = op_preserving_subgroup(G, ["comp", "rec", "pair"])
    assert Hcrp.is_subgroup_of(Hcr) and Hcr.is_subgroup_of(G)
    assert Hcr.order() < G.order()
    rigid = op_preserving_subgroup(G, ["comp", "rec", "pair"], fix_initials=True)
    assert rigid.order() == 1
    with pytest.raises(ValueError):
        op_preserving_subgroup(G, ["bogus"])


def test_op_preserving_small_chain():
    F = SMALL_F
    G = full_stabilizer(semantic_partition(F))
    Hc = op_preserving_subgroup(G, ["comp"])
    Hcp = op_preserving_subgroup(G, ["comp", "pair"])
    assert Hcp.is_subgroup_of(Hc) and Hc.is_subgroup_of(G)
    from pru.galois import preserves_ops

    for g in Hc.generators:
        assert preserves_ops(g, F, {"comp"})


def test_lattice_report(default, cache):
    report = lattice_report(default, _cache=cache)
    assert all(c["pass"] for c in report["checks"])
    hasse = {tuple(e) for e in report["hasse"]}
    assert ("Desc", "C") in hasse and ("Desc", "I") in hasse
    assert ("C", "Cat") in hasse and ("I", "Cat") in hasse
    pairs = [set(i["pair"]) for i in report["incomparable"]]
    assert {"C", "I"} in pairs
    ci = next(i for i in report["incomparable"] if set(i["pair"]) == {"C", "I"})
    assert len(ci) == 3                    # pair plus one witness per side
    blocks = report["blocks"]
    assert blocks["Desc"] == max(blocks.values()) and blocks["Func"] == min(blocks.values())
    json.dumps(report)
