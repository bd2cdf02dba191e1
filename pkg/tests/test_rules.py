import pytest

from pru.gen import default_pool
from pru.rules import ALL_RULES, RULES_BY_ID
from pru.semantics import fingerprint
from pru.terms import Comp, Pair, Proj, Rec, S, Z, mk_identity, mk_product, mk_twist

POOL = default_pool()


@pytest.fixture(scope="module")
def instances():
    return {r.id: r.instances(POOL, 100, 0) for r in ALL_RULES}


@pytest.mark.parametrize("rule", ALL_RULES, ids=lambda r: r.id)
def test_instance_counts(rule, instances):
    got = instances[rule.id]
    if rule.enumerate_all is None:
        assert len(got) >= 100
    else:
        assert len(got) == len(list(rule.enumerate_all())) > 0


@pytest.mark.parametrize("rule", ALL_RULES, ids=lambda r: r.id)
def test_instances_are_typed_and_sound(rule, instances):
    for lhs, rhs in instances[rule.id]:
        assert lhs.arity == rhs.arity
        f1, f2 = fingerprint(lhs, 4), fingerprint(rhs, 4)
        assert not f1.partial and f1 == f2, (lhs.text, rhs.text)


@pytest.mark.parametrize("rule", ALL_RULES, ids=lambda r: r.id)
def test_matching_recovers_instances(rule, instances):
    for lhs, rhs in instances[rule.id]:
        assert rhs in rule.apply(lhs, "forward")
        if rule.bidirectional:
            assert lhs in rule.apply(rhs, "backward")


def test_instances_are_deterministic():
    r = RULES_BY_ID["distrib"]
    assert r.instances(POOL, 20, 5) == r.instances(POOL, 20, 5)
    assert r.instances(POOL, 20, 5) != r.instances(POOL, 20, 6)


def test_nno_left_is_directed():
    assert not RULES_BY_ID["nno-left"].bidirectional
    assert RULES_BY_ID["nno-left"].apply(S, "backward") == []


def test_schemas_on_hand_built_terms():
    ident = mk_identity(1)
    assert RULES_BY_ID["assoc-comp"].apply(Comp(S, Comp(S, Z)), "forward") == [Comp(Comp(S, S), Z)]
    assert S in RULES_BY_ID["id-left"].apply(Comp(ident, S), "forward")
    assert S in RULES_BY_ID["id-right"].apply(Comp(S, ident), "forward")
    assert RULES_BY_ID["distrib"].apply(Comp(Pair(S, Z), S), "forward") == [
        Pair(Comp(S, S), Comp(Z, S))
    ]
    tw = mk_twist(1, 1)
    assert RULES_BY_ID["almost-comm"].apply(Pair(S, Z), "forward") == [Comp(tw, Pair(Z, S))]
    assert mk_identity(2) in RULES_BY_ID["twist-idem"].apply(Comp(tw, tw), "forward")


def test_nno_id_instance():
    lhs = Rec(Proj(1, 1), Proj(2, 2))
    assert Comp(Proj(1, 1), Proj(2, 1)) in RULES_BY_ID["nno-id"].apply(lhs, "forward")


def test_nno_left_instance():
    f, g = S, Proj(2, 1)
    lhs = Comp(Rec(f, g), mk_product(mk_identity(1), Z))
    out = RULES_BY_ID["nno-left"].apply(lhs, "forward")
    assert out and fingerprint(out[0], 4) == fingerprint(lhs, 4)


def test_disabled_schemas_flagged():
    disabled = {r.id for r in ALL_RULES if not r.enabled}
    assert disabled == {"nno-comp", "nno-pair"}
