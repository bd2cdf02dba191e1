# %% [markdown]
# # Partitions and permutation groups on a finite fragment
#
# Every description up to five nodes and width two, grouped by arity.

# %%
from pru import perm as P
from pru.galois import (
    PermGroupFamily,
    enumerate_fragment,
    full_stabilizer,
    lattice_report,
    op_preserving_subgroup,
    orbit_partition,
    semantic_partition,
    universe_partition,
)

F = enumerate_fragment()
print(F.summary()["homsets"])

# %% [markdown]
# Coarser universes have fewer blocks and larger stabilizers.

# %%
cache = {}
for u in ("Desc", "C", "I", "Cat", "CatX", "CatN", "CatXN", "Func"):
    p = universe_partition(F, u, _cache=cache)
    print(f"{u:6s} blocks {p.num_blocks():4d}  log10|Stab| {len(str(full_stabilizer(p).order())) - 1}")

# %% [markdown]
# A stabilizer gives back its partition exactly.  A cyclic group on a
# three-element block does not: its orbits are stabilized by all of
# Sym(3), twice as large.

# %%
sem = semantic_partition(F)
assert orbit_partition(full_stabilizer(sem)) == sem
block = next(b for b in sem.blocks() if len(b) == 3)
H = PermGroupFamily.generated(F, [P.cycle(len(F), block)])
print(H.order(), full_stabilizer(orbit_partition(H)).order())

# %% [markdown]
# Requiring permutations to commute with the constructors shrinks the
# group; with all three preserved and the initial functions fixed, only
# the identity is left.

# %%
G = full_stabilizer(sem)
for ops in ([], ["comp", "rec"], ["comp", "rec", "pair"]):
    print(ops, op_preserving_subgroup(G, ops).order())
print("fixed initials:", op_preserving_subgroup(G, ["comp", "rec", "pair"], fix_initials=True).order())

# %%
report = lattice_report(F, _cache=cache)
for e in report["edges"]:
    print(f"{e['fine']:5s} -> {e['coarse']:5s}", e["witness"])
