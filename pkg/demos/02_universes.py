# %% [markdown]
# # Algorithmic universes
#
# Each universe identifies descriptions related by a set of rewrite
# rules.  Coarser universes keep the rules of the finer ones.

# %%
from pru import parse
from pru.universes import equiv, normalize, normalize_best_effort, replay, rules_of

for u in ("Desc", "C", "I", "Cat", "CatX", "CatN", "CatXN"):
    print(f"{u:6s}", sorted(r.id for r in rules_of(u)))

# %% [markdown]
# Canonical forms decide `C`, `I` and `Cat`.

# %%
t = parse("(comp (id 1) (comp s (comp s (id 1))))")
for u in ("C", "I", "Cat"):
    print(u, normalize(t, u).text)
print("CatX", normalize_best_effort(parse("(comp (pair s z) s)")).text)

# %% [markdown]
# In `CatN` the recursion laws join descriptions that no categorical
# rule relates.  The verdict carries a witness that replays step by step.

# %%
a, b = parse("(rec (pi 1 1) (pi 2 2))"), parse("(comp (pi 1 1) (pi 2 1))")
print("Cat :", equiv(a, b, "Cat").verdict)
v = equiv(a, b, "CatN")
print("CatN:", v.verdict, [(s.rule, s.direction) for s in v.witness])
assert replay(a, v.witness) == b
