# %% [markdown]
# # Descriptions versus functions
#
# Three different programs for the constant-zero function on one input.
# They differ as syntax trees but agree as functions.

# %%
from pru import evaluate, fingerprint, parse
from pru.universes import equiv

nulls = [parse(t) for t in ("z", "(comp z (comp (pi 2 1) (pair s s)))", "(comp z (comp s (comp s s)))")]
for t in nulls:
    print(f"{t.text:45s} size {t.size:2d}  f(7) = {evaluate(t, (7,))}")

# %% [markdown]
# Value tables on the grid {0..3} coincide, so the descriptions are
# equal in `Func` while staying distinct in `Desc`.

# %%
print({fingerprint(t, 4).table for t in nulls})
print(equiv(nulls[0], nulls[1], "Desc").verdict, equiv(nulls[0], nulls[1], "Func").verdict)

# %% [markdown]
# Recursion runs its counter in the last coordinate: addition and
# multiplication as primitive recursive descriptions.

# %%
add = parse("(rec (pi 1 1) (comp s (pi 2 2)))")
mul = parse("(rec z (comp (rec (pi 1 1) (comp s (pi 2 2))) (pair (pi 2 2) (pi 2 1))))")
print([evaluate(add, (x, 4))[0] for x in range(5)])
print([evaluate(mul, (x, 4))[0] for x in range(5)])
