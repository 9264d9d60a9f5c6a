# %% [markdown]
# # The unit group mod q
#
# Every modulus factors into prime powers, and each prime power contributes
# one or two cyclic pieces to (Z/qZ)*.  Discrete logs over those pieces are
# what make character evaluation a table lookup.

# %%
from pvshort.residues import factorize, residue_group

for q in (12, 5, 8, 360, 9991):
    g = residue_group(q)
    parts = ", ".join(f"<{c.generator}> of order {c.order} mod {c.modulus}" for c in g.components)
    print(f"q={q:5d}  {factorize(q).factors}  phi={g.phi}  {parts}")

# %% [markdown]
# Powers of 2 beyond 4 are not cyclic: mod 8 every unit squares to 1, so
# two generators (-1 and 5) are needed.

# %%
g = residue_group(40)
for n in (1, 3, 7, 9, 11, 39):
    t = g.exponent_tuple(n)
    print(n, "->", t, "->", g.element(t))
