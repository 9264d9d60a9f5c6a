# %% [markdown]
# # Characters, prefix sums and Gauss sums
#
# A character is named by its exponent tuple.  For the quadratic character
# mod 5 the tuple is (2,): chi(2) = e(2/4) = -1.

# %%
from math import sqrt

from pvshort import CharacterLabel, enumerate_primitive, gauss_sum, prefix_sums, profile
from pvshort.charsums import reconstruct_via_inversion

chi = CharacterLabel(5, (2,))
print(profile(chi))
print("partial sums:", prefix_sums(chi).partials[1:].real)

# %% [markdown]
# For primitive characters |tau(chi)| = sqrt(q), and the prefix sums can be
# rebuilt from the finite Fourier expansion.  The two routes share no code
# beyond the character table.

# %%
q = 1009
labels = enumerate_primitive(q)
worst = max(abs(abs(gauss_sum(lab).value) - sqrt(q)) for lab in labels[:200])
print(f"{len(labels)} primitive characters mod {q}; max ||tau| - sqrt q| = {worst:.1e}")

lab = labels[17]
direct = prefix_sums(lab).partials[1:]
rebuilt = reconstruct_via_inversion(lab)
print("max |inverted - direct| =", abs(rebuilt - direct).max())

# %% [markdown]
# Where does |S(N)| peak?  The full period sums to zero, so
# S(q-1-N) = -chi(-1) S(N) and the first maximiser always lies in N < q/2.

# %%
for lab in labels[:5]:
    p = prefix_sums(lab)
    print(f"{lab}: max |S| = {p.max_abs:.2f} at N/q = {p.argmax_n / q:.3f}")
