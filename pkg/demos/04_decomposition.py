# %% [markdown]
# # Splitting the inverted sum
#
# After Fourier inversion, S(N) is sqrt(q)/(2 pi) times the size of
# sum_a conj chi(a) (e(aN/q) - 1)/a.  The a-range splits into small,
# middle and large |a|; only the middle part carries the log.

# %%
from math import floor

from pvshort import CharacterLabel, decompose
from pvshort.decomposition import sigma1_parity_form, sigma3_via_partial_summation

q = 100003
chi = CharacterLabel(q, (12345,))
N = floor(q**0.8)
rep = decompose(chi, N, 0.2, 0.05)
print(f"parity {rep.parity}, S(N) = {rep.direct_s:.2f}")
for name, z, b in zip(("sigma1", "sigma2", "sigma3"), (rep.sigma1, rep.sigma2, rep.sigma3),
                      rep.per_part_bounds):
    print(f"  |{name}| = {abs(z):7.3f}   bound {b:7.3f}")
print("partition residual", rep.partition_residual)

# %% [markdown]
# The small-|a| part collapses to a one-sided sum that depends on parity.

# %%
N = floor(q ** (2 / 3))
rep = decompose(chi, N, 1 / 3, 0.05)
print(rep.sigma1, sigma1_parity_form(chi, N, 1 / 3))

s3 = sigma3_via_partial_summation(chi, floor(q**0.9), 0.05)
print(f"|sigma3| = {s3.value:.3f} <= {s3.majorant:.3f}")
print(rep.to_json()[:120], "...")
