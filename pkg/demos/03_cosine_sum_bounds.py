# %% [markdown]
# # Cosine sums with a lower bound
#
# sigma(a, b)(alpha) = sum cos(alpha n)/n can be as small as about -log 2
# over a block of the right shape, but never much below.  The bound used
# below splits [q^gamma, q^(1/3+eps)] at v = p(2m+1).

# %%
from math import pi, sin

from pvshort import triglemma as T

print("sigma(2, 9)(pi) =", T.sigma(2, 9, pi))

sp = T.split_points(10**6, 0.0, 0.05)
print(sp)

# %% [markdown]
# Sweep alpha and compare with the assembled floor -8 - 1/(2q).

# %%
alphas = [2 * pi * j / 200 for j in range(200)]
for q in (10**5, 10**6):
    for gamma in (0.0, 0.1):
        reps = [T.sigma_lower_bound_eq3(q, gamma, 0.05, a) for a in alphas]
        low = min(reps, key=lambda r: r.value)
        print(f"q={q:<8d} gamma={gamma}: min sigma = {low.value:+.4f}  floor = {low.chain_bound:.4f}")

# %% [markdown]
# The averaged forms: (1 - cos)/n sums against log of the range, and the
# |sin| sums against (2/pi) times it.

# %%
for a in (0.3, 1.0, 2.5):
    r1 = T.lemma_eq1(10**6, 0.1, 0.05, a)
    r2 = T.lemma_eq2(10**6, 0.1, 0.05, a)
    print(f"alpha={a}: eq1 residual {r1.residual:+.3f}, eq2 residual {r2.residual:+.3f}")

approx, bound = T.abs_sin_fourier(1.0, 10**4)
print("Fourier |sin 1| error", abs(approx - abs(sin(1.0))), "<=", bound)
