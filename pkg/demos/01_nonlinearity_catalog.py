# %% [markdown]
# # Nonlinearity functions
#
# A deformed oscillator is fixed by one real function f(n). The lowering
# operator becomes A = a f(n), so A|n> = sqrt(n) f(n) |n-1>. This script
# walks through the built-in catalog and the two ways of deriving f from
# data.

# %%
import numpy as np

from intelligent_states import nonlinearity as nl

# %% [markdown]
# ## The catalog
#
# `identity` is the ordinary oscillator. `harmonious` and `hydrogen` have a
# finite disc of convergence for their coherent states. `trapped_ion` needs
# the Lamb-Dicke parameter and is only defined up to the first zero of its
# Laguerre factors.

# %%
for f in (nl.identity(), nl.harmonious(), nl.hydrogen(), nl.trapped_ion(0.2)):
    print(f"{f.name:12s} radius={f.convergence_radius:<4} max_n={f.max_valid_n}  "
          f"f(1..4)={np.round(f.values(4), 6)}")

# %% [markdown]
# ## The trapped-ion wall
#
# L_n^0(eta^2) changes sign once as n grows. Everything past it is refused:
# asking for f(36) at eta = 0.2 raises `OutOfValidRange`.

# %%
ti = nl.trapped_ion(0.2)
l0 = nl.laguerre_sequence(40, 0, 0.04)
print("last valid n:", ti.max_valid_n, " L_n^0 around it:", np.round(l0[34:38], 4))
try:
    ti(36)
except nl.OutOfValidRange as exc:
    print("refused:", exc)

# %% [markdown]
# ## f from a spectrum
#
# A discrete spectrum e_n = n f(n)^2 fixes f. Feeding in the hydrogen-like
# levels 1 - 1/(n+1)^2 recovers the catalog entry.

# %%
n = np.arange(1, 21)
from_levels = nl.f_from_spectrum(1 - 1 / (n + 1.0) ** 2, source="hydrogen-levels")
print("max deviation from catalog:", np.max(np.abs(from_levels.values(20) - nl.hydrogen().values(20))))

# %% [markdown]
# ## f from coherent-state coefficients, and duals
#
# Constant coefficients give the harmonious f = 1/sqrt(n). The dual swaps f
# for 1/f and is an involution.

# %%
print(nl.f_from_coefficients(np.ones(6)).values(5))
d = nl.dual(nl.harmonious())
print(d.name, d.values(4))
print("dual of the dual is the original:", nl.dual(d) is d.base)
