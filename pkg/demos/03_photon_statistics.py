# %% [markdown]
# # Photon statistics and squeezing
#
# The Mandel parameter Q is negative for sub-Poissonian light. The squeezing
# parameters q1, q2 refer to the ordinary x and p quadratures and lie in
# (-1, 0) when that quadrature is squeezed.

# %%
from intelligent_states import IntelligentStateRequest, build, full_report, nonlinearity as nl


def report(f, lam, z):
    return full_report(build(IntelligentStateRequest(f, lam, z)), f, lam, z)


# %% [markdown]
# Coherent states sit at Q = q1 = q2 = 0. The squeezed vacuum with
# tanh r = 1/2 has var_p = 1/6.

# %%
r = report(nl.identity(), 1, 0.7)
print(f"coherent:  Q={r.mandel_q:+.1e} q1={r.q1:+.1e} q2={r.q2:+.1e}")
r = report(nl.identity(), 3, 0)
print(f"squeezed:  var_x={r.var_x:.6f} var_p={r.var_p:.6f}")

# %% [markdown]
# ## Nonlinear coherent states
#
# Trapped-ion states are antibunched and x-squeezed. Harmonious and
# hydrogen states are super-Poissonian with a squeezed p quadrature.

# %%
for name, f, zs in [
    ("trapped-ion 0.2", nl.trapped_ion(0.2), (1, 3, 6)),
    ("harmonious", nl.harmonious(), (0.2, 0.5, 0.8)),
    ("hydrogen", nl.hydrogen(), (0.3, 0.6, 0.9)),
]:
    for z in zs:
        r = report(f, 1, z)
        print(f"{name:16s} z={z:<4} <n>={r.mean_n:7.4f} Q={r.mandel_q:+.4f} q1={r.q1:+.4f} q2={r.q2:+.4f}")

# %% [markdown]
# For the harmonious family the photon distribution is geometric and
# Q = z^2 / (1 - z^2) exactly.

# %%
for z in (0.1, 0.3, 0.6):
    print(z, report(nl.harmonious(), 1, z).mandel_q, z * z / (1 - z * z))
