# %% [markdown]
# # Building intelligent states
#
# An intelligent state solves (X + i lambda P)|psi> = sqrt(2) z |psi> for the
# deformed quadratures. Three families are built in closed form:
#
# * lambda = 1: the nonlinear coherent state, eigenstate of A;
# * z = 0: only even photon numbers appear;
# * everything else, through the S(n, h) chain sums.
#
# lambda = -1 with z != 0 has no normalizable solution and is rejected.

# %%
import numpy as np

from intelligent_states import IntelligentStateRequest, build, nonlinearity as nl
from intelligent_states import CaseTwoNoSolution, OutsideConvergenceDisc
from intelligent_states.fock import deformed_quadrature_stats
from intelligent_states.states import recursion_oracle, residual_check

f = nl.hydrogen()

# %%
for lam, z in [(1.0, 0.6), (3.0, 0.0), (0.5, 0.4), (1.5, 0.3 + 0.2j)]:
    req = IntelligentStateRequest(f, lam, z)
    s = build(req)
    dX, dP, comm = deformed_quadrature_stats(s, f)
    print(f"case {req.case_tag.value:>3}  lambda={lam:<4} z={z!s:<10} N={s.n_top:<3} "
          f"tail={s.tail_mass:.1e}  dX*dP - |comm|/2 = {dX * dP - abs(comm) / 2:+.1e}  "
          f"dX/dP = {dX / dP:.6f}")

# %% [markdown]
# The truncation grows from 32 levels, doubling until the extrapolated tail
# drops below 1e-12. `tail_mass` records what was cut off.
#
# ## Cross-checking against the recursion
#
# The eigenvalue equation is also a three-term recursion in the amplitudes.
# It is a separate code path and should agree to round-off.

# %%
s = build(IntelligentStateRequest(f, 0.5, 0.4))
r = recursion_oracle(f, 0.5, 0.4, dim=s.truncation_dim)
print("max |closed form - recursion|:", np.max(np.abs(s.amplitudes - r.amplitudes)))
print("eigenresidual:", residual_check(s, f, 0.5, 0.4))

# %% [markdown]
# ## What gets rejected

# %%
for lam, z, g in [(-1.0, 0.3, f), (1.0, 1.2, nl.harmonious())]:
    try:
        build(IntelligentStateRequest(g, lam, z))
    except (CaseTwoNoSolution, OutsideConvergenceDisc) as exc:
        print(type(exc).__name__, "-", exc)
