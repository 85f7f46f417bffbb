# %% [markdown]
# # Parameter sweeps
#
# The `scan` subcommand writes one CSV row per grid point. The same table
# can be produced from Python, which is what this script does; plotting the
# columns is left to whatever tool is at hand.
#
# Shell equivalent:
#
#     intelligent-states scan --f trapped-ion --eta 0.2 --z 0.5 \
#         --sweep lambda=0.5:3:11 --out sweep.csv

# %%
import sys

from intelligent_states.cli import ScanSpec, Swept, render_rows, scan_rows

spec = ScanSpec(Swept.LAMBDA, 0.5, 3.0, 11, "trapped-ion", eta=0.2, z=0.5)
rows = scan_rows(spec)
for row in rows:
    print(f"lambda={row['param_value']:.2f}  Q={row['mandel_q']:+.4f}  q2={row['q2']:+.4f}  {row['status']}")

# %% [markdown]
# Points that cannot be built do not stop the sweep; they get a status
# naming the error. At z = 0.3, lambda = -1 has no solution and lambda = 0
# is an eigenstate of X, which is not normalizable.

# %%
bad = ScanSpec(Swept.LAMBDA, -1.0, 1.0, 3, "hydrogen", z=0.3)
sys.stdout.write(render_rows(scan_rows(bad), "csv"))
