# %% [markdown]
# # Short and long distance laws
#
# Close to a lossy surface the force follows
# -3 d^2 Im(eps) / (8 pi eps0 z^4 |eps + 1|^2); far away it oscillates
# with an amplitude that falls as 1/z^2.

# %%
import numpy as np

from lateral_cp import EmitterConfig, Material, get_material, lateral_force
from lateral_cp.sweeps import compare_asymptotics

lam = 852e-9
ds = compare_asymptotics("gold", [lam / 1000, lam / 100, lam / 10, 5 * lam, 10 * lam, 20 * lam])
for row in ds.rows:
    z_nm, full, near, ret, dn, dr = row
    print(f"z = {z_nm:8.2f} nm  full {full: .3e}  near dev {dn:8.2%}  retarded dev {dr:7.2%}")

# %% [markdown]
# The retarded law is leading order in lambda/z, so it is within 5 % of its
# amplitude only beyond roughly 7 wavelengths.
#
# For a lossless medium the near-field law gives zero, but the full
# integral does not: modes between the two light lines still carry
# momentum, and the force tends to a finite value.

# %%
glass = Material("lossless", 2.25)
for z in lam / np.array([20, 100, 1000, 10000]):
    print(f"z = {z * 1e9:8.3f} nm   F = {lateral_force(EmitterConfig(z), glass).value: .4e} N")
