# %% [markdown]
# # Decay near the surface
#
# The surface changes the spontaneous emission rate. Above a mirror the
# change follows from the image dipole, which gives an independent check
# of the mode integral.

# %%
import numpy as np

from lateral_cp import EmitterConfig, get_material, lateral_force
from lateral_cp.observables import free_space_rate, populations, surface_rate, total_rate

lam = 852e-9
cfg = EmitterConfig(lam / 4)
g0 = free_space_rate(cfg)
print(f"Gamma0 = {g0:.4e} 1/s   lifetime {1e9 / g0:.2f} ns")

# %%
for name in ("pc", "gold", "silica"):
    mat = get_material(name)
    rel = [surface_rate(cfg.at(z), mat) / g0 for z in lam * np.array([0.05, 0.25, 0.5, 1.0, 2.0])]
    print(f"{name:7s} Gamma1/Gamma0 at z = 0.05..2 lambda: " + " ".join(f"{r: .3f}" for r in rel))

# %% [markdown]
# The force decays with the excited population, p1 = exp(-Gamma t).

# %%
gold = get_material("gold")
gamma = total_rate(cfg, gold)
for t in np.array([0, 10, 30, 100]) * 1e-9:
    p = populations(t, gamma)
    print(f"t = {t * 1e9:5.1f} ns  p1 = {p.p1:.4f}  F = {lateral_force(cfg, gold, t).value: .4e} N")
