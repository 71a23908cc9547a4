# %% [markdown]
# # Lateral force above a perfect mirror
#
# A circularly polarised emitter, d = d(i, 0, 1), sits at height z above a
# perfectly conducting plane. The reflected field pushes it sideways, and
# for r_p = 1 the wavevector integral has a closed form. We check the two
# against each other and look at the oscillation with distance.

# %%
import numpy as np

from lateral_cp import EmitterConfig, get_material, lateral_force, lateral_force_pc
from lateral_cp.observables import force_curl_pc
from lateral_cp.sweeps import find_landmarks

lam = 852e-9
pc = get_material("pc")

# %%
for z in np.array([0.1, 0.25, 0.5, 1.0, 2.0]) * lam:
    cfg = EmitterConfig(z)
    num = lateral_force(cfg, pc)
    ana = lateral_force_pc(cfg)
    print(f"z = {z / lam:4.2f} lambda   integral {num.value: .6e} N   closed form {ana.value: .6e} N")

# %% [markdown]
# At z = lambda/4 only the cosine term survives and the force is
# -48 d^2 / (eps0 lambda^4), about -3.7e-21 N.

# %%
lm = find_landmarks(lambda z: lateral_force_pc(EmitterConfig(z)).value, lam / 4, 3 * lam, 600)
zeros = np.array(lm.zeros)
print("zeros [lambda]:", np.round(zeros / lam, 4))
print("spacing [lambda/4]:", np.round(np.diff(zeros) / (lam / 4), 4))

# %% [markdown]
# The spacing approaches a quarter wavelength: the reflected wave picks up
# phase 4 pi z / lambda on its round trip.
#
# The force has no potential. Its curl, dF_x/dz, is non-zero:

# %%
for z in (0.2 * lam, 0.37 * lam, lam):
    print(f"z = {z / lam:.2f} lambda   curl_y = {force_curl_pc(EmitterConfig(z)): .4e} N/m")
