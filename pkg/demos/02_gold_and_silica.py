# %% [markdown]
# # Gold and silica half-spaces
#
# With a real dielectric the force comes from the full wavevector integral.
# We sweep 100 nm to 1000 nm, locate the sign changes and extrema, and
# convert the force into the velocity the atom picks up over its decay.

# %%
import numpy as np

from lateral_cp import EmitterConfig, get_material, lateral_force, recoil_velocity
from lateral_cp.sweeps import SweepSpec, find_landmarks, run_sweep

gold, silica = get_material("gold"), get_material("silica")

# %%
for mat in (gold, silica):
    lm = find_landmarks(lambda z: lateral_force(EmitterConfig(z), mat).value, 100e-9, 1000e-9, 181)
    print(mat.name)
    print("  zeros  [nm]:", np.round(np.array(lm.zeros) * 1e9, 1))
    print("  maxima [nm]:", np.round(np.array(lm.maxima) * 1e9, 1))
    print("  minima [nm]:", np.round(np.array(lm.minima) * 1e9, 1))

# %% [markdown]
# Gold vanishes at 302 nm, peaks at 391 nm and bottoms out at 636 nm.
# Silica's features sit some 50 nm further out.

# %%
ds = run_sweep(SweepSpec("velocity", "gold", 100e-9, 700e-9, 7))
for z_nm, v_mm in zip(ds.column("z_A_nm"), ds.column("value_mm_s")):
    print(f"gold  z = {z_nm:5.0f} nm   v = {v_mm: .4f} mm/s")

# %% [markdown]
# Close to the surface the velocity is a fraction of a mm/s and points
# along -x for the sigma+ emitter. Flipping the handedness flips it:

# %%
cfg = EmitterConfig(190e-9)
print(recoil_velocity(cfg, gold), recoil_velocity(cfg.flipped(), gold))
