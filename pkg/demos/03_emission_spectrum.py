# %% [markdown]
# # Where the photon goes
#
# The force is the recoil of asymmetric emission. The momentum-weighted
# angular spectrum is A + B cos(phi) + C cos^2(phi) + D sin^2(phi); only B
# distinguishes +x from -x, and the force equals -pi B.

# %%
import numpy as np
from scipy.optimize import brentq

from lateral_cp import EmitterConfig, get_material, lateral_force
from lateral_cp.spectrum import asymmetry, spectrum_coefficients

gold = get_material("gold")

# %%
z0 = brentq(lambda z: lateral_force(EmitterConfig(z), gold).value, 290e-9, 315e-9, xtol=1e-16)
for z in (264e-9, z0):
    cfg = EmitterConfig(z)
    co = spectrum_coefficients(cfg, gold)
    print(f"z = {z * 1e9:.2f} nm  A={co.A:.3e} B={co.B:.3e} C={co.C:.3e} D={co.D:.3e}")
    print(f"    forward/backward = {co(0.0) / co(np.pi):.4f}   4B = {asymmetry(cfg, gold):.3e}")
    print(f"    F_x = {lateral_force(cfg, gold).value:.4e} N   -pi B = {-np.pi * co.B:.4e} N")

# %% [markdown]
# At 264 nm more momentum leaves towards +x and the atom is pushed to -x.
# At the force zero the spectrum is mirror symmetric.
#
# A polar plot needs only the four coefficients:

# %%
phi = np.linspace(0, 2 * np.pi, 13)
co = spectrum_coefficients(EmitterConfig(264e-9), gold)
for p, g in zip(phi, co(phi) / np.max(np.abs(co(phi)))):
    print(f"{np.degrees(p):6.1f} deg  " + "#" * int(40 * max(g, 0)))
