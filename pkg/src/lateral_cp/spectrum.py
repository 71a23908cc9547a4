r"""Directional emission: rate density, angular spectrum and x-asymmetry.

The momentum-weighted angular spectrum

.. math::

    \bar\Gamma(z_A, \phi) = \int_0^\infty dk_\parallel\, k_\parallel\,
    \hbar k_\parallel\, \gamma(z_A, k_\parallel, \phi)
    = A + B\cos\phi + C\cos^2\phi + D\sin^2\phi

is evaluated from four wavevector integrals. ``B`` is built on the same
integral as the lateral force, so ``F_x(t=0) = -pi B`` holds to rounding.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.constants import epsilon_0, hbar

from .observables import MU_0, EmitterConfig, _spectral_integral
from .planar_em import Material, ModeCoordinates, green_mode
from .quadrature import QuadratureConfig

__all__ = [
    "SpectrumCoefficients",
    "emission_rate_density",
    "spectrum_coefficients",
    "angular_spectrum",
    "asymmetry",
]


@dataclass(frozen=True)
class SpectrumCoefficients:
    """Angular coefficients of the emission spectrum at height ``z_A``.

    Units are those of ``hbar k γ`` integrated over ``k dk``: N (momentum
    per time). ``errors`` holds the absolute error estimate of each
    coefficient in the order A, B, C, D.
    """

    A: float
    B: float
    C: float
    D: float
    z_A: float
    errors: tuple = (0.0, 0.0, 0.0, 0.0)

    def __call__(self, phi):
        """Evaluate the angular spectrum at ``phi`` (scalar or array)."""
        c, s = np.cos(phi), np.sin(phi)
        return self.A + self.B * c + self.C * c * c + self.D * s * s


def emission_rate_density(cfg: EmitterConfig, mat: Material, k_par, phi):
    r"""Surface-assisted emission rate per mode, :math:`\gamma(z_A, \mathbf{k}_\parallel)`.

    .. math::

        \gamma = \frac{2\mu_0}{\hbar}\omega^2\,
        \mathrm{Im}\{\mathbf{d}_{10}\cdot\mathbf{G}^{(1)}(\mathbf{k}_\parallel)
        \cdot\mathbf{d}_{01}\}

    Integrating over ``k_par dk_par dphi`` gives :func:`~lateral_cp.observables.surface_rate`.
    Units: 1/s per (1/m²).
    """
    eps = 1.0 if mat.is_perfect_conductor else mat.epsilon
    mode = ModeCoordinates.from_k(k_par, phi, cfg.omega, eps)
    G = green_mode(cfg.z_A, mode, mat)
    d = cfg.dipole
    contraction = np.einsum("i,...ij,j->...", d, G, d.conj())
    return 2.0 * MU_0 / hbar * cfg.omega**2 * contraction.imag


@lru_cache(maxsize=1024)
def _coefficients(cfg: EmitterConfig, mat: Material, qcfg: QuadratureConfig) -> SpectrumCoefficients:
    d = cfg.dipole
    if abs(d[1]) != 0.0:
        raise ValueError("the A/B/C/D decomposition assumes a dipole in the x-z plane")
    dx2, dz2 = abs(d[0]) ** 2, abs(d[2]) ** 2
    omega, z = cfg.omega, cfg.z_A
    ia = _spectral_integral("A", omega, z, mat, qcfg)
    ib = _spectral_integral("force", omega, z, mat, qcfg)
    ic = _spectral_integral("C", omega, z, mat, qcfg)
    idd = _spectral_integral("D", omega, z, mat, qcfg)
    pa = dz2 / (4.0 * math.pi**2 * epsilon_0)
    pb = cfg.chirality / (2.0 * math.pi**2 * epsilon_0)
    pc = -dx2 / (4.0 * math.pi**2 * epsilon_0)
    pd = dx2 / (4.0 * math.pi**2 * epsilon_0)
    return SpectrumCoefficients(
        A=float(pa * ia.value.real),
        B=float(pb * ib.value.imag),
        C=float(pc * ic.value.real),
        D=float(pd * idd.value.real),
        z_A=z,
        errors=tuple(
            float(abs(p) * r.abs_error_estimate)
            for p, r in ((pa, ia), (pb, ib), (pc, ic), (pd, idd))
        ),
    )


def spectrum_coefficients(cfg: EmitterConfig, mat: Material, qcfg: QuadratureConfig | None = None) -> SpectrumCoefficients:
    """A, B, C, D at the emitter height, cached per (emitter, material, tolerances)."""
    return _coefficients(cfg, mat, qcfg or QuadratureConfig())


def angular_spectrum(cfg: EmitterConfig, mat: Material, phi, qcfg: QuadratureConfig | None = None):
    """Momentum-weighted emission spectrum at azimuth ``phi`` [N per rad]."""
    return spectrum_coefficients(cfg, mat, qcfg)(phi)


def asymmetry(cfg: EmitterConfig, mat: Material, qcfg: QuadratureConfig | None = None) -> float:
    """Emission into the +x half-plane minus the -x half-plane, equal to ``4 B``.

    Positive values mean stronger emission towards +x.
    """
    return 4.0 * spectrum_coefficients(cfg, mat, qcfg).B
