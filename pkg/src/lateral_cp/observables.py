r"""Decay rates, lateral Casimir-Polder force, populations and recoil velocity.

The emitter is a two-level atom at height ``z_A`` above the half-space with a
rotating transition dipole :math:`\mathbf{d}_{10} = d\,(i, 0, 1)` (σ⁺). All
lateral-force expressions reduce to the single wavevector integral

.. math::

    I(z_A) = \int_0^\infty dk_\parallel\, k_\parallel^3\, e^{2ik_\perp z_A}\, r_p,

and the force is :math:`F_x = -\chi\,\mathrm{Im}\,I / (2\pi\varepsilon_0)` with
the dipole chirality :math:`\chi = \mathrm{Im}(d_x d_z^*)`, which equals
:math:`d^2` for σ⁺, :math:`-d^2` for σ⁻ and vanishes for real dipoles.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT
from scipy.constants import epsilon_0, hbar, physical_constants

from .planar_em import Material, ModeCoordinates, fresnel_rp, fresnel_rs, green_mode_dx, kz
from .quadrature import QuadratureConfig, QuadratureResult, integrate_azimuth, integrate_spectrum

__all__ = [
    "CS133_MASS",
    "EmitterConfig",
    "Populations",
    "ForceSample",
    "NegativeDecayRate",
    "free_space_rate",
    "surface_rate",
    "total_rate",
    "scattering_green_tensor",
    "populations",
    "lateral_force",
    "lateral_force_general",
    "lateral_force_pc",
    "lateral_force_near",
    "lateral_force_retarded",
    "force_curl_pc",
    "retarded_envelope",
    "recoil_velocity",
    "force_integral",
]

# 132.905451961 u; not given with the transition data, needed only for velocities
CS133_MASS = 132.905451961 * physical_constants["atomic mass constant"][0]

# tied to epsilon_0 so that mu_0 epsilon_0 c^2 = 1 holds to rounding
MU_0 = 1.0 / (epsilon_0 * SPEED_OF_LIGHT**2)

GAMMA_MODES = ("total", "free-space")


class NegativeDecayRate(ArithmeticError):
    """The total decay rate came out non-positive."""


@dataclass(frozen=True)
class EmitterConfig:
    """Two-level emitter above the surface.

    Attributes
    ----------
    z_A : float
        Height above the surface [m].
    wavelength : float
        Transition wavelength [m]; the angular frequency is derived from it.
    dipole_magnitude : float
        ``d`` in ``d_10 = d * dipole_vector`` [C m].
    dipole_vector : tuple of complex
        Dimensionless direction of ``d_10``; ``(i, 0, 1)`` for the σ⁺ emitter.
    mass : float
        Atom mass [kg].
    handedness : {"sigma+", "sigma-"}
        ``"sigma-"`` uses the complex conjugate of ``dipole_vector``.
    """

    z_A: float
    wavelength: float = 852e-9
    dipole_magnitude: float = 1.9e-29
    dipole_vector: tuple = (1j, 0.0, 1.0)
    mass: float = CS133_MASS
    handedness: str = "sigma+"

    def __post_init__(self):
        object.__setattr__(self, "dipole_vector", tuple(complex(v) for v in self.dipole_vector))
        if len(self.dipole_vector) != 3:
            raise ValueError("dipole_vector must have three components")
        if not self.z_A > 0:
            raise ValueError(f"z_A must be positive, got {self.z_A}")
        if not self.dipole_magnitude >= 0:
            raise ValueError("dipole_magnitude must be non-negative")
        if not self.wavelength > 0:
            raise ValueError("wavelength must be positive")
        if self.handedness not in ("sigma+", "sigma-"):
            raise ValueError("handedness must be 'sigma+' or 'sigma-'")

    @property
    def omega(self) -> float:
        return 2.0 * math.pi * SPEED_OF_LIGHT / self.wavelength

    @property
    def k0(self) -> float:
        return 2.0 * math.pi / self.wavelength

    @property
    def dipole(self) -> np.ndarray:
        """``d_10`` in SI units [C m]."""
        v = np.array(self.dipole_vector, dtype=complex)
        if self.handedness == "sigma-":
            v = v.conj()
        return self.dipole_magnitude * v

    @property
    def chirality(self) -> float:
        """``Im(d_x d_z*)`` [C² m²]; the only dipole combination the lateral force sees."""
        d = self.dipole
        return float((d[0] * d[2].conjugate()).imag)

    def at(self, z_A: float) -> "EmitterConfig":
        return replace(self, z_A=z_A)

    def flipped(self) -> "EmitterConfig":
        return replace(self, handedness="sigma-" if self.handedness == "sigma+" else "sigma+")


@dataclass(frozen=True)
class Populations:
    p0: float
    p1: float
    t: float


@dataclass(frozen=True)
class ForceSample:
    """Lateral force ``value`` [N] with its absolute error estimate [N]."""

    value: float
    regime: str
    t: float
    error_estimate: float = 0.0


def _breakpoints(mat: Material, k0: float) -> tuple:
    if mat.is_perfect_conductor or mat.epsilon.real <= 0.0:
        return ()
    kb = math.sqrt(mat.epsilon.real) * k0
    return (kb,) if abs(kb - k0) > 1e-9 * k0 else ()


def _mode(k, kzv, omega, mat):
    eps = 1.0 if mat.is_perfect_conductor else mat.epsilon
    return ModeCoordinates(k, 0.0, omega, kzv, kz(k, omega, eps))


@lru_cache(maxsize=4096)
def _spectral_integral(kind: str, omega: float, z_A: float, mat: Material, qcfg: QuadratureConfig) -> QuadratureResult:
    k0 = omega / SPEED_OF_LIGHT

    def f(k, kzv):
        mode = _mode(k, kzv, omega, mat)
        phase = np.exp(2j * kzv * z_A)
        if kind == "force":
            return k**3 * phase * fresnel_rp(mode, mat)
        if kind == "perp":
            return k**3 / kzv * phase * fresnel_rp(mode, mat) / (k0 * k0)
        if kind == "par":
            return k / kzv * phase * (fresnel_rs(mode, mat) - fresnel_rp(mode, mat) * kzv * kzv / (k0 * k0))
        if kind == "A":
            return k**4 / kzv * phase * fresnel_rp(mode, mat)
        if kind == "C":
            return k**2 * kzv * phase * fresnel_rp(mode, mat)
        if kind == "D":
            return k**2 / kzv * k0 * k0 * phase * fresnel_rs(mode, mat)
        raise ValueError(kind)

    if mat.is_vacuum:
        return QuadratureResult(0j, 0.0, 0, float("nan"))
    return integrate_spectrum(f, omega, z_A, qcfg, breakpoints=_breakpoints(mat, k0), with_kz=True)


def force_integral(cfg: EmitterConfig, mat: Material, qcfg: QuadratureConfig | None = None) -> QuadratureResult:
    r""":math:`\int_0^\infty dk\, k^3 e^{2ik_\perp z_A} r_p` at the emitter height [1/m⁴]."""
    return _spectral_integral("force", cfg.omega, cfg.z_A, mat, qcfg or QuadratureConfig())


def free_space_rate(cfg: EmitterConfig) -> float:
    r"""Vacuum spontaneous emission rate :math:`\omega^3|\mathbf{d}|^2/(3\pi\varepsilon_0\hbar c^3)` [1/s]."""
    d2 = float(np.sum(np.abs(cfg.dipole) ** 2))
    return cfg.omega**3 * d2 / (3.0 * math.pi * epsilon_0 * hbar * SPEED_OF_LIGHT**3)


def scattering_green_tensor(cfg: EmitterConfig, mat: Material, qcfg: QuadratureConfig | None = None):
    """Scattering Green tensor at coincidence, integrated over all modes [1/m].

    Returns a diagonal 3x3 complex array together with the absolute error of
    its largest entry.
    """
    qcfg = qcfg or QuadratureConfig()
    par = _spectral_integral("par", cfg.omega, cfg.z_A, mat, qcfg)
    perp = _spectral_integral("perp", cfg.omega, cfg.z_A, mat, qcfg)
    gxx = 1j / (8.0 * math.pi) * par.value
    gzz = 1j / (4.0 * math.pi) * perp.value
    err = max(par.abs_error_estimate / (8.0 * math.pi), perp.abs_error_estimate / (4.0 * math.pi))
    return np.diag([gxx, gxx, gzz]), err


def surface_rate(cfg: EmitterConfig, mat: Material, qcfg: QuadratureConfig | None = None, full_output: bool = False):
    r"""Surface-induced change of the decay rate :math:`\Gamma^{(1)}(z_A)` [1/s].

    :math:`\Gamma^{(1)} = (2\mu_0/\hbar)\,\omega^2\,
    \mathrm{Im}\{\mathbf{d}_{10}\cdot\mathbf{G}^{(1)}\cdot\mathbf{d}_{01}\}`.
    With ``full_output=True`` returns ``(rate, abs_error_estimate)``.
    """
    if mat.is_vacuum:
        return (0.0, 0.0) if full_output else 0.0
    G, gerr = scattering_green_tensor(cfg, mat, qcfg)
    d = cfg.dipole
    scale = 2.0 * MU_0 / hbar * cfg.omega**2
    rate = float(scale * (d @ G @ d.conj()).imag)
    if full_output:
        return rate, float(scale * gerr * np.sum(np.abs(d) ** 2))
    return rate


def total_rate(cfg: EmitterConfig, mat: Material, qcfg=None, gamma_mode: str = "total") -> float:
    """Decay rate used for the population dynamics.

    ``gamma_mode="total"`` adds the surface correction to the free-space rate,
    ``"free-space"`` uses the vacuum value only.
    """
    if gamma_mode not in GAMMA_MODES:
        raise ValueError(f"gamma_mode must be one of {GAMMA_MODES}")
    gamma = free_space_rate(cfg)
    if gamma_mode == "total":
        gamma += surface_rate(cfg, mat, qcfg)
    if not gamma > 0.0:
        raise NegativeDecayRate(f"total decay rate {gamma:.6e} 1/s is not positive")
    return gamma


def populations(t: float, gamma: float) -> Populations:
    """Ground/excited populations of an atom excited at ``t = 0``."""
    if t < 0 or gamma < 0:
        raise ValueError("t and gamma must be non-negative")
    p1 = math.exp(-gamma * t)
    return Populations(p0=1.0 - p1, p1=p1, t=t)


def _time_factor(cfg, mat, t, qcfg, gamma_mode):
    if t == 0:
        return 1.0
    return math.exp(-total_rate(cfg, mat, qcfg, gamma_mode) * t)


def lateral_force(
    cfg: EmitterConfig,
    mat: Material,
    t: float = 0.0,
    qcfg: QuadratureConfig | None = None,
    gamma_mode: str = "total",
) -> ForceSample:
    """Lateral force from the full wavevector integral [N]."""
    qcfg = qcfg or QuadratureConfig()
    decay = _time_factor(cfg, mat, t, qcfg, gamma_mode)
    res = force_integral(cfg, mat, qcfg)
    pref = -cfg.chirality / (2.0 * math.pi * epsilon_0)
    value = pref * res.value.imag * decay
    return ForceSample(value, "full", t, abs(pref) * res.abs_error_estimate * decay)


def lateral_force_general(
    transitions: Iterable[tuple[Sequence[complex], float, float]],
    mat: Material,
    z_A: float,
    qcfg: QuadratureConfig | None = None,
) -> ForceSample:
    r"""Recoil force of an incoherent multi-level state [N].

    Each transition is ``(d_nk, omega_nk, p_n)`` with the dipole in C m, the
    transition frequency in rad/s and the population of the upper level. The
    force is :math:`2\mu_0\sum p_n\omega_{nk}^2\,\mathrm{Re}\{\mathbf{d}_{nk}
    \cdot\partial_x\mathbf{G}^{(1)}\cdot\mathbf{d}_{kn}\}` with the mode
    tensor integrated numerically over azimuth and wavevector.
    """
    qcfg = qcfg or QuadratureConfig()
    total, err = 0.0, 0.0
    for dipole, omega, pop in transitions:
        if not omega > 0:
            raise ValueError("transition frequencies must be positive")
        if not 0.0 <= pop <= 1.0:
            raise ValueError("populations must lie in [0, 1]")
        if pop == 0.0:
            continue
        d = np.asarray(dipole, dtype=complex)
        tensor, terr = _dx_tensor(float(omega), float(z_A), mat, qcfg)
        contraction = d @ tensor @ d.conj()
        scale = 2.0 * MU_0 * pop * omega**2
        total += scale * contraction.real
        err += scale * terr * float(np.sum(np.abs(d)) ** 2)
    return ForceSample(float(total), "general", float("nan"), float(err))


@lru_cache(maxsize=1024)
def _dx_tensor(omega, z_A, mat, qcfg):
    """φ- and k-integrated x-derivative of the scattering Green tensor [1/m²]."""
    if mat.is_vacuum:
        return np.zeros((3, 3), dtype=complex), 0.0
    eps = 1.0 if mat.is_perfect_conductor else mat.epsilon
    k0 = omega / SPEED_OF_LIGHT

    def density(k, kzv):
        kzm = kz(k, omega, eps)

        def over_phi(phi):
            mode = ModeCoordinates(k[None, :], phi[:, None], omega, kzv[None, :], kzm[None, :])
            return green_mode_dx(z_A, mode, mat).reshape(len(phi), len(k), 9)

        return k[:, None] * integrate_azimuth(over_phi, qcfg).value

    res = integrate_spectrum(density, omega, z_A, qcfg, breakpoints=_breakpoints(mat, k0), with_kz=True)
    tensor = np.asarray(res.value).reshape(3, 3)
    tensor.setflags(write=False)
    return tensor, res.abs_error_estimate


def _pc_bracket(z, lam):
    """Distance dependence of the perfect-conductor force for χ = 1 [N per C² m²]."""
    phase = 4.0 * math.pi * z / lam
    return (
        3.0 / (4.0 * epsilon_0 * lam * z**3) * math.cos(phase)
        + (math.pi / (lam**2 * z**2) - 3.0 / (16.0 * math.pi * z**4)) / epsilon_0 * math.sin(phase)
    )


def lateral_force_pc(cfg: EmitterConfig, t: float = 0.0, qcfg=None, gamma_mode: str = "total") -> ForceSample:
    """Closed-form lateral force above a perfect conductor [N]."""
    pc = Material("pc", is_perfect_conductor=True)
    decay = _time_factor(cfg, pc, t, qcfg, gamma_mode)
    return ForceSample(cfg.chirality * _pc_bracket(cfg.z_A, cfg.wavelength) * decay, "pc", t, 0.0)


def lateral_force_near(cfg: EmitterConfig, mat: Material, t: float = 0.0, qcfg=None, gamma_mode: str = "total") -> ForceSample:
    """Non-retarded (z_A << λ) limit of the lateral force above a lossy dielectric [N]."""
    if mat.is_perfect_conductor:
        raise ValueError("the near-field law needs a finite permittivity, not a perfect conductor")
    eps = mat.epsilon
    decay = _time_factor(cfg, mat, t, qcfg, gamma_mode)
    value = -3.0 * cfg.chirality / (8.0 * math.pi * epsilon_0 * cfg.z_A**4) * eps.imag / abs(eps + 1.0) ** 2
    return ForceSample(value * decay, "near", t, 0.0)


def lateral_force_retarded(cfg: EmitterConfig, mat: Material, t: float = 0.0, qcfg=None, gamma_mode: str = "total") -> ForceSample:
    """Retarded (z_A >> λ) limit of the lateral force [N]."""
    if mat.is_perfect_conductor:
        r = 1.0 + 0j
    else:
        n = np.sqrt(mat.epsilon + 0j)
        r = (n - 1.0) / (n + 1.0)
    lam, z = cfg.wavelength, cfg.z_A
    phase = 4.0 * math.pi * z / lam
    decay = _time_factor(cfg, mat, t, qcfg, gamma_mode)
    value = cfg.chirality * math.pi / (epsilon_0 * lam**2 * z**2) * (
        r.real * math.sin(phase) + r.imag * math.cos(phase)
    )
    return ForceSample(value * decay, "retarded", t, 0.0)


def retarded_envelope(cfg: EmitterConfig, mat: Material) -> float:
    """Amplitude of the oscillating retarded law, ``|chi| pi |r_p(0)| / (eps0 lambda^2 z^2)`` [N]."""
    if mat.is_perfect_conductor:
        r = 1.0
    else:
        n = np.sqrt(mat.epsilon + 0j)
        r = abs((n - 1.0) / (n + 1.0))
    return abs(cfg.chirality) * math.pi * r / (epsilon_0 * cfg.wavelength**2 * cfg.z_A**2)


def force_curl_pc(cfg: EmitterConfig) -> float:
    """y-component of the curl of the perfect-conductor force, dF_x/dz_A at t = 0 [N/m]."""
    z, lam = cfg.z_A, cfg.wavelength
    phase = 4.0 * math.pi * z / lam
    bracket = (4.0 * math.pi**2 / (lam**3 * z**2) - 3.0 / (lam * z**4)) * math.cos(phase) + (
        3.0 / (4.0 * math.pi * z**5) - 5.0 * math.pi / (lam**2 * z**3)
    ) * math.sin(phase)
    return cfg.chirality / epsilon_0 * bracket


def recoil_velocity(cfg: EmitterConfig, mat: Material, qcfg=None, gamma_mode: str = "total") -> float:
    """Lateral velocity gained over the full decay, ``F_x(t=0) / (m Γ)`` [m/s]."""
    gamma = total_rate(cfg, mat, qcfg, gamma_mode)
    return lateral_force(cfg, mat, 0.0, qcfg).value / (cfg.mass * gamma)
