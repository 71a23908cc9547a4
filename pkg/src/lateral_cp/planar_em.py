r"""Per-mode electromagnetics of a vacuum / dielectric half-space.

Everything here works on a single plane-wave mode labelled by the parallel
wavevector :math:`\mathbf{k}_\parallel = k_\parallel(\cos\phi, \sin\phi, 0)`
at angular frequency :math:`\omega`. Functions accept scalars or numpy arrays
and broadcast; tensors come back with the Cartesian indices as the two
trailing axes.

Conventions
-----------
* Perpendicular wavenumbers use the branch with ``Im >= 0`` (and ``Re >= 0``
  when the imaginary part vanishes), so ``exp(2i kz z)`` decays for
  evanescent modes.
* A perfect conductor is a flag, not a large permittivity: ``r_p = +1`` and
  ``r_s = -1`` exactly.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT

__all__ = [
    "Material",
    "ModeCoordinates",
    "BranchPointError",
    "kz",
    "fresnel_rs",
    "fresnel_rp",
    "polarization_vectors",
    "green_mode",
    "green_mode_dx",
    "BRANCH_POINT_WINDOW",
]

#: relative half-width around k_par = omega/c where mode tensors are refused
BRANCH_POINT_WINDOW = 1e-12


class BranchPointError(ValueError):
    """A mode tensor was requested at the vacuum branch point."""


@dataclass(frozen=True)
class Material:
    """Half-space material at the transition frequency.

    ``epsilon`` is the complex relative permittivity; it is ignored when
    ``is_perfect_conductor`` is set.
    """

    name: str
    epsilon: complex = 1.0 + 0.0j
    is_perfect_conductor: bool = False

    def __post_init__(self):
        object.__setattr__(self, "epsilon", complex(self.epsilon))
        if not self.is_perfect_conductor and self.epsilon.imag < 0.0:
            raise ValueError(
                f"{self.name}: Im(epsilon) must be >= 0 for a passive medium, "
                f"got {self.epsilon}"
            )

    @property
    def is_vacuum(self) -> bool:
        return not self.is_perfect_conductor and self.epsilon == 1.0

    @property
    def is_lossless(self) -> bool:
        return not self.is_perfect_conductor and self.epsilon.imag == 0.0


def kz(k_par, omega, epsilon=1.0):
    r"""Perpendicular wavenumber :math:`\sqrt{\epsilon\omega^2/c^2 - k_\parallel^2}`.

    In vacuum the radicand is assembled as :math:`(k_0-k)(k_0+k)`, which keeps
    full relative accuracy close to the branch point.

    Parameters
    ----------
    k_par : float or ndarray
        Parallel wavenumber [1/m], non-negative.
    omega : float
        Angular frequency [rad/s], positive.
    epsilon : complex
        Relative permittivity. ``1`` gives the vacuum value.

    Returns
    -------
    complex or ndarray
        Root with ``Im >= 0``; ``Re >= 0`` when ``Im == 0``.
    """
    k0 = omega / SPEED_OF_LIGHT
    k = np.asarray(k_par, dtype=float)
    eps = complex(epsilon)
    if eps == 1.0:
        radicand = (k0 - k) * (k0 + k) + 0j
    else:
        radicand = eps * k0 * k0 - k * k
    root = np.sqrt(radicand)
    # numpy returns -i*sqrt(|x|) for negative reals carrying a -0.0 imaginary part
    flip = (root.imag < 0.0) | ((root.imag == 0.0) & (root.real < 0.0))
    root = np.where(flip, -root, root)
    return root[()] if root.ndim == 0 else root


@dataclass(frozen=True)
class ModeCoordinates:
    """One plane-wave mode (or a broadcastable array of modes).

    Build it with :meth:`from_k` unless the perpendicular wavenumbers are
    already known exactly (as inside the quadrature substitutions).
    """

    k_par: np.ndarray | float
    phi: np.ndarray | float
    omega: float
    kz_vac: np.ndarray | complex
    kz_med: np.ndarray | complex

    @classmethod
    def from_k(cls, k_par, phi, omega, epsilon=1.0):
        return cls(
            k_par=k_par,
            phi=phi,
            omega=omega,
            kz_vac=kz(k_par, omega, 1.0),
            kz_med=kz(k_par, omega, epsilon),
        )

    @property
    def k0(self) -> float:
        return self.omega / SPEED_OF_LIGHT


def _check_denominator(den):
    if np.any(den == 0):
        raise ZeroDivisionError("Fresnel denominator vanishes (both kz are zero)")


def fresnel_rs(mode: ModeCoordinates, mat: Material):
    """s-polarised (TE) reflection coefficient ``(kz - kz_m)/(kz + kz_m)``."""
    if mat.is_perfect_conductor:
        return np.full(np.shape(mode.kz_vac), -1.0 + 0j)[()]
    den = mode.kz_vac + mode.kz_med
    _check_denominator(den)
    return (mode.kz_vac - mode.kz_med) / den


def fresnel_rp(mode: ModeCoordinates, mat: Material):
    """p-polarised (TM) reflection coefficient ``(eps kz - kz_m)/(eps kz + kz_m)``."""
    if mat.is_perfect_conductor:
        return np.full(np.shape(mode.kz_vac), 1.0 + 0j)[()]
    eps = mat.epsilon
    den = eps * mode.kz_vac + mode.kz_med
    _check_denominator(den)
    return (eps * mode.kz_vac - mode.kz_med) / den


def polarization_vectors(mode: ModeCoordinates, sign: int):
    r"""Polarisation vectors :math:`\mathbf{e}_{s\pm}` and :math:`\mathbf{e}_{p\pm}`.

    ``sign = +1`` selects the upward (+) vectors, ``-1`` the downward ones.
    ``e_p`` is normalised with the bilinear (unconjugated) product, so it is
    not a unit vector for evanescent modes.

    Returns
    -------
    e_s, e_p : ndarray, shape (..., 3)
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    phi = np.asarray(mode.phi, dtype=float)
    k_par = np.asarray(mode.k_par, dtype=float)
    kzv = np.asarray(mode.kz_vac, dtype=complex)
    phi, k_par, kzv = np.broadcast_arrays(phi, k_par, kzv)
    cphi, sphi = np.cos(phi), np.sin(phi)
    e_s = np.stack([sphi, -cphi, np.zeros_like(phi)], axis=-1).astype(complex)
    inv_k0 = 1.0 / mode.k0
    e_p = inv_k0 * np.stack(
        [-sign * kzv * cphi, -sign * kzv * sphi, k_par + 0j], axis=-1
    )
    return e_s, e_p


def green_mode(z_A, mode: ModeCoordinates, mat: Material):
    r"""Scattering Green tensor density of one mode at coincidence.

    .. math::

        \frac{i}{8\pi^2 k_\perp} e^{2ik_\perp z_A}
        \sum_{\sigma=s,p} r_\sigma\, \mathbf{e}_{\sigma+}\mathbf{e}_{\sigma-}

    Integrating with :math:`\int_0^{2\pi}d\phi\int_0^\infty dk_\parallel\,k_\parallel`
    gives the scattering Green tensor at ``r = r' = (0, 0, z_A)``.

    Raises
    ------
    BranchPointError
        If any ``k_par`` lies within ``BRANCH_POINT_WINDOW`` (relative) of
        ``omega/c``.
    """
    if not np.all(np.asarray(z_A) > 0):
        raise ValueError("z_A must be positive")
    k_par = np.asarray(mode.k_par, dtype=float)
    if np.any(np.abs(k_par - mode.k0) <= BRANCH_POINT_WINDOW * mode.k0):
        raise BranchPointError("mode tensor requested at the vacuum branch point")
    if mat.is_vacuum:
        shape = np.broadcast_shapes(np.shape(mode.k_par), np.shape(mode.phi))
        return np.zeros(shape + (3, 3), dtype=complex)
    rs = np.asarray(fresnel_rs(mode, mat))
    rp = np.asarray(fresnel_rp(mode, mat))
    es_p, ep_p = polarization_vectors(mode, +1)
    es_m, ep_m = polarization_vectors(mode, -1)
    outer_s = es_p[..., :, None] * es_m[..., None, :]
    outer_p = ep_p[..., :, None] * ep_m[..., None, :]
    kzv = np.asarray(mode.kz_vac, dtype=complex)
    pref = 1j / (8.0 * np.pi**2 * kzv) * np.exp(2j * kzv * z_A)
    tensor = rs[..., None, None] * outer_s + rp[..., None, None] * outer_p
    return pref[..., None, None] * tensor


def green_mode_dx(z_A, mode: ModeCoordinates, mat: Material):
    r"""x-derivative (first argument) of :func:`green_mode` at coincidence.

    The plane-wave factor :math:`e^{i\mathbf{k}_\parallel\cdot(\mathbf{r}-\mathbf{r}')}`
    contributes :math:`i k_\parallel\cos\phi`.
    """
    factor = 1j * np.asarray(mode.k_par) * np.cos(mode.phi)
    return np.asarray(factor)[..., None, None] * green_mode(z_A, mode, mat)
