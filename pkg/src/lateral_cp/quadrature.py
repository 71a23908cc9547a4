r"""Adaptive quadrature for half-line wavevector integrals.

The integrals handled here have the generic shape

.. math::

    \int_0^\infty \mathrm{d}k_\parallel\, f(k_\parallel)

where :math:`f` oscillates like :math:`e^{2ik_\perp z}` for
:math:`k_\parallel < \omega/c`, decays like :math:`e^{-2\kappa z}` beyond, and
may carry an integrable :math:`1/k_\perp` factor at the vacuum branch point.

The range is split at the branch point. The propagating sector is mapped by
:math:`k_\parallel = (\omega/c)\sin\theta` and the evanescent sector by
:math:`\kappa = \sqrt{k_\parallel^2 - \omega^2/c^2}`; both maps cancel the
:math:`1/k_\perp` factor. Each sector is integrated with a globally adaptive
Gauss-Kronrod (10, 21) rule.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT

__all__ = [
    "QuadratureConfig",
    "QuadratureResult",
    "NonConvergence",
    "InvalidDomain",
    "adaptive_gk21",
    "integrate_spectrum",
    "integrate_azimuth",
]


class NonConvergence(RuntimeError):
    """Raised when the requested tolerance is not reached within the budget."""


class InvalidDomain(ValueError):
    """Raised for integration requests outside the supported domain."""


# Gauss-Kronrod (10, 21) abscissae and weights, positive half (QUADPACK qk21).
_XGK = np.array([
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208980221335,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
_WG = np.array([
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])

# full 21-point node set on [-1, 1], ordered left to right
NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(21)
GAUSS_WEIGHTS[1:10:2] = _WG
GAUSS_WEIGHTS[11:20:2] = _WG[::-1]

# summation roundoff floor relative to the integral of |f|
_ROUNDOFF = 50.0 * np.finfo(float).eps


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and budgets for :func:`integrate_spectrum`.

    ``tail_exponent_cutoff`` is the exponent Λ at which the evanescent sector
    is truncated, ``κ_max = Λ / (2 z_A)``.
    """

    rel_tol: float = 1e-9
    abs_tol: float = 0.0
    max_subdivisions: int = 5000
    tail_exponent_cutoff: float = 40.0
    max_evaluations: int = 10**7

    def __post_init__(self):
        if not 0.0 < self.rel_tol <= 1e-3:
            raise ValueError(f"rel_tol must lie in (0, 1e-3], got {self.rel_tol}")
        if self.abs_tol < 0.0:
            raise ValueError("abs_tol must be non-negative")
        if self.tail_exponent_cutoff < 20.0:
            raise ValueError("tail_exponent_cutoff must be >= 20")
        if self.max_subdivisions < 1 or self.max_evaluations < 21:
            raise ValueError("quadrature budgets must be positive")


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    abs_error_estimate: float
    n_evaluations: int
    truncation_k: float = float("nan")


def _gk21(f, a, b):
    """Apply the 21-point rule on each interval of the arrays ``a``, ``b``.

    Returns Kronrod estimates, |K - G| error estimates and the integral of |f|,
    each with the interval as leading axis. Error and |f| integrals are
    reduced to the largest component for vector-valued integrands.
    """
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    x = mid[:, None] + half[:, None] * NODES[None, :]
    y = np.asarray(f(x.ravel()), dtype=complex)
    y = y.reshape(x.shape + y.shape[1:])
    h = half.reshape((-1,) + (1,) * (y.ndim - 2))
    kron = h * np.tensordot(y, KRONROD_WEIGHTS, axes=([1], [0]))
    gauss = h * np.tensordot(y, GAUSS_WEIGHTS, axes=([1], [0]))
    resabs = np.abs(h) * np.tensordot(np.abs(y), KRONROD_WEIGHTS, axes=([1], [0]))
    if not np.all(np.isfinite(kron)):
        raise NonConvergence("integrand returned non-finite values")
    err = np.abs(kron - gauss)
    if kron.ndim > 1:
        err = err.reshape(len(a), -1).max(axis=1)
        resabs = resabs.reshape(len(a), -1).max(axis=1)
    return kron, err, resabs


def adaptive_gk21(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    rel_tol: float = 1e-9,
    abs_tol: float = 0.0,
    max_subdivisions: int = 5000,
    breakpoints: Sequence[float] = (),
    max_evaluations: int = 10**7,
) -> QuadratureResult:
    """Globally adaptive Gauss-Kronrod integration of a complex function.

    ``f`` must be vectorised: it receives a 1-D array of abscissae and returns
    an array whose leading axis matches it. Trailing axes are integrated
    componentwise with a shared subdivision driven by the worst component.
    Intervals with the largest error estimate are bisected first; ties are
    broken by position so the result is deterministic.
    """
    if not b > a:
        if b == a:
            return QuadratureResult(0j, 0.0, 0)
        raise InvalidDomain("adaptive_gk21 expects a < b")
    edges = np.unique(np.clip(np.r_[a, [p for p in breakpoints if a < p < b], b], a, b))
    lo, hi = edges[:-1], edges[1:]
    vals, errs, absvals = _gk21(f, lo, hi)
    neval = 21 * len(lo)

    heap = []
    for i in range(len(lo)):
        heapq.heappush(heap, (-errs[i], lo[i], hi[i], vals[i], absvals[i]))
    total = np.sum(vals, axis=0)
    err = float(np.sum(errs))
    resabs = float(np.sum(absvals))
    n_intervals = len(lo)

    def target():
        return max(abs_tol, rel_tol * float(np.max(np.abs(total))), _ROUNDOFF * resabs)

    while err > target():
        if n_intervals >= max_subdivisions or neval + 42 > max_evaluations:
            raise NonConvergence(
                f"adaptive_gk21: error {err:.3e} above target {target():.3e} "
                f"after {n_intervals} intervals / {neval} evaluations"
            )
        # bisect a batch of the worst intervals together to keep calls vectorised
        batch = [heapq.heappop(heap) for _ in range(min(len(heap), 16))]
        # only split the ones carrying a meaningful share of the error
        keep = []
        worst = -batch[0][0]
        for item in batch:
            if -item[0] >= 0.05 * worst or not keep:
                keep.append(item)
            else:
                heapq.heappush(heap, item)
        left = np.array([it[1] for it in keep])
        right = np.array([it[2] for it in keep])
        midp = 0.5 * (left + right)
        if np.any((midp <= left) | (midp >= right)):
            raise NonConvergence("adaptive_gk21: interval width underflow")
        new_lo = np.concatenate([left, midp])
        new_hi = np.concatenate([midp, right])
        v, e, ab = _gk21(f, new_lo, new_hi)
        neval += 21 * len(new_lo)
        for i in range(len(new_lo)):
            heapq.heappush(heap, (-e[i], new_lo[i], new_hi[i], v[i], ab[i]))
        n_intervals += len(keep)
        # fixed-order re-summation keeps results independent of heap history
        ordered = sorted(heap, key=lambda item: item[1])
        total = sum(item[3] for item in ordered)
        err = float(sum(-item[0] for item in ordered))
        resabs = float(sum(item[4] for item in ordered))

    value = complex(total) if np.ndim(total) == 0 else np.asarray(total)
    return QuadratureResult(value, err, neval)


def _jacobian(y, w):
    y = np.asarray(y)
    return y * w.reshape(w.shape + (1,) * (y.ndim - 1))


def integrate_spectrum(
    f: Callable,
    omega: float,
    z_A: float,
    cfg: QuadratureConfig | None = None,
    *,
    breakpoints: Sequence[float] = (),
    with_kz: bool = False,
) -> QuadratureResult:
    r"""Integrate ``f`` over :math:`k_\parallel \in [0, \infty)`.

    Parameters
    ----------
    f : callable
        Vectorised integrand ``f(k_par)``. With ``with_kz=True`` it is called as
        ``f(k_par, kz_vac)`` with the vacuum perpendicular wavenumber supplied
        exactly from the substitution, which avoids cancellation near the
        branch point.
    omega : float
        Angular frequency [rad/s]; sets the branch point ``omega/c``.
    z_A : float
        Emitter height [m]; sets the evanescent cutoff ``Λ/(2 z_A)``.
    cfg : QuadratureConfig, optional
    breakpoints : sequence of float
        Extra parallel wavenumbers [1/m] where the integrand has kinks (for
        instance the branch point of the medium). Mapped into the relevant
        sector.

    Returns
    -------
    QuadratureResult
        ``abs_error_estimate`` includes a bound on the truncated tail.
    """
    cfg = cfg or QuadratureConfig()
    if not z_A > 0.0:
        raise InvalidDomain(f"z_A must be positive, got {z_A}")
    if not omega > 0.0:
        raise InvalidDomain(f"omega must be positive, got {omega}")
    k0 = omega / SPEED_OF_LIGHT
    kappa_max = cfg.tail_exponent_cutoff / (2.0 * z_A)

    def call(k, kz):
        return f(k, kz) if with_kz else f(k)

    def propagating(theta):
        cos_t = np.cos(theta)
        return _jacobian(call(k0 * np.sin(theta), (k0 * cos_t).astype(complex)), k0 * cos_t)

    def evanescent(kappa):
        k = np.sqrt(k0 * k0 + kappa * kappa)
        return _jacobian(call(k, 1j * kappa), kappa / k)

    theta_bp, kappa_bp = [], []
    for kb in breakpoints:
        if 0.0 < kb < k0:
            theta_bp.append(float(np.arcsin(kb / k0)))
        elif kb > k0:
            kk = float(np.sqrt(kb * kb - k0 * k0))
            if kk < kappa_max:
                kappa_bp.append(kk)

    # the evanescent sector is budgeted first; both share the evaluation cap
    ev = adaptive_gk21(
        evanescent, 0.0, kappa_max, cfg.rel_tol, cfg.abs_tol,
        cfg.max_subdivisions, kappa_bp, cfg.max_evaluations,
    )
    pr = adaptive_gk21(
        propagating, 0.0, 0.5 * np.pi, cfg.rel_tol,
        max(cfg.abs_tol, cfg.rel_tol * float(np.max(np.abs(ev.value)))),
        cfg.max_subdivisions, theta_bp, cfg.max_evaluations - ev.n_evaluations,
    )
    # discarded tail: integrand ~ poly(κ) e^{-2κ z_A}; for polynomial degree
    # p < Λ/2 the tail is below |g(κ_max)| / (2 z_A (1 - p/Λ)) <= |g(κ_max)| / z_A
    tail = float(np.max(np.abs(evanescent(np.array([kappa_max]))))) / z_A
    value = ev.value + pr.value
    err = ev.abs_error_estimate + pr.abs_error_estimate + tail
    return QuadratureResult(
        value,
        err,
        ev.n_evaluations + pr.n_evaluations + 1,
        float(np.sqrt(k0 * k0 + kappa_max * kappa_max)),
    )


def integrate_azimuth(
    g: Callable[[np.ndarray], np.ndarray],
    cfg: QuadratureConfig | None = None,
    n_start: int = 8,
    n_max: int = 4096,
) -> QuadratureResult:
    """Integrate a 2π-periodic function over one period.

    Uses the trapezoidal rule, exact for trigonometric polynomials of degree
    below the number of points, doubling the point count until two successive
    estimates agree. ``g`` takes a 1-D array of angles and returns an array
    whose first axis runs over the angles; trailing axes are integrated
    elementwise and the value is returned as an array in that case.
    """
    cfg = cfg or QuadratureConfig()
    n = n_start
    phi = 2.0 * np.pi * np.arange(n) / n
    vals = np.asarray(g(phi), dtype=complex)
    prev = (2.0 * np.pi / n) * vals.sum(axis=0)
    neval = n
    while True:
        if 2 * n > n_max:
            raise NonConvergence(f"integrate_azimuth: no convergence with {n} points")
        # only the new midpoints need evaluating
        mids = 2.0 * np.pi * (np.arange(n) + 0.5) / n
        vm = np.asarray(g(mids), dtype=complex)
        neval += n
        cur = 0.5 * prev + (np.pi / n) * vm.sum(axis=0)
        n *= 2
        diff = float(np.max(np.abs(cur - prev)))
        scale = float(np.max(np.abs(cur)))
        scale_abs = (np.pi / n) * float(np.max(np.abs(vm).sum(axis=0))) * 2.0
        if diff <= max(cfg.abs_tol, cfg.rel_tol * scale, _ROUNDOFF * scale_abs):
            value = cur if np.ndim(cur) else complex(cur)
            return QuadratureResult(value, diff, neval)
        prev = cur
