"""Tabular datasets for distance sweeps, polar spectra and asymptotic checks.

These are the functions behind the command line; they return :class:`Dataset`
objects that serialise to CSV (17 significant digits) or JSON.
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from . import __version__
from .materials import get_material, registry_hash
from .observables import (
    EmitterConfig,
    force_curl_pc,
    lateral_force,
    lateral_force_near,
    lateral_force_pc,
    lateral_force_retarded,
    recoil_velocity,
    retarded_envelope,
    surface_rate,
)
from .planar_em import Material
from .quadrature import NonConvergence, QuadratureConfig
from .spectrum import spectrum_coefficients

__all__ = [
    "QUANTITIES",
    "PRESETS",
    "InvalidRange",
    "SweepSpec",
    "Dataset",
    "run_sweep",
    "run_spectrum",
    "compare_asymptotics",
    "preset",
    "find_landmarks",
]

QUANTITIES = (
    "force", "force-pc", "force-near", "force-retarded", "rate",
    "velocity", "spectrum", "coefficients", "asymmetry", "curl",
)

BASE_COLUMNS = ("z_A_nm", "value_SI", "error_estimate", "regime", "nonconverged")
EXTRA_COLUMNS = {
    "velocity": ("value_mm_s",),
    "spectrum": ("gamma_bar_pi",),
    "coefficients": ("A", "B", "C", "D"),
}
SPECTRUM_COLUMNS = ("phi_rad", "gamma_bar_raw", "gamma_bar_normalized")
ASYMPTOTIC_COLUMNS = ("z_A_nm", "F_full", "F_near", "F_retarded", "rel_dev_near", "rel_dev_ret")


class InvalidRange(ValueError):
    pass


@dataclass(frozen=True)
class SweepSpec:
    """One distance sweep. Distances are in metres here; the CLI takes nm."""

    quantity: str
    material: str
    z_min: float
    z_max: float
    n_points: int = 500
    scale: str = "linear"
    t: float = 0.0
    gamma_mode: str = "total"
    tolerances: QuadratureConfig = field(default_factory=QuadratureConfig)

    def __post_init__(self):
        if self.quantity not in QUANTITIES:
            raise InvalidRange(f"unknown quantity {self.quantity!r}")
        if not self.z_min > 0 or not self.z_max > self.z_min:
            raise InvalidRange(f"need 0 < z_min < z_max, got {self.z_min}, {self.z_max}")
        if self.n_points < 2:
            raise InvalidRange("n_points must be at least 2")
        if self.scale not in ("linear", "log"):
            raise InvalidRange("scale must be 'linear' or 'log'")
        if self.t < 0:
            raise InvalidRange("t must be non-negative")
        if self.gamma_mode not in ("total", "free-space"):
            raise InvalidRange("gamma_mode must be 'total' or 'free-space'")

    def grid(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.z_min, self.z_max, self.n_points)
        return np.linspace(self.z_min, self.z_max, self.n_points)


@dataclass
class Dataset:
    columns: tuple
    rows: list
    metadata: dict = field(default_factory=dict)

    @property
    def any_nonconverged(self) -> bool:
        if "nonconverged" not in self.columns:
            return False
        i = self.columns.index("nonconverged")
        return any(row[i] for row in self.rows)

    def column(self, name) -> np.ndarray:
        i = self.columns.index(name)
        return np.array([row[i] for row in self.rows])

    def to_csv(self) -> str:
        buf = io.StringIO()
        for key, value in self.metadata.items():
            buf.write(f"# {key}: {_fmt(value) if isinstance(value, float) else json.dumps(value)}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_fmt(v) if isinstance(v, float) else v for v in row])
        return buf.getvalue()

    def to_json(self) -> str:
        def clean(v):
            if isinstance(v, float) and not math.isfinite(v):
                return None
            return v

        payload = {
            "metadata": self.metadata,
            "columns": list(self.columns),
            "rows": [[clean(v) for v in row] for row in self.rows],
        }
        return json.dumps(payload, indent=1)

    def write(self, path, fmt="csv"):
        text = self.to_json() if fmt == "json" else self.to_csv()
        with open(path, "w") as fh:
            fh.write(text)


def _fmt(x: float) -> str:
    return format(x, ".17g")


def _metadata(**extra) -> dict:
    meta = {"version": __version__, "registry_sha256": registry_hash()}
    meta.update(extra)
    return meta


def _sweep_row(spec: SweepSpec, mat: Material, z: float) -> tuple:
    cfg = EmitterConfig(z_A=float(z))
    q, qc = spec.quantity, spec.tolerances
    extras: tuple = ()
    err = 0.0
    if q == "force":
        s = lateral_force(cfg, mat, spec.t, qc, spec.gamma_mode)
        value, err, regime = s.value, s.error_estimate, s.regime
    elif q == "force-pc":
        value, regime = lateral_force_pc(cfg, spec.t, qc, spec.gamma_mode).value, "pc"
    elif q == "force-near":
        value, regime = lateral_force_near(cfg, mat, spec.t, qc, spec.gamma_mode).value, "near"
    elif q == "force-retarded":
        value, regime = lateral_force_retarded(cfg, mat, spec.t, qc, spec.gamma_mode).value, "retarded"
    elif q == "rate":
        value, regime = surface_rate(cfg, mat, qc), "full"
    elif q == "velocity":
        value, regime = recoil_velocity(cfg, mat, qc, spec.gamma_mode), "full"
        extras = (value * 1e3,)
    elif q == "curl":
        value, regime = force_curl_pc(cfg), "pc"
    else:
        co = spectrum_coefficients(cfg, mat, qc)
        regime = "full"
        if q == "asymmetry":
            value, err = 4.0 * co.B, 4.0 * co.errors[1]
        elif q == "coefficients":
            value, err = co.B, co.errors[1]
            extras = (co.A, co.B, co.C, co.D)
        else:
            value, err = float(co(0.0)), sum(co.errors)
            extras = (float(co(np.pi)),)
    return (float(z) * 1e9, float(value), float(err), regime, 0) + tuple(float(e) for e in extras)


def _guarded_row(spec: SweepSpec, mat: Material, z: float) -> tuple:
    try:
        return _sweep_row(spec, mat, z)
    except NonConvergence:
        n_extra = len(EXTRA_COLUMNS.get(spec.quantity, ()))
        return (float(z) * 1e9, math.nan, math.nan, "full", 1) + (math.nan,) * n_extra


def _check_material_for(quantity: str, mat: Material):
    if quantity == "force-near" and mat.is_perfect_conductor:
        raise InvalidRange("the near-field law needs a finite permittivity, not a perfect conductor")
    if quantity == "curl" and not mat.is_perfect_conductor:
        raise InvalidRange("the closed-form curl is only available for a perfect conductor")


def run_sweep(spec: SweepSpec, workers: int = 1) -> Dataset:
    """Evaluate ``spec.quantity`` on the distance grid.

    Rows that fail to converge carry NaN values and ``nonconverged = 1``;
    row order always follows the grid.
    """
    mat = get_material(spec.material)
    _check_material_for(spec.quantity, mat)
    zs = spec.grid()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_guarded_row, [spec] * len(zs), [mat] * len(zs), zs))
    else:
        rows = [_guarded_row(spec, mat, z) for z in zs]
    meta = _metadata(
        quantity=spec.quantity,
        material=spec.material,
        epsilon=[mat.epsilon.real, mat.epsilon.imag],
        perfect_conductor=mat.is_perfect_conductor,
        t_s=spec.t,
        gamma_mode=spec.gamma_mode,
        tolerances=asdict(spec.tolerances),
    )
    return Dataset(BASE_COLUMNS + EXTRA_COLUMNS.get(spec.quantity, ()), rows, meta)


def run_spectrum(material: str, z_A: float, n_phi: int = 720, tolerances: QuadratureConfig | None = None) -> Dataset:
    """Polar emission spectrum on a uniform azimuth grid of ``n_phi`` points.

    ``gamma_bar_normalized`` divides by the largest magnitude on the grid.
    """
    if n_phi < 2:
        raise InvalidRange("n_phi must be at least 2")
    if not z_A > 0:
        raise InvalidRange("z_A must be positive")
    tolerances = tolerances or QuadratureConfig()
    mat = get_material(material)
    co = spectrum_coefficients(EmitterConfig(z_A=z_A), mat, tolerances)
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    raw = co(phi)
    peak = float(np.max(np.abs(raw)))
    norm = raw / peak if peak > 0 else np.zeros_like(raw)
    rows = [(float(p), float(r), float(n)) for p, r, n in zip(phi, raw, norm)]
    meta = _metadata(
        material=material,
        z_A_nm=z_A * 1e9,
        A=co.A, B=co.B, C=co.C, D=co.D,
        asymmetry_4B=4.0 * co.B,
        tolerances=asdict(tolerances),
    )
    return Dataset(SPECTRUM_COLUMNS, rows, meta)


def compare_asymptotics(material: str, z_list: Sequence[float], tolerances: QuadratureConfig | None = None) -> Dataset:
    """Full integral against the near-field and retarded closed forms.

    ``rel_dev_near`` is relative to the near-field value. The retarded law
    oscillates through zero, so ``rel_dev_ret`` is taken relative to its
    amplitude ``chi pi |r_p(0)| / (eps0 lambda^2 z^2)``.
    """
    tolerances = tolerances or QuadratureConfig()
    mat = get_material(material)
    if mat.is_perfect_conductor:
        raise InvalidRange("the near-field law needs a finite permittivity, not a perfect conductor")
    rows = []
    for z in z_list:
        if not z > 0:
            raise InvalidRange("distances must be positive")
        cfg = EmitterConfig(z_A=float(z))
        full = lateral_force(cfg, mat, 0.0, tolerances).value
        near = lateral_force_near(cfg, mat).value
        ret = lateral_force_retarded(cfg, mat).value
        rows.append((
            float(z) * 1e9, full, near, ret,
            abs(full - near) / abs(near) if near != 0 else math.inf,
            abs(full - ret) / retarded_envelope(cfg, mat),
        ))
    return Dataset(ASYMPTOTIC_COLUMNS, rows, _metadata(material=material, tolerances=asdict(tolerances)))


@dataclass(frozen=True)
class Landmarks:
    """Sign changes and local extrema of a curve, positions in metres."""

    zeros: tuple
    maxima: tuple
    minima: tuple


def find_landmarks(func, z_min: float, z_max: float, n_points: int = 200) -> Landmarks:
    """Locate zero crossings and interior extrema of ``func`` on ``[z_min, z_max]``.

    The curve is scanned on a uniform grid; each bracket found there is
    refined with Brent's method (zeros) or a bounded scalar minimisation
    (extrema), so features narrower than the grid spacing may be missed.
    """
    zs = np.linspace(z_min, z_max, n_points)
    fs = np.array([func(z) for z in zs])
    zeros, maxima, minima = [], [], []
    for i in range(n_points - 1):
        if fs[i] == 0.0:
            zeros.append(float(zs[i]))
        elif fs[i] * fs[i + 1] < 0.0:
            zeros.append(brentq(func, zs[i], zs[i + 1], xtol=1e-15, rtol=1e-12))
    for i in range(1, n_points - 1):
        lo, hi = zs[i - 1], zs[i + 1]
        if fs[i] > fs[i - 1] and fs[i] >= fs[i + 1]:
            res = minimize_scalar(lambda z: -func(z), bounds=(lo, hi), method="bounded", options={"xatol": 1e-13})
            maxima.append(float(res.x))
        elif fs[i] < fs[i - 1] and fs[i] <= fs[i + 1]:
            res = minimize_scalar(func, bounds=(lo, hi), method="bounded", options={"xatol": 1e-13})
            minima.append(float(res.x))
    return Landmarks(tuple(zeros), tuple(maxima), tuple(minima))


PRESETS = {
    "fig2": ("sweep", dict(quantity="force-pc", material="pc", z_min=100e-9, z_max=2500e-9, n_points=500)),
    "fig3-silica": ("sweep", dict(quantity="force", material="silica", z_min=100e-9, z_max=1000e-9, n_points=500)),
    "fig3-gold": ("sweep", dict(quantity="force", material="gold", z_min=100e-9, z_max=1000e-9, n_points=500)),
    "fig4": ("spectrum", dict(material="gold", z_A=264e-9, n_phi=720)),
    "fig5": ("spectrum", dict(material="gold", z_A=302e-9, n_phi=720)),
}


def preset(name: str, workers: int = 1, tolerances: QuadratureConfig | None = None) -> Dataset:
    """Dataset for one of the figure presets in :data:`PRESETS`."""
    try:
        kind, params = PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; known: {', '.join(PRESETS)}") from None
    tolerances = tolerances or QuadratureConfig()
    if kind == "sweep":
        return run_sweep(SweepSpec(tolerances=tolerances, **params), workers=workers)
    return run_spectrum(tolerances=tolerances, **params)
