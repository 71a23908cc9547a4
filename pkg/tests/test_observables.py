import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.constants import c, epsilon_0, hbar
from scipy.optimize import brentq

from lateral_cp import observables as obs
from lateral_cp.observables import (
    CS133_MASS,
    EmitterConfig,
    NegativeDecayRate,
    force_curl_pc,
    free_space_rate,
    lateral_force,
    lateral_force_general,
    lateral_force_near,
    lateral_force_pc,
    lateral_force_retarded,
    populations,
    recoil_velocity,
    retarded_envelope,
    surface_rate,
    total_rate,
)
from lateral_cp.planar_em import Material
from lateral_cp.sweeps import find_landmarks

LAM = 852e-9
D = 1.9e-29
OMEGA = 2 * math.pi * c / LAM
K0 = OMEGA / c


def image_dipole_rate(z, lam=LAM, d=D):
    """Surface rate above a perfect mirror from the image dipole at distance 2z.

    A parallel dipole has an inverted image, a perpendicular one an upright
    image; the reflected field at the atom is the free-space dipole field of
    the image.
    """
    k = 2 * math.pi / lam
    omega = k * c
    R = 2 * z
    g = np.exp(1j * k * R) / (4 * math.pi * R)
    kr = k * R
    transverse = g * (1 + 1j / kr - 1 / kr**2)
    longitudinal = g * (2 / kr**2 - 2j / kr)
    G = np.diag([-transverse, -transverse, longitudinal])
    dv = d * np.array([1j, 0, 1])
    mu0 = 1 / (epsilon_0 * c**2)
    return 2 * mu0 * omega**2 / hbar * (dv @ G @ dv.conj()).imag


# --- rates --------------------------------------------------------------------

def test_free_space_rate_scales():
    cfg = EmitterConfig(LAM)
    g0 = free_space_rate(cfg)
    assert 1e7 < g0 < 1e8
    assert free_space_rate(EmitterConfig(LAM, dipole_magnitude=0.0)) == 0.0
    assert free_space_rate(EmitterConfig(LAM, dipole_magnitude=2 * D)) == pytest.approx(4 * g0, rel=1e-15)


def test_free_space_rate_value():
    expected = OMEGA**3 * 2 * D**2 / (3 * math.pi * epsilon_0 * hbar * c**3)
    assert free_space_rate(EmitterConfig(LAM)) == pytest.approx(expected, rel=1e-14)


def test_surface_rate_vacuum(vacuum):
    assert surface_rate(EmitterConfig(LAM / 4), vacuum) == 0.0


@pytest.mark.parametrize("name", ["gold", "silica", "pc"])
def test_surface_rate_far_field(name):
    from lateral_cp.materials import get_material

    cfg = EmitterConfig(50 * LAM)
    assert abs(surface_rate(cfg, get_material(name))) < 1e-3 * free_space_rate(cfg)


def test_surface_rate_pc_image_dipole(pc):
    for z in np.geomspace(LAM / 20, 5 * LAM, 25):
        assert surface_rate(EmitterConfig(z), pc) == pytest.approx(image_dipole_rate(z), rel=1e-6)


def test_image_dipole_oracle_limits():
    # next to the mirror the parallel half is quenched and the perpendicular
    # half doubles, so the circular dipole sees no net change
    g0 = free_space_rate(EmitterConfig(LAM))
    assert abs(image_dipole_rate(1e-4 * LAM)) < 1e-3 * g0
    assert abs(image_dipole_rate(1e3 * LAM)) < 1e-3 * g0


def test_total_rate_modes(gold):
    cfg = EmitterConfig(LAM / 5)
    assert total_rate(cfg, gold, gamma_mode="free-space") == free_space_rate(cfg)
    assert total_rate(cfg, gold) == pytest.approx(free_space_rate(cfg) + surface_rate(cfg, gold), rel=1e-15)
    with pytest.raises(ValueError):
        total_rate(cfg, gold, gamma_mode="bogus")


def test_negative_total_rate_guard(gold, monkeypatch):
    cfg = EmitterConfig(LAM / 5)
    monkeypatch.setattr(obs, "surface_rate", lambda *a, **k: -2 * free_space_rate(cfg))
    with pytest.raises(NegativeDecayRate):
        total_rate(cfg, gold)
    with pytest.raises(NegativeDecayRate):
        lateral_force(cfg, gold, t=1e-9)


# --- populations --------------------------------------------------------------

def test_populations_initial():
    p = populations(0.0, 3e7)
    assert (p.p0, p.p1) == (0.0, 1.0)


def test_populations_long_time():
    p = populations(1e-3, 3e7)
    assert p.p0 == 1.0 and p.p1 == 0.0


def test_populations_half_life():
    gamma = 3.3e7
    assert populations(math.log(2) / gamma, gamma).p1 == pytest.approx(0.5, rel=1e-15)


def test_populations_reject_negative():
    with pytest.raises(ValueError):
        populations(-1.0, 1.0)


@settings(max_examples=200)
@given(t=st.floats(0, 1e-5), gamma=st.floats(0, 1e9))
def test_populations_sum_to_one(t, gamma):
    p = populations(t, gamma)
    assert p.p0 + p.p1 == pytest.approx(1.0, abs=1e-16)
    assert 0 <= p.p1 <= 1 and 0 <= p.p0 <= 1


# --- lateral force ------------------------------------------------------------

def test_force_vacuum(vacuum):
    assert lateral_force(EmitterConfig(LAM / 4), vacuum).value == 0.0


def test_force_pc_quarter_wavelength(pc):
    s = lateral_force(EmitterConfig(LAM / 4), pc)
    assert s.regime == "full"
    assert s.value == pytest.approx(-48 * D**2 / (epsilon_0 * LAM**4), rel=1e-6)
    assert s.value == pytest.approx(-3.7e-21, rel=0.01)
    assert 0 < s.error_estimate < 1e-8 * abs(s.value)


def test_force_landmarks_gold(gold):
    lm = find_landmarks(lambda z: lateral_force(EmitterConfig(z), gold).value, 100e-9, 1000e-9, 181)
    assert any(abs(z - 302e-9) < 10e-9 for z in lm.zeros)
    assert any(abs(z - 396e-9) < 15e-9 for z in lm.maxima)
    assert any(abs(z - 635e-9) < 20e-9 for z in lm.minima)


def test_force_general_matches_scalar_path(gold, silica, pc):
    for mat in (gold, silica, pc):
        for z in (LAM / 20, LAM / 3, 1.7 * LAM):
            cfg = EmitterConfig(z)
            general = lateral_force_general([(cfg.dipole, cfg.omega, 1.0)], mat, z)
            assert general.regime == "general"
            assert general.value == pytest.approx(lateral_force(cfg, mat).value, rel=1e-10)


def test_force_general_real_dipole_null(gold):
    z = LAM / 6
    ref = abs(lateral_force(EmitterConfig(z), gold).value)
    for d in ([1, 0, 1], [0.3, -0.7, 2.0], [0, 0, 1]):
        f = lateral_force_general([(D * np.array(d, float), OMEGA, 1.0)], gold, z)
        assert abs(f.value) < 1e-9 * ref


def test_force_general_empty_populations(gold):
    cfg = EmitterConfig(LAM / 4)
    assert lateral_force_general([(cfg.dipole, OMEGA, 0.0)], gold, LAM / 4).value == 0.0
    assert lateral_force_general([], gold, LAM / 4).value == 0.0


def test_force_general_validates(gold):
    with pytest.raises(ValueError):
        lateral_force_general([((1, 0, 0), -1.0, 1.0)], gold, LAM)
    with pytest.raises(ValueError):
        lateral_force_general([((1, 0, 0), OMEGA, 1.5)], gold, LAM)


def test_force_general_population_weighting(gold):
    cfg = EmitterConfig(LAM / 4)
    half = lateral_force_general([(cfg.dipole, OMEGA, 0.25), (cfg.dipole, OMEGA, 0.25)], gold, LAM / 4)
    assert half.value == pytest.approx(0.5 * lateral_force(cfg, gold).value, rel=1e-10)


@pytest.mark.parametrize("t", [1e-9, 3.7e-8, 2e-7])
@pytest.mark.parametrize("mode", ["total", "free-space"])
def test_time_factorisation_exact(gold, t, mode):
    cfg = EmitterConfig(LAM / 3)
    f0 = lateral_force(cfg, gold).value
    ft = lateral_force(cfg, gold, t=t, gamma_mode=mode).value
    assert ft == f0 * math.exp(-total_rate(cfg, gold, gamma_mode=mode) * t)


@settings(max_examples=25, deadline=None)
@given(x=st.floats(0.02, 3.0))
def test_handedness_antisymmetry(x):
    from lateral_cp.materials import get_material

    for name in ("gold", "silica", "pc"):
        cfg = EmitterConfig(x * LAM)
        mat = get_material(name)
        plus = lateral_force(cfg, mat).value
        minus = lateral_force(cfg.flipped(), mat).value
        assert minus == -plus


def test_sigma_minus_conjugates_dipole():
    cfg = EmitterConfig(LAM, handedness="sigma-")
    np.testing.assert_array_equal(cfg.dipole, D * np.array([-1j, 0, 1]))
    assert cfg.chirality == -D**2
    assert EmitterConfig(LAM).chirality == D**2


@pytest.mark.parametrize("name", ["gold", "silica"])
def test_near_field_sign_rule(name):
    from lateral_cp.materials import get_material

    mat = get_material(name)
    for z in np.geomspace(LAM / 200, LAM / 20, 12):
        assert lateral_force(EmitterConfig(z), mat).value < 0


def test_emitter_validation():
    for kwargs in (dict(z_A=0.0), dict(z_A=1e-7, wavelength=-1.0), dict(z_A=1e-7, handedness="left"),
                   dict(z_A=1e-7, dipole_vector=(1, 0)), dict(z_A=1e-7, dipole_magnitude=-1.0)):
        with pytest.raises(ValueError):
            EmitterConfig(**kwargs)


# --- closed forms -------------------------------------------------------------

def test_pc_closed_form_half_wavelength():
    s = lateral_force_pc(EmitterConfig(LAM / 2))
    assert s.regime == "pc" and s.error_estimate == 0.0
    assert s.value == pytest.approx(6 * D**2 / (epsilon_0 * LAM**4), rel=1e-12)


def test_pc_closed_form_eighth_wavelength():
    z = LAM / 8
    sine_only = D**2 / epsilon_0 * (math.pi / (LAM**2 * z**2) - 3 / (16 * math.pi * z**4))
    assert lateral_force_pc(EmitterConfig(z)).value == pytest.approx(sine_only, rel=1e-12)


@settings(max_examples=30, deadline=None)
@given(x=st.floats(0.05, 3.0))
def test_pc_closed_form_matches_integral(x):
    from lateral_cp.materials import get_material

    cfg = EmitterConfig(x * LAM)
    closed = lateral_force_pc(cfg).value
    full = lateral_force(cfg, get_material("pc")).value
    assert full == pytest.approx(closed, rel=1e-6)


def test_pc_closed_form_time_factor():
    cfg = EmitterConfig(LAM / 3)
    t = 2e-8
    pc = Material("pc", is_perfect_conductor=True)
    assert lateral_force_pc(cfg, t).value == lateral_force_pc(cfg).value * math.exp(-total_rate(cfg, pc) * t)


def test_near_field_gold_prefactor(gold):
    assert abs(gold.epsilon + 1) ** 2 == pytest.approx(7.5825, rel=1e-14)
    z = LAM / 100
    expected = -3 * D**2 / (8 * math.pi * epsilon_0 * z**4) * 1.35 / 7.5825
    assert lateral_force_near(EmitterConfig(z), gold).value == pytest.approx(expected, rel=1e-14)


def test_near_field_lossless_zero():
    assert lateral_force_near(EmitterConfig(LAM / 50), Material("lossless", 2.25)).value == 0.0


def test_near_field_scaling(gold):
    a = lateral_force_near(EmitterConfig(LAM / 40), gold).value
    b = lateral_force_near(EmitterConfig(LAM / 80), gold).value
    assert b == pytest.approx(16 * a, rel=1e-14)


def test_near_field_rejects_pc(pc):
    with pytest.raises(ValueError):
        lateral_force_near(EmitterConfig(LAM / 50), pc)


def test_retarded_vacuum(vacuum):
    assert lateral_force_retarded(EmitterConfig(3 * LAM), vacuum).value == 0.0


def test_retarded_silica_root_spacing(silica):
    f = lambda z: lateral_force_retarded(EmitterConfig(z), silica).value
    lm = find_landmarks(f, 5 * LAM, 7 * LAM, 400)
    gaps = np.diff(lm.zeros)
    assert len(gaps) >= 6
    np.testing.assert_allclose(gaps, LAM / 4, rtol=1e-8)


def test_retarded_gold_ten_wavelengths(gold):
    cfg = EmitterConfig(10 * LAM)
    full = lateral_force(cfg, gold).value
    ret = lateral_force_retarded(cfg, gold).value
    assert abs(full - ret) <= 0.05 * abs(ret)


def test_retarded_envelope_bounds_law(gold):
    for z in np.linspace(5, 6, 9) * LAM:
        cfg = EmitterConfig(z)
        assert abs(lateral_force_retarded(cfg, gold).value) <= retarded_envelope(cfg, gold) * (1 + 1e-12)


def test_lossless_short_distance_limit():
    # the exact integral stays finite as z -> 0 for real epsilon; the evanescent
    # part drops out and only propagating modes inside the medium light cone remain
    from scipy.integrate import quad

    eps = 2.25
    mat = Material("lossless", eps)
    n = math.sqrt(eps)

    def im_rp(k):
        kzv = np.sqrt(complex(K0**2 - k**2))
        kzv = kzv if kzv.imag >= 0 else -kzv
        kzm = math.sqrt(eps * K0**2 - k**2)
        return ((eps * kzv - kzm) / (eps * kzv + kzm)).imag

    val, _ = quad(lambda k: k**3 * im_rp(k), K0, n * K0, epsabs=0, epsrel=1e-12, limit=200)
    limit = -D**2 * val / (2 * math.pi * epsilon_0)
    f = lateral_force(EmitterConfig(LAM / 2000), mat).value
    assert limit < 0
    assert f == pytest.approx(limit, rel=1e-3)


# --- curl and velocity ----------------------------------------------------------

def test_curl_matches_finite_difference():
    for z in np.geomspace(LAM / 20, 3 * LAM, 50):
        h = z * 1e-6
        fd = (lateral_force_pc(EmitterConfig(z + h)).value - lateral_force_pc(EmitterConfig(z - h)).value) / (2 * h)
        assert force_curl_pc(EmitterConfig(z)) == pytest.approx(fd, rel=1e-5)


def test_curl_nonzero_generic():
    assert abs(force_curl_pc(EmitterConfig(0.37 * LAM))) > 0


def test_curl_term_scaling():
    # at z = lambda/4 and lambda/2 the sine vanishes; the cosine terms scale as z^-2 and z^-4
    z = LAM / 4
    expected = D**2 / epsilon_0 * (4 * math.pi**2 / (LAM**3 * z**2) - 3 / (LAM * z**4)) * math.cos(math.pi)
    assert force_curl_pc(EmitterConfig(z)) == pytest.approx(expected, rel=1e-12)


def test_velocity_mass_scaling(gold):
    cfg = EmitterConfig(190e-9)
    v = recoil_velocity(cfg, gold)
    v2 = recoil_velocity(EmitterConfig(190e-9, mass=2 * CS133_MASS), gold)
    assert v2 == pytest.approx(v / 2, rel=1e-15)


def test_velocity_definition(gold):
    cfg = EmitterConfig(190e-9)
    expected = lateral_force(cfg, gold).value / (CS133_MASS * total_rate(cfg, gold))
    assert recoil_velocity(cfg, gold) == expected


def test_velocity_vanishes_at_force_zero(gold):
    z0 = brentq(lambda z: lateral_force(EmitterConfig(z), gold).value, 290e-9, 315e-9, xtol=1e-16)
    v = recoil_velocity(EmitterConfig(z0), gold)
    v_ref = abs(recoil_velocity(EmitterConfig(396e-9), gold))
    assert abs(v) < 1e-7 * v_ref


def test_velocity_near_field_mm_per_s(gold):
    v = recoil_velocity(EmitterConfig(LAM / 20), gold)
    assert 1e-4 < abs(v) < 1e-1


def test_cs_mass():
    assert CS133_MASS == pytest.approx(2.2069e-25, rel=1e-4)
