"""Lateral Casimir-Polder force on a circularly polarised emitter above a half-space."""

__version__ = "0.1.0"

from .materials import get_material, load_registry
from .observables import (
    EmitterConfig,
    ForceSample,
    Populations,
    force_curl_pc,
    free_space_rate,
    lateral_force,
    lateral_force_general,
    lateral_force_near,
    lateral_force_pc,
    lateral_force_retarded,
    populations,
    recoil_velocity,
    surface_rate,
    total_rate,
)
from .planar_em import Material, ModeCoordinates
from .quadrature import NonConvergence, QuadratureConfig, QuadratureResult
from .spectrum import SpectrumCoefficients, angular_spectrum, asymmetry, emission_rate_density, spectrum_coefficients
