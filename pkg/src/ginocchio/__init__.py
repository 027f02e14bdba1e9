"""Scattering off the complex (non-Hermitian) Ginocchio potential.

Closed-form amplitudes, spectral-singularity search and reflectivity minima,
cross-checked against direct integration of the Schrodinger equation.
"""
from .analysis import (
    MinimaReport,
    SpectralSingularity,
    exclude_second_ss,
    find_minima,
    find_ss,
    refine_ss,
    scan_ss_candidates,
    unitarity_crossings,
)
from .oracle import OracleConfig, OracleResult, integrate_rt, left_right_check
from .potential import (
    Emissivity,
    PotentialSpec,
    Profile,
    classify_profile,
    emissivity,
    potential_value,
    x_of_y,
    y_of_x,
)
from .scattering import AmplitudeSet, SingularityDiagnostics, amplitudes, diagnostics, mu
from .specfun import gamma_magnitude_phase, hyp2f1, log_gamma
from .wavefield import JostTriple, WaveSample, jost_fit, psi_exact

__version__ = "0.1.0"

__all__ = [
    "AmplitudeSet", "Emissivity", "JostTriple", "MinimaReport", "OracleConfig",
    "OracleResult", "PotentialSpec", "Profile", "SingularityDiagnostics",
    "SpectralSingularity", "WaveSample", "amplitudes", "classify_profile",
    "diagnostics", "emissivity", "exclude_second_ss", "find_minima", "find_ss",
    "gamma_magnitude_phase", "hyp2f1", "integrate_rt", "jost_fit", "left_right_check",
    "log_gamma", "mu", "potential_value", "psi_exact", "refine_ss",
    "scan_ss_candidates", "unitarity_crossings", "x_of_y", "y_of_x",
]
