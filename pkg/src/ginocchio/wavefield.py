"""Exact scattering wavefunction and its asymptotic plane-wave content.

The solution regular at x -> +inf is

    psi(x) = [lam^2 + (1 - lam^2) z^2]^(1/4) ((1 - z^2)/4)^(-ik/(2 lam^2))
             * 2F1(Omega, Delta; 1 - ik/lam^2; (1 - z)/2),
    z = lam y / sqrt(1 + (lam^2 - 1) y^2).

The 1/4 power on the first factor is required for psi to solve the
Schrodinger equation; without it the residual is O(1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NearBoundary, PoorFit
from .potential import PotentialSpec, coordinates, potential_value, x_of_s
from .scattering import diagnostics, wavenumber
from .specfun import hyp2f1

# log(1 - z^2) below this means the complement is no longer representable
_LOG_EDGE = -700.0
FIT_RTOL = 1e-6


@dataclass(frozen=True)
class WaveSample:
    x: float
    psi: complex
    z: float


@dataclass(frozen=True)
class JostTriple:
    """Plane-wave coefficients: A e^{ikx} + B e^{-ikx} on the left, C e^{ikx} on the right.

    The fitted phases absorb the undetermined asymptotic offsets, so only
    moduli and ratios of moduli are meaningful.
    """

    A: complex
    B: complex
    C: complex
    residual_left: float
    residual_right: float

    @property
    def R(self) -> float:
        return abs(self.B / self.A) ** 2

    @property
    def T(self) -> float:
        return abs(self.C / self.A) ** 2


def _z_parts(x, lam):
    c = coordinates(x, lam)
    y = float(c.y)
    d = 1.0 + (lam * lam - 1.0) * y * y
    log_1mz2 = float(c.log_q) - math.log(d)
    z = lam * y / math.sqrt(d)
    one_m_z2 = math.exp(log_1mz2)
    if z >= 0:
        w, wc = one_m_z2 / (1 + z) / 2, (1 + z) / 2
    else:
        w, wc = (1 - z) / 2, one_m_z2 / (1 - z) / 2
    return z, d, log_1mz2, w, wc


def psi_factors(x: float, E: float, spec: PotentialSpec):
    """The three factors of psi at x: (prefactor, complex power, 2F1 value).

    Raises
    ------
    NearBoundary
        If 1 - z^2 underflows (log below -700).
    """
    lam2 = spec.lam**2
    k = float(wavenumber(E))
    diag = diagnostics(E, spec)
    z, d, log_1mz2, w, wc = _z_parts(x, spec.lam)
    if log_1mz2 < _LOG_EDGE:
        raise NearBoundary(f"z = {z} too close to +-1 at x = {x}")
    # lam^2 + (1 - lam^2) z^2 == lam^2 / d
    pref = (lam2 / d) ** 0.25
    power = complex(np.exp(-1j * k / (2 * lam2) * (log_1mz2 - math.log(4.0))))
    f = hyp2f1(complex(diag.omega), complex(diag.delta), 1 - 1j * k / lam2, w, wc=wc)
    return pref, power, f, z


def psi_exact(x: float, E: float, spec: PotentialSpec) -> WaveSample:
    """Evaluate the exact wavefunction at a single point."""
    pref, power, f, z = psi_factors(x, E, spec)
    return WaveSample(x=float(x), psi=complex(pref * power * f), z=z)


def psi_values(xs, E: float, spec: PotentialSpec) -> np.ndarray:
    return np.array([psi_exact(float(x), E, spec).psi for x in np.atleast_1d(xs)])


def default_windows(spec: PotentialSpec):
    """x range where atanh(y) runs over [20, 32]: |V| ~ e^-40 there."""
    return (float(x_of_s(20.0, spec.lam)), float(x_of_s(32.0, spec.lam)))


def jost_fit(E: float, spec: PotentialSpec, fit_window=None, n_samples: int = 41) -> JostTriple:
    """Least-squares plane-wave fit of psi_exact on mirrored tail windows.

    Raises
    ------
    PoorFit
        If either window's residual exceeds 1e-6 of the sample norm.
    """
    lo, hi = default_windows(spec) if fit_window is None else fit_window
    k = float(wavenumber(E))
    xr = np.linspace(lo, hi, n_samples)
    xl = -xr[::-1]
    vmax = max(np.max(np.abs(potential_value(xr, spec))), np.max(np.abs(potential_value(xl, spec))))
    if vmax > 1e-8 * max(abs(spec.v0()), 1.0):
        raise PoorFit(f"|V| = {vmax:.2e} in the fit window is not negligible")

    pr = psi_values(xr, E, spec)
    pl = psi_values(xl, E, spec)

    basis_r = np.exp(1j * k * xr)[:, None]
    C, *_ = np.linalg.lstsq(basis_r, pr, rcond=None)
    res_r = np.linalg.norm(basis_r @ C - pr) / np.linalg.norm(pr)

    basis_l = np.stack([np.exp(1j * k * xl), np.exp(-1j * k * xl)], axis=1)
    AB, *_ = np.linalg.lstsq(basis_l, pl, rcond=None)
    res_l = np.linalg.norm(basis_l @ AB - pl) / np.linalg.norm(pl)

    if res_r > FIT_RTOL or res_l > FIT_RTOL:
        raise PoorFit(f"plane-wave fit residuals {res_l:.2e} (left), {res_r:.2e} (right)")
    return JostTriple(A=complex(AB[0]), B=complex(AB[1]), C=complex(C[0]),
                      residual_left=float(res_l), residual_right=float(res_r))


def ode_residual(x: float, E: float, spec: PotentialSpec, h: float = 1e-4) -> float:
    """|psi'' - (V - E) psi| / |psi''| with a central second difference."""
    p = psi_values([x - h, x, x + h], E, spec)
    d2 = (p[0] - 2 * p[1] + p[2]) / (h * h)
    v = potential_value(x, spec)
    return float(abs(d2 - (v - E) * p[1]) / abs(d2))
