"""Closed-form scattering quantities for the complex Ginocchio potential.

Everything here is vectorised over the energy.  Energies are positive
floats in units 2m = hbar^2 = 1, so k = sqrt(E).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalOverflow
from .potential import PotentialSpec
from .specfun import is_gamma_pole, log_gamma, log_rgamma

OVERFLOW_LOG = 700.0
SINGULAR_TOL = 1e-12

# How the +- under the square root of mu tracks the -+ of the potential.
# "upper": upper sign with upper sign (validated against the reference table).
BINDINGS = ("upper", "lower")


def _energies(E):
    E = np.asarray(E, dtype=float)
    if np.any(~np.isfinite(E)) or np.any(E <= 0):
        raise ValueError("energies must be finite and positive")
    return E


def wavenumber(E, time_reversed: bool = False):
    k = np.sqrt(_energies(E))
    return -k if time_reversed else k


def mu(E, spec: PotentialSpec, *, branch: str = "principal", binding: str = "upper",
       time_reversed: bool = False):
    """mu(E) = sqrt(1/4 +- nu(nu+1) + (lam^2 - 1) k^2 / lam^4) - 1/2.

    ``branch="principal"`` takes Re sqrt >= 0; ``"flipped"`` returns -1 - mu,
    the other root, which swaps Delta and Omega but leaves r and t alone.
    """
    k = wavenumber(E, time_reversed)
    pm = -spec.sign if binding == "upper" else spec.sign
    if binding not in BINDINGS:
        raise ValueError(f"binding must be one of {BINDINGS}")
    lam2 = spec.lam**2
    rad = 0.25 + pm * spec.strength + (lam2 - 1) / lam2**2 * k * k
    m = np.sqrt(rad + 0j) - 0.5
    if branch == "flipped":
        m = -1 - m
    elif branch != "principal":
        raise ValueError(f"unknown branch {branch!r}")
    return m


@dataclass(frozen=True)
class SingularityDiagnostics:
    """Delta = F + iG (pole condition Delta = n <= 0) and Omega = H + iJ."""

    delta: np.ndarray
    omega: np.ndarray

    @property
    def F(self):
        return np.real(self.delta)

    @property
    def G(self):
        return np.imag(self.delta)

    @property
    def H(self):
        return np.real(self.omega)

    @property
    def J(self):
        return np.imag(self.omega)


def diagnostics(E, spec: PotentialSpec, **kw) -> SingularityDiagnostics:
    k = wavenumber(E, kw.get("time_reversed", False))
    m = mu(E, spec, **kw)
    ik = 1j * k / spec.lam**2
    return SingularityDiagnostics(delta=-m - ik, omega=m + 1 - ik)


@dataclass(frozen=True)
class AmplitudeSet:
    """Reflection/transmission amplitudes and probabilities.

    The e^{2ik r1} phase of the amplitudes is dropped (``phase_offset_r1``
    is always 0), so only |r|, |t| are meaningful for comparisons.  Where
    ``at_singularity`` is set, R and T hold +inf and r, t are undefined.
    """

    r: np.ndarray
    t: np.ndarray
    R: np.ndarray
    T: np.ndarray
    at_singularity: np.ndarray
    phase_offset_r1: float = 0.0

    @property
    def U(self):
        return self.R + self.T


def _is_singular(z):
    return is_gamma_pole(z, SINGULAR_TOL)


def amplitudes(E, spec: PotentialSpec, time_reversed: bool = False, **kw) -> AmplitudeSet:
    """r(k), t(k) assembled as exp of a sum of log-gammas.

    Raises
    ------
    NumericalOverflow
        If a log-magnitude exceeds 700 away from a detected pole.
    """
    scalar = np.ndim(E) == 0
    E = np.atleast_1d(_energies(E))
    k = wavenumber(E, time_reversed)
    m = mu(E, spec, time_reversed=time_reversed, **kw)
    ik = 1j * k / spec.lam**2
    delta = -m - ik
    omega = m + 1 - ik
    sing = _is_singular(delta) | _is_singular(omega)

    r = np.full(E.shape, np.nan + 0j)
    t = np.full(E.shape, np.nan + 0j)
    ok = ~sing
    if np.any(ok):
        d, o, ikk, mm = delta[ok], omega[ok], ik[ok], m[ok]
        common = log_gamma(o) + log_gamma(d) + log_rgamma(-ikk)
        log_t = common + log_rgamma(1 - ikk)
        log_r = common + log_gamma(ikk) + log_rgamma(mm + 1) + log_rgamma(-mm)
        for name, lg in (("r", log_r), ("t", log_t)):
            finite = np.isfinite(lg.real)
            if np.any(lg.real[finite] > OVERFLOW_LOG):
                bad = E[ok][finite & (lg.real > OVERFLOW_LOG)][0]
                raise NumericalOverflow(f"log|{name}| exceeds {OVERFLOW_LOG} at E={bad}")
        with np.errstate(under="ignore"):
            r[ok] = np.where(np.isfinite(log_r.real), np.exp(log_r), 0j)
            t[ok] = np.exp(log_t)

    R = np.where(sing, np.inf, np.abs(r) ** 2)
    T = np.where(sing, np.inf, np.abs(t) ** 2)
    if scalar:
        return AmplitudeSet(r=r[0], t=t[0], R=float(R[0]), T=float(T[0]),
                            at_singularity=bool(sing[0]))
    return AmplitudeSet(r=r, t=t, R=R, T=T, at_singularity=sing)


def reflectivity(E, spec: PotentialSpec, **kw):
    return amplitudes(E, spec, **kw).R


def transmissivity(E, spec: PotentialSpec, **kw):
    return amplitudes(E, spec, **kw).T
