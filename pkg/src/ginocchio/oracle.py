"""Direct numerical integration of psi'' = (V - E) psi.

Independent of the closed-form amplitudes: the only shared piece is the
potential itself.  A transmitted wave e^{ikx} is planted at x = +L and the
solution is carried back to x = -L with fixed-step RK4, where it is split
into incident and reflected plane waves A e^{ikx} + B e^{-ikx}.  Then
R = |B/A|^2 and T = |1/A|^2.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import IllConditioned, ResolutionError, TailNotDecayed
from .potential import PotentialSpec, potential_value, tail_offset

RESOLUTION_LIMIT = 0.5
ILL_CONDITIONED = 1e-12
# target phase advance per step; RK4 local error ~ (h k)^5
DEFAULT_PHASE_STEP = 0.01


@dataclass(frozen=True)
class OracleConfig:
    """Discretisation of the integration domain [-L, L].

    ``None`` fields are filled in per spec/energy: L starts 30/lam^2 past
    the potential's tail offset and grows until |V(L)| drops below the tail
    tolerance; h targets a phase advance of 0.01 per step against
    max(k, sqrt(max|V| + E)).
    """

    half_width_L: float | None = None
    step_h: float | None = None
    tail_tolerance: float | None = None
    richardson: bool = True


@dataclass(frozen=True)
class OracleResult:
    R: float
    T: float
    tail_residual: float
    step_estimate: float
    A: complex
    B: complex
    ill_conditioned: bool
    L: float
    h: float

    @property
    def U(self) -> float:
        return self.R + self.T


def _tail_tolerance(spec: PotentialSpec, config: OracleConfig) -> float:
    if config.tail_tolerance is not None:
        return config.tail_tolerance
    return 1e-10 * max(abs(spec.v0()), 1.0)


def resolve_domain(spec: PotentialSpec, config: OracleConfig = OracleConfig()) -> float:
    tol = _tail_tolerance(spec, config)
    if config.half_width_L is not None:
        L = config.half_width_L
        tail = max(abs(potential_value(L, spec)), abs(potential_value(-L, spec)))
        if tail >= tol:
            raise TailNotDecayed(f"|V(+-L)| = {tail:.3e} >= {tol:.3e} at L = {L}")
        return L
    L = (30.0 + tail_offset(spec.lam)) / spec.lam**2
    for _ in range(20):
        if abs(potential_value(L, spec)) < tol:
            return L
        L *= 1.5
    raise TailNotDecayed(f"potential tail did not decay below {tol:.3e}")


def _rk4(vfine, E, h, psi, dpsi):
    """Integrate psi'' = (V - E) psi over a grid; vfine holds V at half steps.

    ``vfine[2j]`` is V at the j-th node and ``vfine[2j+1]`` at the midpoint
    toward node j+1; h carries the direction.
    """
    n = (len(vfine) - 1) // 2
    for j in range(n):
        w0 = vfine[2 * j] - E
        wm = vfine[2 * j + 1] - E
        w1 = vfine[2 * j + 2] - E
        k1p, k1d = dpsi, w0 * psi
        p2 = psi + 0.5 * h * k1p
        d2 = dpsi + 0.5 * h * k1d
        k2p, k2d = d2, wm * p2
        p3 = psi + 0.5 * h * k2p
        d3 = dpsi + 0.5 * h * k2d
        k3p, k3d = d3, wm * p3
        p4 = psi + h * k3p
        d4 = dpsi + h * k3d
        k4p, k4d = d4, w1 * p4
        psi = psi + h / 6 * (k1p + 2 * k2p + 2 * k3p + k4p)
        dpsi = dpsi + h / 6 * (k1d + 2 * k2d + 2 * k3d + k4d)
    return psi, dpsi


def _sweep(vfunc, E, L, n, from_right=True):
    """Carry a unit transmitted wave across [-L, L]; return (A, B).

    With ``from_right`` the wave e^{ikx} sits at +L (incidence from the
    left); otherwise e^{-ikx} sits at -L (incidence from the right).  A is
    the incident and B the reflected amplitude on the far side.
    """
    k = np.sqrt(E)
    x = np.linspace(L, -L, 2 * n + 1) if from_right else np.linspace(-L, L, 2 * n + 1)
    vfine = vfunc(x)
    h = (x[-1] - x[0]) / n
    x0, x1 = x[0], x[-1]
    sgn = 1 if from_right else -1
    psi0 = np.exp(sgn * 1j * k * x0)
    dpsi0 = sgn * 1j * k * psi0
    vfine = vfine[:, None] if np.ndim(E) else vfine
    psi, dpsi = _rk4(vfine, E, h, psi0, dpsi0)
    forward = 0.5 * (psi + dpsi / (1j * k))
    backward = 0.5 * (psi - dpsi / (1j * k))
    if from_right:
        return forward * np.exp(-1j * k * x1), backward * np.exp(1j * k * x1)
    return backward * np.exp(1j * k * x1), forward * np.exp(-1j * k * x1)


def _steps(E, vmax, L, h):
    kmax = float(np.max(np.sqrt(E)))
    if h is None:
        scale = max(kmax, math.sqrt(vmax + float(np.max(E))))
        h = DEFAULT_PHASE_STEP / scale
    if h * kmax >= RESOLUTION_LIMIT:
        raise ResolutionError(f"h k = {h * kmax:.3f} >= {RESOLUTION_LIMIT}")
    n = max(2, int(math.ceil(2 * L / h)))
    return n, 2 * L / n


def integrate_profile(E, vfunc, L: float, h: float | None = None, *,
                      from_left: bool = True, richardson: bool = True):
    """Integrate an arbitrary potential ``vfunc(x)`` (vectorised) on [-L, L].

    Returns ``(R, T, A, B, err, h)`` with arrays over ``E``.  ``err`` is the
    Richardson estimate max(|R_h/2 - R_h|, |T_h/2 - T_h|) / 15 and ``h`` the
    coarser of the two steps.
    """
    E = np.asarray(E, dtype=float)
    vmax = float(np.max(np.abs(vfunc(np.linspace(-L, L, 4001)))))
    n, h = _steps(E, vmax, L, h)
    A, B = _sweep(vfunc, E, L, 2 * n if richardson else n, from_right=from_left)
    R = np.abs(B / A) ** 2
    T = np.abs(1 / A) ** 2
    err = np.zeros_like(R)
    if richardson:
        A1, B1 = _sweep(vfunc, E, L, n, from_right=from_left)
        err = np.maximum(np.abs(np.abs(B1 / A1) ** 2 - R), np.abs(np.abs(1 / A1) ** 2 - T)) / 15
    return R, T, A, B, err, h


def integrate_rt(E, spec: PotentialSpec, config: OracleConfig = OracleConfig()):
    """R and T from direct integration, for one energy or an array of them.

    Raises
    ------
    TailNotDecayed
        If |V(+-L)| is not below the tail tolerance.
    ResolutionError
        If h k >= 0.5.
    """
    scalar = np.ndim(E) == 0
    E = np.atleast_1d(np.asarray(E, dtype=float))
    if np.any(E <= 0):
        raise ValueError("energies must be positive")
    L = resolve_domain(spec, config)
    tail = max(abs(potential_value(L, spec)), abs(potential_value(-L, spec)))
    R, T, A, B, err, h = integrate_profile(
        E, lambda x: potential_value(x, spec), L, config.step_h, richardson=config.richardson)
    ill = np.abs(A) < ILL_CONDITIONED
    if np.any(ill):
        warnings.warn(f"|A| < {ILL_CONDITIONED} (near a spectral singularity) at E={E[ill]}",
                      IllConditioned, stacklevel=2)
    results = [
        OracleResult(R=float(R[i]), T=float(T[i]), tail_residual=float(tail),
                     step_estimate=float(err[i]), A=complex(A[i]), B=complex(B[i]),
                     ill_conditioned=bool(ill[i]), L=L, h=h)
        for i in range(len(E))
    ]
    return results[0] if scalar else results


def left_right_profile(E, vfunc, L: float, h: float | None = None):
    """Reflectivity of ``vfunc`` for incidence from the left and from the right."""
    R_left = integrate_profile(E, vfunc, L, h, from_left=True, richardson=False)[0]
    R_right = integrate_profile(E, vfunc, L, h, from_left=False, richardson=False)[0]
    return R_left, R_right


def left_right_check(E, spec: PotentialSpec, config: OracleConfig = OracleConfig()):
    """Reflectivity for incidence from the left and from the right."""
    L = resolve_domain(spec, config)
    return left_right_profile(E, lambda x: potential_value(x, spec), L, config.step_h)
