"""Spectral-singularity search, second-singularity exclusion, R minima.

A spectral singularity sits where Delta(E) = F + iG equals a non-positive
integer: Gamma(Delta) blows up in both r and t.  The search looks for sign
changes of G on an energy grid, reads off the nearest admissible integer
from F there, and then refines the pair (E, one potential parameter) with a
damped Newton iteration until Delta hits the integer exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NoConvergence
from .potential import PotentialSpec
from .scattering import amplitudes, diagnostics

G_TOL = 1e-10
CERTIFY_TOL = 1e-9
# Newton keeps going past certification while it still gains, so that the
# scattering sentinel (1e-12) fires at E*
POLISH_TOL = 1e-13
MAX_SEED_DISTANCE = 0.5
REFLECTIONLESS = 1e-9
DEFAULT_POINTS = 2000
FREE_PARAMETERS = ("lambda", "re_nu", "im_nu")

_GOLDEN = (math.sqrt(5) - 1) / 2


@dataclass(frozen=True)
class Candidate:
    """A zero of G on the grid and how far F is from the nearest n <= 0."""

    E_hat: float
    nearest_n: int
    f_distance: float


@dataclass(frozen=True)
class SpectralSingularity:
    E_star: float
    n: int
    residual: float
    refined_spec: PotentialSpec
    free_parameter: str
    iterations: int = 0


@dataclass(frozen=True)
class Minimum:
    E: float
    R: float

    @property
    def is_reflectionless(self) -> bool:
        return self.R < REFLECTIONLESS


@dataclass(frozen=True)
class MinimaReport:
    minima: list[Minimum] = field(default_factory=list)

    @property
    def energies(self):
        return [m.E for m in self.minima]


@dataclass(frozen=True)
class SecondSSVerdict:
    """H > 0 everywhere rules out Omega = n <= 0, hence a second singularity."""

    excluded: bool
    min_H: float
    witness: float | None = None


@dataclass(frozen=True)
class UnitarityReport:
    crossings: list[float]
    everywhere_unitary: bool = False


def energy_grid(E_range, grid_points: int = DEFAULT_POINTS):
    lo, hi = E_range
    if not (0 < lo < hi):
        raise ValueError(f"need 0 < E_min < E_max, got {E_range}")
    return np.geomspace(lo, hi, grid_points)


def _bisect(f, a, b, fa, tol, rel=1e-15):
    """Bisect a sign change of f on [a, b]; return (x, f(x))."""
    fx = fa
    x = a
    while b - a > rel * b:
        x = 0.5 * (a + b)
        fx = f(x)
        if abs(fx) < tol or fx == 0:
            break
        if np.sign(fx) == np.sign(fa):
            a, fa = x, fx
        else:
            b = x
    return x, fx


def golden_min(f, a, b, rtol=1e-8):
    """Golden-section search for a minimum of f on [a, b]."""
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > rtol * abs(b):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def scan_ss_candidates(spec: PotentialSpec, E_range, grid_points: int = DEFAULT_POINTS,
                       **kw) -> list[Candidate]:
    """Zeros of G(E) with the nearest non-positive integer to F there.

    Sign changes across a branch-cut jump of the square root never reach
    |G| < 1e-10 under bisection and are dropped, as are roots whose nearest
    integer is positive.
    """
    if grid_points < 100:
        raise ValueError("grid_points must be at least 100")
    E = energy_grid(E_range, grid_points)
    G = diagnostics(E, spec, **kw).G
    g = lambda e: float(diagnostics(e, spec, **kw).G)  # noqa: E731
    out = []
    for i in np.flatnonzero(np.sign(G[:-1]) * np.sign(G[1:]) <= 0):
        if G[i] == 0 and i > 0 and G[i - 1] == 0:
            continue
        root, groot = _bisect(g, E[i], E[i + 1], G[i], G_TOL)
        if abs(groot) >= G_TOL:
            continue
        F = float(diagnostics(root, spec, **kw).F)
        n = int(round(F))
        if n > 0:
            continue
        out.append(Candidate(E_hat=float(root), nearest_n=n, f_distance=abs(F - n)))
    return out


def _with_parameter(spec: PotentialSpec, name: str, p: float) -> PotentialSpec:
    if name == "lambda":
        return spec.replace(lam=p)
    if name == "re_nu":
        return spec.replace(nu=complex(p, spec.nu.imag))
    if name == "im_nu":
        return spec.replace(nu=complex(spec.nu.real, p))
    raise ValueError(f"free parameter must be one of {FREE_PARAMETERS}")


def _parameter(spec: PotentialSpec, name: str) -> float:
    return {"lambda": spec.lam, "re_nu": spec.nu.real, "im_nu": spec.nu.imag}[name]


def _delta_derivative(spec, E, name, **kw):
    if name == "E":
        h = 1e-6 * E
        return (complex(diagnostics(E + h, spec, **kw).delta)
                - complex(diagnostics(E - h, spec, **kw).delta)) / (2 * h)
    p = _parameter(spec, name)
    h = 1e-6 * max(abs(p), 1e-3)
    lo = complex(diagnostics(E, _with_parameter(spec, name, p - h), **kw).delta)
    hi = complex(diagnostics(E, _with_parameter(spec, name, p + h), **kw).delta)
    return (hi - lo) / (2 * h)


def pick_free_parameter(spec: PotentialSpec, seed: Candidate, **kw) -> str:
    """The parameter whose effect on Delta is most transverse to that of E.

    Moving E and the parameter must be able to steer Delta in two
    independent directions of the complex plane; the sine of the angle
    between dDelta/dE and dDelta/dp measures how well they do.
    """
    dE = _delta_derivative(spec, seed.E_hat, "E", **kw)
    best, best_sin = "lambda", -1.0
    for name in FREE_PARAMETERS:
        dp = _delta_derivative(spec, seed.E_hat, name, **kw)
        if dp == 0:
            continue
        sin = abs((dE.conjugate() * dp).imag) / (abs(dE) * abs(dp))
        if sin > best_sin + 1e-12:
            best, best_sin = name, sin
    return best


def closest_approach(spec: PotentialSpec, seed: Candidate, window: float = 0.05, **kw) -> float:
    """Energy near the seed where |Delta(E) - n| is smallest (the R peak)."""
    n = seed.nearest_n
    f = lambda e: abs(complex(diagnostics(e, spec, **kw).delta) - n)  # noqa: E731
    e, _ = golden_min(f, seed.E_hat * (1 - window), seed.E_hat * (1 + window), rtol=1e-12)
    return e


def _damped_newton(resid, v, max_iter, tol=POLISH_TOL):
    """Newton on a 2x2 real system; returns (best v, best residual, iterations).

    Stops at ``tol`` or when no damped step lowers the residual.
    """
    r = resid(v)
    best = (v.copy(), r.copy())
    it = 0
    for it in range(1, max_iter + 1):
        if np.max(np.abs(r)) < tol:
            break
        jac = np.empty((2, 2))
        for j in range(2):
            step = 1e-6 * max(abs(v[j]), 1e-3)
            vp = v.copy()
            vp[j] += step
            rp = resid(vp)
            if rp is None:
                vp[j] -= 2 * step
                rp = resid(vp)
                step = -step
            jac[:, j] = (rp - r) / step
        try:
            dv = np.linalg.solve(jac, -r)
        except np.linalg.LinAlgError:
            dv = -np.linalg.lstsq(jac, r, rcond=None)[0]
        t = 1.0
        accepted = None
        for _ in range(40):
            trial = resid(v + t * dv)
            # a component already under tolerance only has to stay there
            if trial is not None and np.all(
                    (np.abs(trial) < np.abs(r)) | (np.abs(trial) < tol)):
                accepted = trial
                break
            t *= 0.5
        if accepted is None:
            t = 1.0
            for _ in range(40):
                trial = resid(v + t * dv)
                if trial is not None and np.linalg.norm(trial) < np.linalg.norm(r):
                    accepted = trial
                    break
                t *= 0.5
        if accepted is None:
            break
        v = v + t * dv
        r = accepted
        if np.linalg.norm(r) < np.linalg.norm(best[1]):
            best = (v.copy(), r.copy())
    return best[0], best[1], it


def refine_ss(spec: PotentialSpec, seed: Candidate, free_parameter: str = "lambda",
              max_iter: int = 100, **kw) -> SpectralSingularity:
    """Drive Delta to the seed's integer n by adjusting the potential.

    ``free_parameter`` selects the unknowns:

    * "lambda", "re_nu", "im_nu": solve F(E, p) = n, G(E, p) = 0 for the
      energy and that one parameter;
    * "nu": pin E at the closest approach of Delta to n and solve for the
      complex nu (two real unknowns), so E* stays at the R peak;
    * "auto": the single parameter picked by :func:`pick_free_parameter`.

    Damped Newton with a forward-difference Jacobian (relative step 1e-6);
    the step is halved until both residual components shrink (or stay under
    the tolerance).

    Raises
    ------
    ValueError
        If the seed's F is 0.5 or more away from its integer.
    NoConvergence
        After ``max_iter`` iterations; ``best`` holds the best iterate.
    """
    if seed.f_distance >= MAX_SEED_DISTANCE:
        raise ValueError(f"seed too far from an integer (|F - n| = {seed.f_distance:.3f})")
    if free_parameter == "auto":
        free_parameter = pick_free_parameter(spec, seed, **kw)
    n = seed.nearest_n

    if free_parameter == "nu":
        E_pin = closest_approach(spec, seed, **kw)

        def unpack(v):
            return E_pin, spec.replace(nu=complex(v[0], v[1]))

        v0 = np.array([spec.nu.real, spec.nu.imag])
    elif free_parameter in FREE_PARAMETERS:
        def unpack(v):
            if v[0] <= 0 or (free_parameter == "lambda" and v[1] <= 0):
                return None, None
            return v[0], _with_parameter(spec, free_parameter, float(v[1]))

        v0 = np.array([seed.E_hat, _parameter(spec, free_parameter)])
    else:
        raise ValueError(f"free parameter must be 'nu', 'auto' or one of {FREE_PARAMETERS}")

    def resid(v):
        E, sp = unpack(v)
        if E is None:
            return None
        d = complex(diagnostics(E, sp, **kw).delta)
        return np.array([d.real - n, d.imag])

    v, r, it = _damped_newton(resid, v0, max_iter)
    E_star, refined = unpack(v)
    result = SpectralSingularity(E_star=float(E_star), n=n, residual=float(np.max(np.abs(r))),
                                 refined_spec=refined, free_parameter=free_parameter,
                                 iterations=it)
    if result.residual >= CERTIFY_TOL:
        raise NoConvergence(f"refinement stalled at residual {result.residual:.2e}", best=result)
    return result


def find_ss(spec: PotentialSpec, E_range, grid_points: int = DEFAULT_POINTS,
            free_parameter: str = "nu", **kw) -> list[SpectralSingularity]:
    """Scan, then refine every candidate within 0.5 of an integer.

    The default refines the complex nu at the energy of closest approach,
    which keeps E* at the reflectivity peak of the unrefined potential.
    """
    found = []
    for cand in scan_ss_candidates(spec, E_range, grid_points, **kw):
        if cand.f_distance >= MAX_SEED_DISTANCE:
            continue
        try:
            found.append(refine_ss(spec, cand, free_parameter, **kw))
        except NoConvergence:
            continue
    return found


def exclude_second_ss(spec: PotentialSpec, E_range, grid_points: int = DEFAULT_POINTS,
                      **kw) -> SecondSSVerdict:
    """Check H(E) = Re Omega stays positive on the grid and at its refined minima."""
    E = energy_grid(E_range, grid_points)
    H = diagnostics(E, spec, **kw).H
    h = lambda e: float(diagnostics(e, spec, **kw).H)  # noqa: E731
    bad = np.flatnonzero(H <= 0)
    if bad.size:
        return SecondSSVerdict(excluded=False, min_H=float(H.min()), witness=float(E[bad[0]]))
    min_H = float(H.min())
    # strict interior minima plus the grid minimum; flat stretches of H add nothing
    idx = {i for i in range(1, len(E) - 1) if H[i] < H[i - 1] and H[i] < H[i + 1]}
    idx.add(int(np.argmin(H)))
    for i in sorted(idx):
        lo, hi = max(i - 1, 0), min(i + 1, len(E) - 1)
        e, v = golden_min(h, E[lo], E[hi])
        min_H = min(min_H, v)
        if v <= 0:
            return SecondSSVerdict(excluded=False, min_H=v, witness=e)
    return SecondSSVerdict(excluded=True, min_H=min_H)


def _finite_R(spec, **kw):
    def f(e):
        R = float(amplitudes(e, spec, **kw).R)
        return R if math.isfinite(R) else math.inf
    return f


def find_minima(spec: PotentialSpec, E_range, grid_points: int = DEFAULT_POINTS,
                **kw) -> MinimaReport:
    """Strict local minima of R(E) on the grid, polished by golden section."""
    E = energy_grid(E_range, grid_points)
    R = amplitudes(E, spec, **kw).R
    f = _finite_R(spec, **kw)
    out = []
    for i in range(1, len(E) - 1):
        if R[i] < R[i - 1] and R[i] < R[i + 1]:
            e, v = golden_min(f, E[i - 1], E[i + 1])
            out.append(Minimum(E=float(e), R=float(v)))
    return MinimaReport(minima=out)


def unitarity_crossings(spec: PotentialSpec, E_range, grid_points: int = DEFAULT_POINTS,
                        **kw) -> UnitarityReport:
    """Energies where U = R + T passes through 1."""
    E = energy_grid(E_range, grid_points)
    amp = amplitudes(E, spec, **kw)
    D = amp.U - 1
    if spec.is_hermitian and np.all(np.abs(D) < 1e-9):
        return UnitarityReport(crossings=[], everywhere_unitary=True)

    def d(e):
        return float(amplitudes(e, spec, **kw).U) - 1

    out = []
    for i in np.flatnonzero(np.sign(D[:-1]) * np.sign(D[1:]) < 0):
        if amp.at_singularity[i] or amp.at_singularity[i + 1]:
            continue
        root, _ = _bisect(d, E[i], E[i + 1], D[i], 0.0, rel=1e-8)
        out.append(float(root))
    return UnitarityReport(crossings=out)
