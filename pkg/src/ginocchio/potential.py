"""Ginocchio coordinate map and the complex potential V(x).

The map x(y) is inverted through the auxiliary variable s = atanh(y), on
which x is a smooth function with derivative dx/ds = 1 / (1 + (lam^2-1) y^2).
Working in s keeps 1 - y^2 = sech^2(s) accurate far into the tails, where
y itself rounds to 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

from .errors import DomainError, Unclassifiable

PROFILE_DUST = 1e-6
EMISSIVITY_ZERO = 1e-12


@dataclass(frozen=True)
class PotentialSpec:
    """Parameters of the complex Ginocchio potential.

    ``sign`` multiplies lam^2 nu (nu + 1) directly: -1 picks the upper
    sign of the potential's leading term, +1 the lower.  Units are fixed to
    2m = hbar^2 = 1, so k = sqrt(E).
    """

    nu: complex
    lam: float
    sign: int = -1

    def __post_init__(self):
        nu = complex(self.nu)
        if not (math.isfinite(nu.real) and math.isfinite(nu.imag)):
            raise ValueError(f"nu must be finite, got {self.nu}")
        if not (math.isfinite(self.lam) and self.lam > 0):
            raise ValueError(f"lambda must be positive, got {self.lam}")
        if self.sign not in (-1, 1):
            raise ValueError(f"sign must be -1 or +1, got {self.sign}")
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "sign", int(self.sign))

    @property
    def strength(self) -> complex:
        """nu (nu + 1), the only combination of nu the potential depends on."""
        return self.nu * (self.nu + 1)

    @property
    def is_hermitian(self) -> bool:
        return abs(self.strength.imag) < EMISSIVITY_ZERO * max(1.0, abs(self.strength))

    def replace(self, **changes) -> "PotentialSpec":
        fields = {"nu": self.nu, "lam": self.lam, "sign": self.sign}
        fields.update(changes)
        return PotentialSpec(**fields)

    def v0(self) -> complex:
        """V(0) in closed form (y(0) = 0)."""
        return self.sign * self.lam**2 * self.strength + (1 - self.lam**2) / 2


class Coordinates(NamedTuple):
    """Ginocchio variables at a point x; all arrays of the shape of x."""

    s: np.ndarray  # atanh(y), signed
    y: np.ndarray
    log_q: np.ndarray  # log(1 - y^2), accurate in the tails


def x_of_y(y, lam: float):
    """Map y in (-1, 1) to x on the real line.

    For lam > 1 the atanh of an imaginary argument is rewritten as an atan so
    that everything stays real.
    """
    y = np.asarray(y, dtype=float)
    if np.any(np.abs(y) >= 1):
        raise DomainError("x_of_y needs |y| < 1")
    if lam == 1.0:
        out = np.arctanh(y)
    elif lam > 1.0:
        a = math.sqrt(lam * lam - 1)
        out = (np.arctanh(y) + a * np.arctan(a * y)) / lam**2
    else:
        b = math.sqrt(1 - lam * lam)
        out = (np.arctanh(y) - b * np.arctanh(b * y)) / lam**2
    return float(out) if out.ndim == 0 else out


def tail_offset(lam: float) -> float:
    """Limit of lam^2 x - atanh(y) as y -> 1.

    Far out, 1 - y^2 ~ 4 exp(-2 (lam^2 |x| - offset)), so the potential's
    tail starts roughly offset / lam^2 away from the origin.
    """
    if lam == 1.0:
        return 0.0
    if lam > 1.0:
        a = math.sqrt(lam * lam - 1)
        return a * math.atan(a)
    b = math.sqrt(1 - lam * lam)
    return -b * math.atanh(b)


def x_of_s(s, lam: float):
    """x as a function of s = atanh(y)."""
    return _x_of_s(np.asarray(s, dtype=float), lam)


def _x_of_s(s, lam):
    y = np.tanh(s)
    if lam == 1.0:
        return s
    if lam > 1.0:
        a = math.sqrt(lam * lam - 1)
        return (s + a * np.arctan(a * y)) / lam**2
    b = math.sqrt(1 - lam * lam)
    return (s - b * np.arctanh(b * y)) / lam**2


def _dx_ds(s, lam):
    y = np.tanh(s)
    return 1.0 / (1.0 + (lam * lam - 1) * y * y)


def s_of_x(x, lam: float):
    """Solve x(s) = x for s = atanh(y).

    Bracketed: dx/ds lies between min(1, lam^-2) and max(1, lam^-2), so
    s is inside [x min(1, lam^2), x max(1, lam^2)].  A few bisection steps
    shrink the bracket, then safeguarded Newton finishes.
    """
    x = np.asarray(x, dtype=float)
    sgn = np.sign(x)
    ax = np.abs(x)
    lo = ax * min(1.0, lam * lam)
    hi = ax * max(1.0, lam * lam)
    for _ in range(8):
        mid = 0.5 * (lo + hi)
        right = _x_of_s(mid, lam) > ax
        hi = np.where(right, mid, hi)
        lo = np.where(right, lo, mid)
    s = 0.5 * (lo + hi)
    for _ in range(60):
        f = _x_of_s(s, lam) - ax
        step = f / _dx_ds(s, lam)
        s_new = s - step
        outside = (s_new < lo) | (s_new > hi)
        s_new = np.where(outside, 0.5 * (lo + hi), s_new)
        lo = np.where(f < 0, np.maximum(lo, s), lo)
        hi = np.where(f > 0, np.minimum(hi, s), hi)
        done = np.abs(s_new - s) <= 1e-16 * np.maximum(1.0, s)
        s = s_new
        if np.all(done):
            break
    return sgn * s


def coordinates(x, lam: float) -> Coordinates:
    s = s_of_x(x, lam)
    a = np.abs(s)
    # log(sech^2 s) without overflow
    log_q = -2.0 * (a + np.log1p(np.exp(-2.0 * a)) - math.log(2.0))
    return Coordinates(s=s, y=np.tanh(s), log_q=log_q)


def y_of_x(x, lam: float):
    """Inverse of :func:`x_of_y`: the unique y in (-1, 1) with x_of_y(y) = x."""
    y = np.tanh(s_of_x(x, lam))
    return float(y) if np.ndim(y) == 0 else y


def _potential_from_coords(c: Coordinates, spec: PotentialSpec):
    lam2 = spec.lam**2
    q = np.exp(c.log_q)
    y2 = c.y * c.y
    shape = (1 - lam2) / 4 * (5 * (1 - lam2) * y2 * y2 - (7 - lam2) * y2 + 2)
    return (spec.sign * lam2 * spec.strength + shape) * q


def potential_value(x, spec: PotentialSpec):
    """Complex V(x); vectorised over ``x``."""
    v = _potential_from_coords(coordinates(x, spec.lam), spec)
    return complex(v) if np.ndim(v) == 0 else v


class Profile(str, Enum):
    BARRIER = "barrier"
    WELL = "well"
    WELL_WITH_SIDE_BARRIERS = "well_with_side_barriers"


class Emissivity(str, Enum):
    EMISSIVE = "emissive"
    ABSORPTIVE = "absorptive"
    MIXED = "mixed"
    NONE = "none"


def default_grid(spec: PotentialSpec, n: int = 2001):
    """Symmetric x grid covering the region where V is not negligible."""
    half = 20.0 / spec.lam**2 + 2.0
    return np.linspace(-half, half, n)


def _extrema(x, v):
    idx_max = [i for i in range(1, len(v) - 1) if v[i] > v[i - 1] and v[i] >= v[i + 1]]
    idx_min = [i for i in range(1, len(v) - 1) if v[i] < v[i - 1] and v[i] <= v[i + 1]]
    return idx_max, idx_min


def classify_profile(spec: PotentialSpec, x_grid=None) -> Profile:
    """Classify Re V(x) as a barrier, a well, or a well flanked by barriers.

    Values with |Re V| under 1e-6 of the grid maximum count as zero.
    """
    x = default_grid(spec) if x_grid is None else np.asarray(x_grid, dtype=float)
    v = np.real(potential_value(x, spec))
    scale = np.max(np.abs(v))
    if scale == 0:
        raise Unclassifiable("Re V vanishes on the grid", extrema=[])
    v = np.where(np.abs(v) < PROFILE_DUST * scale, 0.0, v)
    idx_max, idx_min = _extrema(x, v)
    pos_max = [i for i in idx_max if v[i] > 0]
    neg_min = [i for i in idx_min if v[i] < 0]
    pos = v > 0
    neg = v < 0

    if pos.any() and not neg.any() and len(pos_max) == 1:
        return Profile.BARRIER
    if neg.any() and not pos.any() and len(neg_min) == 1:
        return Profile.WELL
    if neg.any() and pos.any():
        # negative core with positive humps outside it on both sides
        core_lo, core_hi = x[neg].min(), x[neg].max()
        if np.any(pos & (x < core_lo)) and np.any(pos & (x > core_hi)):
            return Profile.WELL_WITH_SIDE_BARRIERS
    extrema = [(float(x[i]), float(v[i])) for i in sorted(idx_max + idx_min)]
    raise Unclassifiable(f"unrecognised Re V pattern for {spec}", extrema=extrema)


def emissivity(spec: PotentialSpec, x_grid=None) -> Emissivity:
    """Sign class of Im V on the grid (positive is emissive, negative absorptive)."""
    x = default_grid(spec) if x_grid is None else np.asarray(x_grid, dtype=float)
    w = np.imag(potential_value(x, spec))
    nz = np.abs(w) > EMISSIVITY_ZERO
    if not np.any(nz):
        return Emissivity.NONE
    if np.all(w[nz] > 0):
        return Emissivity.EMISSIVE
    if np.all(w[nz] < 0):
        return Emissivity.ABSORPTIVE
    return Emissivity.MIXED
