"""Complex log-gamma and the Gauss hypergeometric function.

Only what the closed-form amplitudes and the exact wavefunction need:
``log_gamma`` on the principal branch (vectorised over numpy arrays) and
``hyp2f1`` for complex parameters and a real argument in [0, 1).
"""
from __future__ import annotations

import cmath
import logging
import math

import numpy as np

from .errors import NoConvergence, ParameterPole, PoleError, TransformDegenerate

log = logging.getLogger(__name__)

POLE_TOL = 1e-12
SERIES_RTOL = 1e-15
MAX_TERMS = 10_000
DEGENERATE_TOL = 1e-8
# past w = 1/2 the series is still tried when the transform cancels badly
SWITCH_RTOL = 1e-13
SERIES_REACH = 0.9
# measured accuracy of log_gamma: |error| <= LOG_GAMMA_RTOL * (1 + |log_gamma|)
LOG_GAMMA_RTOL = 5e-15

# Lanczos coefficients, g = 7, n = 9
_LANCZOS_G = 7.0
_LANCZOS_P = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _check_finite(z):
    if not np.all(np.isfinite(z)):
        raise ValueError("non-finite complex argument")


def is_gamma_pole(z, tol=POLE_TOL):
    """True where ``z`` lies within ``tol`` of 0, -1, -2, ..."""
    z = np.asarray(z, dtype=complex)
    n = np.round(z.real)
    return (n <= 0) & (np.abs(z - n) < tol)


def _lanczos_log_gamma(z):
    # valid for Re z >= 0.5
    zm = z - 1.0
    acc = np.full(zm.shape, _LANCZOS_P[0], dtype=complex)
    for i in range(1, len(_LANCZOS_P)):
        acc = acc + _LANCZOS_P[i] / (zm + i)
    t = zm + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (zm + 0.5) * np.log(t) - t + np.log(acc)


def log_gamma(z):
    """Principal branch of log Gamma(z).

    Accepts a scalar or an array.  For Re z < 0.5 the argument is shifted up
    with the recurrence log G(z) = log G(z + m) - sum log(z + j); since every
    log there is principal, the result stays on the principal branch, i.e.
    ``log_gamma(z + 1) == log(z) + log_gamma(z)`` off the negative real axis.

    Raises
    ------
    PoleError
        If any element is within 1e-12 of a non-positive integer.
    """
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    _check_finite(z)
    if np.any(is_gamma_pole(z)):
        raise PoleError(f"log_gamma evaluated at a pole: {z[is_gamma_pole(z)].ravel()[0]}")

    shift = np.maximum(0, np.ceil(0.5 - z.real)).astype(int)
    zs = z + shift
    out = _lanczos_log_gamma(zs)
    for j in range(int(shift.max()) if shift.size else 0):
        mask = shift > j
        out[mask] -= np.log(z[mask] + j)
    return complex(out[0]) if scalar else out


def gamma_magnitude_phase(z):
    """Return ``(log|Gamma(z)|, arg Gamma(z))``.

    The phase is the imaginary part of the principal ``log_gamma``; it is not
    reduced mod 2 pi and need not be continuous across the negative real axis.
    """
    lg = log_gamma(z)
    return np.real(lg), np.imag(lg)


def log_rgamma(z):
    """log(1/Gamma(z)) with ``-inf`` (real part) at the poles instead of raising."""
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    pole = is_gamma_pole(z)
    out = np.full(z.shape, -np.inf + 0j, dtype=complex)
    if np.any(~pole):
        out[~pole] = -log_gamma(z[~pole])
    return complex(out[0]) if scalar else out


def _as_poly_degree(p):
    """Degree m if ``p`` is (within tolerance) the non-positive integer -m."""
    n = round(p.real)
    if n <= 0 and abs(p - n) < POLE_TOL:
        return -n
    return None


def hyp2f1_series(a, b, c, w, max_terms=MAX_TERMS):
    """Sum the defining power series of 2F1(a, b; c; w).

    Returns ``(value, n_terms, achieved)`` where ``achieved`` is the last
    term's magnitude relative to the partial sum.  A non-positive integer
    upper parameter -m truncates the sum to exactly m + 1 terms.
    """
    value, n, achieved, _ = _series(a, b, c, w, max_terms)
    return value, n, achieved


def _series(a, b, c, w, max_terms=MAX_TERMS):
    # also returns the largest term, which bounds the rounding error
    a, b, c = complex(a), complex(b), complex(c)
    if _as_poly_degree(c) is not None:
        raise ParameterPole(f"2F1 lower parameter c={c} is a pole")
    da, db = _as_poly_degree(a), _as_poly_degree(b)
    if da is not None or db is not None:
        if db is None or (da is not None and da <= db):
            m, a = da, complex(-da)
        else:
            m, b = db, complex(-db)
        term = 1.0 + 0j
        total = term
        biggest = 1.0
        for n in range(m):
            term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * w
            total += term
            biggest = max(biggest, abs(term))
        return total, m + 1, 0.0, biggest

    # terms only decrease for good once n exceeds the parameter scale
    n_settle = int(max(abs(a), abs(b), abs(c))) + 2
    term = 1.0 + 0j
    total = term
    biggest = 1.0
    for n in range(max_terms - 1):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * w
        total += term
        biggest = max(biggest, abs(term))
        if n >= n_settle and abs(term) <= SERIES_RTOL * abs(total):
            return total, n + 2, abs(term) / abs(total), biggest
        if term == 0:
            return total, n + 2, 0.0, biggest
    raise NoConvergence(
        f"2F1 series did not converge within {max_terms} terms at w={w}",
        best=total,
    )


def _transformed(a, b, c, wc):
    # returns (value, rounding-error bound relative to the value)
    s = c - a - b
    if abs(s - round(s.real)) < DEGENERATE_TOL:
        raise TransformDegenerate(f"c-a-b={s} is an integer; 1-w transform singular")
    lgc = log_gamma(c)
    lg1 = lgc + log_gamma(s) + log_rgamma(c - a) + log_rgamma(c - b)
    lg2 = lgc + log_gamma(-s) + log_rgamma(a) + log_rgamma(b)
    eps = np.finfo(float).eps
    # each prefactor sums four log-gammas; their errors enter through exp
    lg_rel = eps + 4 * LOG_GAMMA_RTOL
    out = 0j
    bound = 0.0
    if np.isfinite(lg1.real):
        f1, _, _, big1 = _series(a, b, 1 - s, wc)
        t1 = cmath.exp(lg1)
        out += t1 * f1
        bound += abs(t1) * (eps * big1 + lg_rel * abs(f1) * (1 + abs(lg1)))
    if np.isfinite(lg2.real):
        f2, _, _, big2 = _series(c - a, c - b, 1 + s, wc)
        lg2 = lg2 + s * math.log(wc)
        t2 = cmath.exp(lg2)
        out += t2 * f2
        bound += abs(t2) * (eps * big2 + lg_rel * abs(f2) * (1 + abs(lg2)))
    rel = bound / abs(out) if out != 0 else np.inf
    return out, rel


def hyp2f1(a, b, c, w, *, wc=None, method="auto"):
    """Gauss hypergeometric function 2F1(a, b; c; w) for real 0 <= w < 1.

    Parameters
    ----------
    a, b, c : complex
    w : float
        Argument in [0, 1).
    wc : float, optional
        ``1 - w`` supplied directly when the caller knows it to more digits
        than ``1 - w`` would give (w very close to 1).
    method : {"auto", "series", "transform"}
        "auto" sums the series for w <= 1/2 and uses the 1 - w linear
        transformation above that, falling back to the plain series when
        c - a - b is (nearly) an integer.  Up to w = 0.9 it also keeps the
        plain series when the two transformed terms cancel so badly that the
        series' rounding bound is the smaller one.
    """
    a, b, c = complex(a), complex(b), complex(c)
    _check_finite([a, b, c])
    if wc is None:
        wc = 1.0 - w
    if not (0.0 <= w <= 1.0 and 0.0 < wc <= 1.0):
        raise ValueError(f"hyp2f1 needs 0 <= w < 1, got w={w}, 1-w={wc}")
    if _as_poly_degree(c) is not None:
        raise ParameterPole(f"2F1 lower parameter c={c} is a pole")
    if w == 0.0:
        return 1.0 + 0j

    if _as_poly_degree(a) is not None or _as_poly_degree(b) is not None:
        return hyp2f1_series(a, b, c, w)[0]
    if method == "series":
        return hyp2f1_series(a, b, c, w)[0]
    if method == "transform":
        return _transformed(a, b, c, wc)[0]
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")

    if w <= 0.5:
        return hyp2f1_series(a, b, c, w)[0]
    try:
        value, err = _transformed(a, b, c, wc)
    except TransformDegenerate:
        value, n, achieved = hyp2f1_series(a, b, c, w)
        log.debug("2F1 degenerate transform; series used, %d terms, rel tail %.2e", n, achieved)
        return value
    if err > SWITCH_RTOL and w <= SERIES_REACH:
        # the two transformed terms cancel; the direct series may do better
        try:
            sv, _, _, big = _series(a, b, c, w)
        except NoConvergence:
            return value
        if big / abs(sv) * np.finfo(float).eps < err:
            return sv
    return value
