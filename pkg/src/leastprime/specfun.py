"""Digamma on the right half-plane and the kernel Delta(x, y) = Re psi((x+iy)/2).

Two independent routes are provided:

* :func:`digamma` shifts the argument with psi(z) = psi(z+1) - 1/z until
  Re(z) >= 8 and then sums the Stirling-type asymptotic series with Bernoulli
  terms through z^-16.
* :func:`digamma_series` sums psi(z) = -gamma + sum_n (1/(n+1) - 1/(n+z))
  directly and closes the tail with an Euler-Maclaurin correction of an
  elementary summand.  It never touches the Bernoulli table.

Both accept scalars or numpy arrays.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError

EULER_GAMMA = 0.57721566490153286060651209008240243
LOG_PI = math.log(math.pi)

SHIFT_TO = 8.0

# B_{2k} / (2k) for k = 1..8
_ASYMPTOTIC_COEFFS = np.array([
    (1.0 / 6.0) / 2.0,
    (-1.0 / 30.0) / 4.0,
    (1.0 / 42.0) / 6.0,
    (-1.0 / 30.0) / 8.0,
    (5.0 / 66.0) / 10.0,
    (-691.0 / 2730.0) / 12.0,
    (7.0 / 6.0) / 14.0,
    (-3617.0 / 510.0) / 16.0,
])

SERIES_TERMS = 1024


def _as_complex(z):
    arr = np.asarray(z, dtype=complex)
    if np.any(~np.isfinite(arr)):
        raise DomainError("digamma argument must be finite")
    if np.any(arr.real <= 0.0):
        raise DomainError("digamma is only evaluated for Re(z) > 0")
    return arr


def _unwrap(arr, scalar_input):
    return complex(arr) if scalar_input else arr


def digamma(z):
    """Gamma'/Gamma(z) for Re(z) > 0 (recurrence shift + asymptotic series)."""
    scalar = np.ndim(z) == 0
    w = _as_complex(z).copy()
    shift = max(0, math.ceil(SHIFT_TO - float(np.min(w.real))))
    correction = np.zeros_like(w)
    for _ in range(shift):
        correction += 1.0 / w
        w = w + 1.0
    inv2 = 1.0 / (w * w)
    # Horner in 1/w^2 over the Bernoulli coefficients
    series = np.zeros_like(w)
    for coeff in _ASYMPTOTIC_COEFFS[::-1]:
        series = (series + coeff) * inv2
    out = np.log(w) - 0.5 / w - series - correction
    return _unwrap(out, scalar)


def _series_single(z, n_terms):
    n = np.arange(n_terms, dtype=float)
    head = np.sum(1.0 / (n + 1.0) - 1.0 / (n + z))
    N = float(n_terms)
    # Euler-Maclaurin tail of g(n) = 1/(n+1) - 1/(n+z) over n >= N
    g0 = 1.0 / (N + 1.0) - 1.0 / (N + z)
    g1 = -1.0 / (N + 1.0) ** 2 + 1.0 / (N + z) ** 2
    g3 = -6.0 / (N + 1.0) ** 4 + 6.0 / (N + z) ** 4
    tail = np.log((N + z) / (N + 1.0)) + g0 / 2.0 - g1 / 12.0 + g3 / 720.0
    return -EULER_GAMMA + head + tail


def series_tail_bound(z, n_terms=SERIES_TERMS):
    """Size of the first neglected Euler-Maclaurin term for :func:`digamma_series`."""
    N = float(n_terms)
    g5 = abs(-120.0 / (N + 1.0) ** 6 + 120.0 / (N + complex(z)) ** 6)
    return g5 / 30240.0


def digamma_series(z, n_terms=SERIES_TERMS):
    """Reference digamma from the defining series; slow, used as an oracle."""
    scalar = np.ndim(z) == 0
    arr = _as_complex(z)
    if n_terms < 4 * (float(np.max(np.abs(arr))) + 1.0):
        raise DomainError("n_terms too small for the tail correction at this |z|")
    flat = np.array([_series_single(v, n_terms) for v in arr.ravel()], dtype=complex)
    return _unwrap(flat.reshape(arr.shape), scalar)


def delta(x, y):
    """Re psi((x + i y)/2); even in y by construction."""
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr <= 0.0):
        raise DomainError("Delta(x, y) requires x > 0")
    z = (x_arr + 1j * np.abs(np.asarray(y, dtype=float))) / 2.0
    out = np.real(digamma(z))
    return float(out) if np.ndim(out) == 0 else out


def delta_series(x, y):
    """:func:`delta` computed through the series oracle."""
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr <= 0.0):
        raise DomainError("Delta(x, y) requires x > 0")
    z = (x_arr + 1j * np.abs(np.asarray(y, dtype=float))) / 2.0
    out = np.real(digamma_series(z))
    return float(out) if np.ndim(out) == 0 else out
