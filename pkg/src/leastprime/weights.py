"""The weight family f_{l,A,B} and its Laplace transform.

f is the density of (B - 2Al) + U_1 + ... + U_{2l} with U_k uniform on [0, A],
so that

    F(z) = int f(t) e^{-zt} dt = e^{-(B-2Al) z} ((1 - e^{-Az}) / (Az))^{2l}.

The density is only evaluated for l <= 8; the alternating Irwin-Hall sum
cancels catastrophically beyond that, and large l only ever needs F.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import DomainError

MAX_DENSITY_ELL = 8


@dataclass(frozen=True)
class WeightParams:
    ell: int
    A: float
    B: float

    def __post_init__(self):
        if int(self.ell) != self.ell or self.ell < 1:
            raise DomainError("ell must be a positive integer")
        if not (self.A > 0.0 and self.B > 0.0):
            raise DomainError("A and B must be positive")
        # the boundary B = 2 A ell is admitted: support then starts at 0
        if not self.B >= 2.0 * self.A * self.ell:
            raise DomainError("B ≥ 2 A ell is required")

    @property
    def shift(self):
        """B - 2 A ell, the left end of the support."""
        return self.B - 2.0 * self.A * self.ell


@dataclass(frozen=True)
class LaplaceEval:
    z: complex
    F: complex
    sigma: float
    t: float
    alpha: int
    Lcal: float
    bound: float


def _sinc_factor(Az):
    """(1 - e^{-Az}) / (Az) with the removable singularity at 0 filled in."""
    Az = np.asarray(Az, dtype=complex)
    small = np.abs(Az) < 1e-8
    safe = np.where(small, 1.0, Az)
    out = -np.expm1(-safe) / safe
    # two-term Taylor expansion near the origin
    return np.where(small, 1.0 - Az / 2.0 + Az * Az / 6.0, out)


def laplace_F(p: WeightParams, z):
    """Closed-form F(z); scalars in, complex out."""
    scalar = np.ndim(z) == 0
    z = np.asarray(z, dtype=complex)
    log_mag_factor = 2 * p.ell * np.log(_sinc_factor(p.A * z))
    out = np.exp(-p.shift * z + log_mag_factor)
    out = np.where(z == 0, 1.0 + 0j, out)
    return complex(out) if scalar else out


def _log_bound(p: WeightParams, x, r):
    """log of min over integer alpha in [0, 2l] of e^{-(B-2Al)x} (2/(A r))^alpha, and the argmin."""
    base = -p.shift * x
    if r <= 0.0:
        return base, 0
    log_q = math.log(2.0) - math.log(p.A * r)
    # geometric in alpha: the minimum sits at one end
    if log_q < 0.0:
        return base + 2 * p.ell * log_q, 2 * p.ell
    return base, 0


def bound_F(p: WeightParams, sigma, t, Lcal):
    """Upper bound for |F((1 - s) L)| at s = sigma + i t, sigma < 1.

    Returns (bound, alpha) where alpha is the exponent achieving it.
    """
    if not sigma < 1.0:
        raise DomainError("sigma must be < 1")
    if not Lcal >= 1.0:
        raise DomainError("Lcal must be ≥ 1")
    x = (1.0 - sigma) * Lcal
    y = t * Lcal
    log_b, alpha = _log_bound(p, x, math.hypot(x, y))
    return math.exp(log_b), alpha


def evaluate(p: WeightParams, sigma, t, Lcal) -> LaplaceEval:
    z = complex((1.0 - sigma) * Lcal, -t * Lcal)
    bound, alpha = bound_F(p, sigma, t, Lcal)
    return LaplaceEval(z=z, F=laplace_F(p, z), sigma=sigma, t=t, alpha=alpha, Lcal=Lcal, bound=bound)


def _irwin_hall_scalar(n, x):
    """Density of the sum of n independent U(0, 1) at a float x."""
    if not 0.0 < x < n:
        return 0.0
    # fold onto [0, n/2] by symmetry; keeps the alternating sum small
    x = min(x, n - x)
    acc = 0.0
    for k in range(int(math.floor(x)) + 1):
        acc += (-1) ** k * math.comb(n, k) * (x - k) ** (n - 1)
    return max(acc / math.factorial(n - 1), 0.0)


def _irwin_hall(n, x):
    x = np.asarray(x, dtype=float)
    return np.array([_irwin_hall_scalar(n, float(v)) for v in x.ravel()]).reshape(x.shape)


def density_f(p: WeightParams, t):
    """f_{l,A,B}(t); zero outside [B - 2Al, B]."""
    if p.ell > MAX_DENSITY_ELL:
        raise DomainError(f"density_f supports ell <= {MAX_DENSITY_ELL}")
    scalar = np.ndim(t) == 0
    u = (np.asarray(t, dtype=float) - p.shift) / p.A
    out = _irwin_hall(2 * p.ell, np.atleast_1d(u)) / p.A
    return float(out[0]) if scalar else out.reshape(np.shape(t))


def quadrature_transform(p: WeightParams, z):
    """int f(t) e^{-zt} dt by adaptive quadrature, one call per polynomial piece of f."""
    z = complex(z)
    n = 2 * p.ell
    knots = [p.shift + k * p.A for k in range(n + 1)]

    def integrand(s):
        return _irwin_hall_scalar(n, (s - p.shift) / p.A) / p.A * np.exp(-z * s)

    total = 0j
    for a, b in zip(knots[:-1], knots[1:]):
        total += integrate.quad(integrand, a, b, epsabs=1e-14, epsrel=1e-12,
                                limit=200, complex_func=True)[0]
    return total


def quadrature_residual(p: WeightParams, z):
    if p.ell > MAX_DENSITY_ELL:
        raise DomainError(f"quadrature_residual supports ell <= {MAX_DENSITY_ELL}")
    return abs(quadrature_transform(p, z) - laplace_F(p, z))


def density_mass(p: WeightParams):
    return quadrature_transform(p, 0.0).real
