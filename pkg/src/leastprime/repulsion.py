"""Zero-repulsion constants built from digamma values.

With d = sqrt(2c^2 + (1-eta)^2 - 2c(1-eta)) and A = (c - 1 + eta)^2
(so that d^2 = c^2 + A),

    a(c, eta, T) = 1/(d-1) + M(T; eta),
    M(T; eta)    = max_{|t|<=T} { G1(d-1;|t|)/((d-1) log 60), G2(d-1;|t|)/((d-1) log 22), 0 },
    C            = A a (16 + 4 eps) / (c - 1),
    C'           = 8 A a' (1 + 4 eps) / (c - 1),   a' = a(c, eta, 0).

These are the large-discriminant limits; :func:`finite_L_correction` gives the
extra 1/L terms that are dropped in the limit.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import DomainError
from .optimize import golden_section, grid_then_golden
from .specfun import LOG_PI, delta

DEFAULT_EPS = 1e-11
ZERO_FREE_REGION_CONSTANT = 12.74
LOG_60 = math.log(60.0)
LOG_22 = math.log(22.0)
M_GRID_POINTS = 2048
M_REFINE_TOL = 1e-9


def _check_c_eta(c, eta):
    if not c >= 2.0:
        raise DomainError("c must be ≥ 2")
    if not 0.0 < eta < 1.0:
        raise DomainError("eta must lie in (0, 1)")


def _check_eps(eps):
    if not 0.0 < eps < 1.0:
        raise DomainError("eps must lie in (0, 1)")


@dataclass(frozen=True)
class RepulsionParams:
    c: float
    eta: float
    T: float
    eps: float = DEFAULT_EPS

    def __post_init__(self):
        _check_c_eta(self.c, self.eta)
        _check_eps(self.eps)
        if not self.T >= 0.0:
            raise DomainError("T must be ≥ 0")


@dataclass(frozen=True)
class DerivedQuantities:
    d: float
    A_cal: float
    m_sup: float
    a: float
    a_prime: float
    C: float
    C_prime: float
    delta: float
    delta_prime: float

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class FieldProfile:
    r1: int
    r2: int
    Lcal: float

    def __post_init__(self):
        if self.r1 < 0 or self.r2 < 0:
            raise DomainError("r1 and r2 must be nonnegative")
        if not self.Lcal >= 0.0:
            raise DomainError("Lcal must be nonnegative")

    def odlyzko_holds(self):
        return odlyzko_lhs(self.r1, self.r2) <= self.Lcal


def odlyzko_lhs(r1, r2):
    """(log 60) r1 + (log 22) 2 r2."""
    if r1 < 0 or r2 < 0:
        raise DomainError("r1 and r2 must be nonnegative")
    return LOG_60 * r1 + LOG_22 * 2 * r2


def derived_geometry(c, eta):
    """Return (d, A) for the given c and eta."""
    _check_c_eta(c, eta)
    d = math.sqrt(2.0 * c * c + (1.0 - eta) ** 2 - 2.0 * c * (1.0 - eta))
    return d, (c - 1.0 + eta) ** 2


def g_functions(alpha, t):
    """(G1(alpha; t), G2(alpha; t)); ``t`` may be an array."""
    if not alpha >= 0.0:
        raise DomainError("alpha must be ≥ 0")
    t = np.abs(np.asarray(t, dtype=float))
    d10 = delta(alpha + 1.0, 0.0)
    d20 = delta(alpha + 2.0, 0.0)
    d1t = delta(np.full_like(t, alpha + 1.0), t)
    d2t = delta(np.full_like(t, alpha + 2.0), t)
    g1 = (d10 + d1t) / 2.0 - LOG_PI
    g2 = (d10 + d20 + d1t + d2t) / 4.0 - LOG_PI
    if np.ndim(g1) == 0:
        return float(g1), float(g2)
    return g1, g2


def _normalized_g(alpha):
    def h(t):
        g1, g2 = g_functions(alpha, t)
        return np.maximum(g1 / (alpha * LOG_60), g2 / (alpha * LOG_22))
    return h


def m_sup(c, eta, T, n_grid=M_GRID_POINTS, tol=M_REFINE_TOL):
    """max over |t| <= T of the normalized G-terms and 0.

    A uniform grid on [0, T] locates the best bracket, which golden-section
    search then refines.
    """
    _check_c_eta(c, eta)
    if not T >= 0.0:
        raise DomainError("T must be ≥ 0")
    d, _ = derived_geometry(c, eta)
    h = _normalized_g(d - 1.0)
    if T == 0.0:
        return max(0.0, float(h(np.array([0.0]))[0]))
    _, best = grid_then_golden(h, 0.0, T, n_grid, tol=tol, maximize=True, vectorized=True)
    return max(0.0, best)


def coefficient_a(c, eta, T):
    d, _ = derived_geometry(c, eta)
    return 1.0 / (d - 1.0) + m_sup(c, eta, T)


def coefficient_a_prime(c, eta):
    return coefficient_a(c, eta, 0.0)


def _C_from(A_cal, a, c, eps):
    return A_cal * a * (16.0 + 4.0 * eps) / (c - 1.0)


def _C_prime_from(A_cal, a_prime, c, eps):
    return 8.0 * A_cal * a_prime * (1.0 + 4.0 * eps) / (c - 1.0)


def dh_constant(c, eta, T, eps=DEFAULT_EPS):
    """The repulsion constant C(c, eta, T, eps) for zeros with |gamma'| <= T."""
    p = RepulsionParams(c, eta, T, eps)
    if not p.T >= 1.0:
        raise DomainError("T must be ≥ 1")
    _, A_cal = derived_geometry(c, eta)
    return _C_from(A_cal, coefficient_a(c, eta, T), c, eps)


def dh_constant_real(c, eta, eps=DEFAULT_EPS):
    """The real-zero constant C'(c, eta, eps)."""
    _check_c_eta(c, eta)
    _check_eps(eps)
    _, A_cal = derived_geometry(c, eta)
    return _C_prime_from(A_cal, coefficient_a_prime(c, eta), c, eps)


def derive(p: RepulsionParams) -> DerivedQuantities:
    d, A_cal = derived_geometry(p.c, p.eta)
    m = m_sup(p.c, p.eta, p.T)
    a = 1.0 / (d - 1.0) + m
    a_prime = coefficient_a_prime(p.c, p.eta)
    return DerivedQuantities(
        d=d,
        A_cal=A_cal,
        m_sup=m,
        a=a,
        a_prime=a_prime,
        C=_C_from(A_cal, a, p.c, p.eps),
        C_prime=_C_prime_from(A_cal, a_prime, p.c, p.eps),
        delta=p.eps / (32.0 + 4.0 * p.eps),
        delta_prime=p.eps / (4.0 * (1.0 + 2.0 * p.eps)),
    )


def finite_L_correction(c, eta, Lcal):
    """2/((d-1)^2 L) + 2/((d-1+(d-1)^2) L): the part of the bound on M that vanishes as L grows."""
    if not Lcal > 0.0:
        raise DomainError("Lcal must be positive")
    d, _ = derived_geometry(c, eta)
    alpha = d - 1.0
    return 2.0 / (alpha * alpha * Lcal) + 2.0 / ((alpha + alpha * alpha) * Lcal)


def zero_sum_bound(alpha, t, profile: FieldProfile):
    """Upper bound for the sum over zeros of 1/|alpha+1-rho|^2 + 1/|alpha+1+it-rho|^2."""
    if not alpha >= 1.0:
        raise DomainError("alpha must be ≥ 1")
    g1, g2 = g_functions(alpha, abs(t))
    return (
        profile.Lcal / alpha
        + g1 * profile.r1 / alpha
        + g2 * 2 * profile.r2 / alpha
        + 2.0 / alpha ** 2
        + 2.0 / (alpha + alpha ** 2)
    )


def optimize_c(eta, T, eps=DEFAULT_EPS, c_lo=2.0, c_hi=12.0, n_grid=101, tol=1e-7):
    """Minimize C(c, eta, T, eps) over c in [c_lo, c_hi]; returns (c_star, C_star)."""
    if not 2.0 <= c_lo < c_hi:
        raise DomainError("need 2 ≤ c_lo < c_hi")
    return grid_then_golden(lambda c: dh_constant(c, eta, T, eps), c_lo, c_hi, n_grid, tol=tol)


def optimize_c_real(eta, eps=DEFAULT_EPS, c_lo=2.0, c_hi=12.0, tol=1e-7):
    """Minimize C'(c, eta, eps) over c; C' depends on c only through a smooth formula."""
    if not 2.0 <= c_lo < c_hi:
        raise DomainError("need 2 ≤ c_lo < c_hi")
    return golden_section(lambda c: dh_constant_real(c, eta, eps), c_lo, c_hi, tol=tol)


# Inequalities used in the proofs, returned as (smaller, larger) so callers
# can check them on samples.

def bdd_sides(c, t, beta1, j):
    """|(c+it-1)^{-2j} - (c+it-beta1)^{-2j}| and 2j(1-beta1)/(c-1)^{2j+1}."""
    s = complex(c, t)
    lhs = abs((s - 1.0) ** (-2 * j) - (s - beta1) ** (-2 * j))
    rhs = 2.0 * j * (1.0 - beta1) / (c - 1.0) ** (2 * j + 1)
    return lhs, rhs


def trivialzeros_sides(c, gamma, omega, j):
    """The chain -Re (c+i gamma-omega)^{-2j} <= ((c-omega)^2+gamma^2)^{-j} <= (c-omega)^{-2j}."""
    lo = -((complex(c - omega, gamma)) ** (-2 * j)).real
    mid = ((c - omega) ** 2 + gamma ** 2) ** (-j)
    hi = (c - omega) ** (-2 * j)
    return lo, mid, hi


def cd_sides(c, eta, beta):
    """(d - beta)^2 and (c - beta)^2 + A."""
    d, A_cal = derived_geometry(c, eta)
    return (d - beta) ** 2, (c - beta) ** 2 + A_cal
