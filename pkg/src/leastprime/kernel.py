"""The damped Fejer polynomial P(r, theta) and grid certificates of its lower bounds.

    P(r, theta) = sum_{j=1}^{J} (1 - j/(J+1)) r^j cos(j theta),   0 <= r <= 1.

1 + 2 P(1, theta) is Fejer's kernel, so P(1, .) >= -1/2.  Because 1 + 2P is a
nonnegative harmonic function on the unit disc with value 1 at the origin,
Harnack's inequality gives the sharper P(r, theta) >= -r/(1+r).  The scans here
check those bounds on finite (r, theta) grids.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError, SingularityError

DEFAULT_R_STEPS = 512
DEFAULT_THETA_STEPS = 1024


def _check_degree(J):
    if int(J) != J or J < 1:
        raise DomainError("kernel degree J must be a positive integer")
    return int(J)


def _weights(J):
    j = np.arange(1, J + 1, dtype=float)
    return j, 1.0 - j / (J + 1.0)


def kernel_P(J, r, theta):
    """Evaluate P(r, theta) by direct partial summation.

    ``r`` and ``theta`` may be scalars or broadcastable arrays.
    """
    J = _check_degree(J)
    r_arr = np.asarray(r, dtype=float)
    if np.any((r_arr < 0.0) | (r_arr > 1.0)):
        raise DomainError("r must lie in [0, 1]")
    th = np.asarray(theta, dtype=float)
    j, w = _weights(J)
    shape = np.broadcast(r_arr, th).shape
    rr = np.broadcast_to(r_arr, shape)[..., None]
    tt = np.broadcast_to(th, shape)[..., None]
    out = np.sum(w * rr ** j * np.cos(j * tt), axis=-1)
    return float(out) if out.ndim == 0 else out


def _grid(r_steps, theta_steps):
    if r_steps < 2 or theta_steps < 2:
        raise DomainError("grid densities must be at least 2")
    r = np.linspace(0.0, 1.0, int(r_steps) + 1)
    theta = 2.0 * math.pi * np.arange(int(theta_steps)) / theta_steps
    return r, theta


def kernel_grid(J, r, theta):
    """P on the outer product grid r x theta, as a (len(r), len(theta)) array."""
    J = _check_degree(J)
    j, w = _weights(J)
    radial = w[None, :] * np.asarray(r, dtype=float)[:, None] ** j[None, :]
    angular = np.cos(np.outer(j, np.asarray(theta, dtype=float)))
    return radial @ angular


def harnack_margin(J, r_steps=DEFAULT_R_STEPS, theta_steps=DEFAULT_THETA_STEPS):
    """min over the grid of P(r, theta) + r/(1+r); nonnegative up to rounding."""
    r, theta = _grid(r_steps, theta_steps)
    P = kernel_grid(J, r, theta)
    return float(np.min(P + (r / (1.0 + r))[:, None]))


def lmo_margin(J, r_steps=DEFAULT_R_STEPS, theta_steps=DEFAULT_THETA_STEPS):
    """Same scan against the older bound P >= -min(3r/2, 1/2)."""
    r, theta = _grid(r_steps, theta_steps)
    P = kernel_grid(J, r, theta)
    return float(np.min(P + np.minimum(1.5 * r, 0.5)[:, None]))


def boundary_margin(J, theta_steps=DEFAULT_THETA_STEPS):
    """min over theta of P(1, theta) + 1/2."""
    _, theta = _grid(2, theta_steps)
    return float(np.min(kernel_grid(J, np.array([1.0]), theta)) + 0.5)


def fejer_closed_form(J, theta):
    """(1/(J+1)) (sin((J+1)theta/2) / sin(theta/2))^2, with value J+1 at theta = 0 mod 2pi."""
    J = _check_degree(J)
    # reduce to (-pi, pi] so sin((J+1) theta/2) never sees a large argument
    theta = math.remainder(theta, 2.0 * math.pi)
    half = math.sin(theta / 2.0)
    if half == 0.0:
        return float(J + 1)
    return (math.sin((J + 1) * theta / 2.0) / half) ** 2 / (J + 1)


def fejer_residual(J, theta):
    """|1 + 2 P(1, theta) - Fejer kernel| away from the singular points."""
    J = _check_degree(J)
    if math.remainder(theta, 2.0 * math.pi) == 0.0:
        raise SingularityError("closed form is singular at theta = 0 mod 2pi; use J+1")
    return abs(1.0 + 2.0 * kernel_P(J, 1.0, theta) - fejer_closed_form(J, theta))
