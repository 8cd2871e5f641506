"""Weighted power sums s_j = sum_n b_n z_n^j and a witness search for the Turan bound.

For a finite instance with |z_n| <= |z_1|, z_1 != 0, b_n >= 0 and b_1 > 0, put

    M = b_1^{-1} sum_n b_n |z_n| / (|z_1| + |z_n|).

Some 1 <= j <= (8 + eps) M satisfies Re(s_j) >= b_1 eps / (32 + 4 eps) |z_1|^j.
:func:`find_witness` scans j upward and returns the first such index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, TheoremViolation
from .kernel import kernel_P

MAX_TERMS = 10_000


@dataclass(frozen=True)
class PowerSumInstance:
    b: np.ndarray
    z: np.ndarray
    epsilon: float

    def __post_init__(self):
        b = np.asarray(self.b, dtype=float)
        z = np.asarray(self.z, dtype=complex)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "z", z)
        if b.ndim != 1 or b.shape != z.shape:
            raise DomainError("b and z must be 1-d arrays of equal length")
        if not 1 <= len(b) <= MAX_TERMS:
            raise DomainError(f"instance must have between 1 and {MAX_TERMS} terms")
        if not 0.0 < self.epsilon < 1.0:
            raise DomainError("epsilon must lie in (0, 1)")
        if np.any(b < 0.0) or b[0] <= 0.0:
            raise DomainError("weights must be nonnegative with b_1 > 0")
        if z[0] == 0:
            raise DomainError("z_1 must be nonzero")
        mod = np.abs(z)
        if np.any(mod > mod[0]):
            raise DomainError("|z_n| <= |z_1| is required for every n")

    @classmethod
    def from_terms(cls, terms, epsilon):
        b, z = zip(*terms)
        return cls(np.array(b, dtype=float), np.array(z, dtype=complex), epsilon)

    def scaled(self, lam):
        """Same instance with every z_n multiplied by ``lam``.

        Terms tied with |z_1| can gain an ulp under multiplication; they are
        pulled back onto the circle.
        """
        z = self.z * lam
        mod = np.abs(z)
        over = mod > mod[0]
        z[over] *= mod[0] / mod[over] * (1.0 - 2.0 ** -50)
        return PowerSumInstance(self.b, z, self.epsilon)

    def to_dict(self):
        return {
            "epsilon": self.epsilon,
            "b": self.b.tolist(),
            "z": [[v.real, v.imag] for v in self.z.tolist()],
        }


@dataclass(frozen=True)
class WitnessCertificate:
    """Witness index j.

    ``s_j_real`` and ``threshold`` are both divided by |z_1|^j so that
    certificates for large or tiny instances stay finite.
    """

    j: int
    s_j_real: float
    threshold: float
    M: float
    J_max: int


def power_sum_sj(inst: PowerSumInstance, j: int) -> complex:
    if j < 1:
        raise DomainError("j must be a positive integer")
    return complex(np.sum(inst.b * inst.z ** j))


def mass_M(inst: PowerSumInstance) -> float:
    mod = np.abs(inst.z)
    return float(np.sum(inst.b * mod / (mod[0] + mod)) / inst.b[0])


def turan_threshold(epsilon, b1=1.0):
    return b1 * epsilon / (32.0 + 4.0 * epsilon)


def witness_range(inst: PowerSumInstance) -> int:
    """J = floor((8 + eps) M), the last index the search may use."""
    return math.floor((8.0 + inst.epsilon) * mass_M(inst))


def normalized_power_sums(inst: PowerSumInstance, J: int) -> np.ndarray:
    """s_j / |z_1|^j for j = 1..J, computed by repeated multiplication."""
    w = inst.z / np.abs(inst.z)[0]
    cur = w.copy()
    out = np.empty(J, dtype=complex)
    for k in range(J):
        out[k] = np.sum(inst.b * cur)
        cur *= w
    return out


def find_witness(inst: PowerSumInstance) -> WitnessCertificate:
    M = mass_M(inst)
    J_max = math.floor((8.0 + inst.epsilon) * M)
    threshold = float(turan_threshold(inst.epsilon, inst.b[0]))
    w = inst.z / np.abs(inst.z)[0]
    cur = w.copy()
    for j in range(1, J_max + 1):
        s = float(np.sum(inst.b * cur.real))
        if s >= threshold:
            return WitnessCertificate(j=j, s_j_real=s, threshold=threshold, M=M, J_max=J_max)
        cur *= w
    raise TheoremViolation(
        f"no j in [1, {J_max}] with Re(s_j) >= {threshold!r} |z_1|^j",
        payload=inst.to_dict(),
    )


def random_instance(seed: int, max_terms: int, epsilon=0.1, unit_weights=True) -> PowerSumInstance:
    """Deterministic synthetic instance.

    The term count is uniform on [1, max_terms].  A quarter of the draws are
    rotated n-th roots of unity (s_j vanishes unless n divides j); otherwise
    roughly a third of the later terms sit on the circle |z| = |z_1| and the
    rest have modulus |z_1| * U^2.
    """
    if not 1 <= max_terms <= MAX_TERMS:
        raise DomainError(f"max_terms must lie in [1, {MAX_TERMS}]")
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, max_terms + 1))
    radius = float(rng.uniform(0.5, 2.0))
    angles = rng.uniform(0.0, 2.0 * math.pi, size=n)
    moduli = radius * rng.uniform(0.0, 1.0, size=n) ** 2
    on_circle = rng.uniform(size=n) < 1.0 / 3.0
    moduli[on_circle] = radius
    moduli[0] = radius
    if rng.uniform() < 0.25:
        angles = angles[0] + 2.0 * math.pi * np.arange(n) / n
        moduli[:] = radius
    z = moduli * np.exp(1j * angles)
    # rounding can push on-circle terms one ulp past |z_1|
    mod = np.abs(z)
    over = mod > mod[0]
    z[over] *= mod[0] / mod[over] * (1.0 - 2.0 ** -50)
    if unit_weights:
        b = np.ones(n)
    else:
        b = rng.uniform(0.05, 2.0, size=n)
    return PowerSumInstance(b, z, epsilon)


def kernel_weighted_sum(inst: PowerSumInstance, J: int) -> float:
    """sum_{j<=J} (1 - j/(J+1)) Re(s_j)(1 + cos(j theta_1)) with |z_1| normalized to 1."""
    s = normalized_power_sums(inst, J)
    j = np.arange(1, J + 1)
    theta1 = float(np.angle(inst.z[0]))
    return float(np.sum((1.0 - j / (J + 1.0)) * s.real * (1.0 + np.cos(j * theta1))))


def kernel_weighted_sum_via_P(inst: PowerSumInstance, J: int) -> float:
    """The same quantity regrouped term by term through P(r, theta)."""
    mod = np.abs(inst.z)
    r = mod / mod[0]
    th = np.angle(inst.z)
    th1 = th[0]
    per_term = kernel_P(J, r, th) + 0.5 * kernel_P(J, r, th - th1) + 0.5 * kernel_P(J, r, th + th1)
    return float(np.sum(inst.b * per_term))
