"""Parameter checks for the two exceptional-zero cases and a grid search over B.

Very small case (L^-200 <= lambda_1 < eta~): the weight f_{l,A,B} works as
soon as B - 2Al > C, where C is the repulsion constant in force.

Extremely small case (lambda_1 < L^-200): with l = ceil(vL), A = u/L and
levels (T_j, C_j), j = 1..J, the requirements are

    T_J > (2/u) exp(C0/(4v)),
    (1 + 1/200) C_1 + 2uv < B,
    max_{2<=j<=J} (1 - (4v/C0) log(u T_{j-1}/2)) C_j + 2uv < B < C_2 + 2uv.

Every check assumes the asymptotic regime (d_L large); they are plain
inequalities on the supplied numbers.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from .errors import ConfigError, DomainError, NoFeasiblePoint
from .repulsion import DEFAULT_EPS, odlyzko_lhs, optimize_c
from .weights import WeightParams

__all__ = [
    "CASE_TABLE",
    "REFERENCE_EXTREMELY_SMALL",
    "REFERENCE_VERY_SMALL",
    "Constraint",
    "ExtremelySmallConfig",
    "FeasibilityReport",
    "Scenario",
    "VerySmallConfig",
    "check_extremely_small",
    "check_very_small",
    "classify_lambda1",
    "error_envelopes",
    "levels_from_optimizer",
    "load_config",
    "minimize_B",
    "odlyzko_lhs",
]

C0_DEFAULT = 14.144
VERY_SMALL_C = 12.262
LAMBDA_EXPONENT = 200

# (case, B from earlier work, B here); None where no new value is claimed
CASE_TABLE = (
    ("1", "non-exceptional", 7.41, None),
    ("2.(i)", "lambda_1 small", 2.63, None),
    ("2.(ii)", "lambda_1 very small", 36.5, 12.48),
    ("2.(iii)", "lambda_1 extremely small", 39.5, 15.72),
)


def case_table_B():
    """Best known B per case: the new value where there is one, else the earlier one."""
    return {case: (new if new is not None else old) for case, _, old, new in CASE_TABLE}


@dataclass(frozen=True)
class Constraint:
    name: str
    lhs: float
    rhs: float
    strict: bool
    passed: bool
    margin: float

    def to_dict(self):
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "strict": self.strict,
            "pass": self.passed,
            "margin": self.margin,
        }


def _less(name, lhs, rhs, strict=True):
    ok = lhs < rhs if strict else lhs <= rhs
    return Constraint(name, float(lhs), float(rhs), strict, bool(ok), float(rhs - lhs))


@dataclass(frozen=True)
class FeasibilityReport:
    case: str
    constraints: tuple
    note: str = "asymptotic regime assumed"

    @property
    def feasible(self):
        return all(c.passed for c in self.constraints)

    def failed(self):
        return [c.name for c in self.constraints if not c.passed]

    def __getitem__(self, name):
        for c in self.constraints:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self):
        return {
            "case": self.case,
            "feasible": self.feasible,
            "note": self.note,
            "constraints": [c.to_dict() for c in self.constraints],
        }


@dataclass(frozen=True)
class VerySmallConfig:
    ell: int
    A: float
    B: float
    C: float = VERY_SMALL_C

    def __post_init__(self):
        if int(self.ell) != self.ell or self.ell < 1:
            raise ConfigError("ell must be a positive integer")
        if not (self.A > 0.0 and self.B > 0.0 and self.C > 0.0):
            raise ConfigError("A, B and C must be positive")
        if not self.B > 2.0 * self.A * self.ell:
            raise ConfigError("B > 2 A ell is required")

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class ExtremelySmallConfig:
    u: float
    v: float
    B: float
    levels: tuple
    C0: float = C0_DEFAULT
    lambda_exponent: float = LAMBDA_EXPONENT

    def __post_init__(self):
        if not 0.0 < self.u < 1.0:
            raise ConfigError("u must lie in (0, 1)")
        if not self.v > 1.0:
            raise ConfigError("v must exceed 1")
        if not self.C0 > 0.0:
            raise ConfigError("C0 must be positive")
        if not self.lambda_exponent > 0:
            raise ConfigError("lambda_exponent must be positive")
        levels = tuple((float(T), float(C)) for T, C in self.levels)
        object.__setattr__(self, "levels", levels)
        if not levels:
            raise ConfigError("at least one level (T_1, C_1) is required")
        Ts = [T for T, _ in levels]
        Cs = [C for _, C in levels]
        if Ts[0] < 1.0:
            raise ConfigError("T_1 must be ≥ 1")
        if any(b <= a for a, b in zip(Ts, Ts[1:])):
            raise ConfigError("T_j must be strictly increasing")
        if any(b < a for a, b in zip(Cs, Cs[1:])):
            raise ConfigError("C_j must be nondecreasing")
        if any(C <= 0.0 for C in Cs):
            raise ConfigError("C_j must be positive")

    @property
    def J(self):
        return len(self.levels)

    def to_dict(self):
        d = asdict(self)
        d["levels"] = [list(x) for x in self.levels]
        return d


def check_very_small(cfg: VerySmallConfig) -> FeasibilityReport:
    gap = cfg.B - 2.0 * cfg.A * cfg.ell
    return FeasibilityReport("2.(ii)", (_less("B - 2 A ell > C", cfg.C, gap),))


def check_extremely_small(cfg: ExtremelySmallConfig) -> FeasibilityReport:
    u, v, B, C0 = cfg.u, cfg.v, cfg.B, cfg.C0
    uv2 = 2.0 * u * v
    Ts = [T for T, _ in cfg.levels]
    Cs = [C for _, C in cfg.levels]
    out = [
        _less("T_J > (2/u) exp(C0/(4v))", (2.0 / u) * math.exp(C0 / (4.0 * v)), Ts[-1]),
        _less(f"(1 + 1/{cfg.lambda_exponent:g}) C_1 + 2uv < B",
              (1.0 + 1.0 / cfg.lambda_exponent) * Cs[0] + uv2, B),
        _less("C0 + 2uv < B", C0 + uv2, B),
    ]
    if cfg.J >= 2:
        out.append(_less("B < C_2 + 2uv", B, Cs[1] + uv2))
        out.append(_less("T_1 > 2/u", 2.0 / u, Ts[0]))
        for j in range(2, cfg.J + 1):
            factor = 1.0 - (4.0 * v / C0) * math.log(u * Ts[j - 2] / 2.0)
            out.append(_less(f"(1 - (4v/C0) log(u T_{j-1}/2)) C_{j} + 2uv < B",
                             factor * Cs[j - 1] + uv2, B))
    return FeasibilityReport("2.(iii)", tuple(out))


def levels_from_optimizer(T_values, eta=0.5, eps=DEFAULT_EPS, c_lo=2.0, c_hi=16.0):
    """(T_j, C_j) pairs with C_j minimized over c at each T_j."""
    return tuple((float(T), optimize_c(eta, T, eps, c_lo, c_hi)[1]) for T in T_values)


def _grid_values(spec):
    """(lo, hi, step) -> array of grid points, rounded so that decimal steps land exactly."""
    if np.ndim(spec) == 0:
        return np.array([float(spec)])
    if len(spec) != 3:
        return np.array([float(x) for x in spec])
    lo, hi, step = (float(x) for x in spec)
    if step <= 0.0 or hi < lo:
        raise DomainError("grid ranges need step > 0 and hi ≥ lo")
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return np.round(lo + step * np.arange(n), 12)


def _minimize_extremely_small(template: ExtremelySmallConfig, grid):
    us = _grid_values(grid.get("u", template.u))
    vs = _grid_values(grid.get("v", template.v))
    Bs = _grid_values(grid["B"])
    Ts = np.array([T for T, _ in template.levels])
    Cs = np.array([C for _, C in template.levels])
    C0 = template.C0
    U, V, BB = np.meshgrid(us, vs, Bs, indexing="ij")
    uv2 = 2.0 * U * V
    ok = (0.0 < U) & (U < 1.0) & (V > 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        ok &= (2.0 / U) * np.exp(C0 / (4.0 * V)) < Ts[-1]
        ok &= (1.0 + 1.0 / template.lambda_exponent) * Cs[0] + uv2 < BB
        ok &= C0 + uv2 < BB
        if len(Ts) >= 2:
            ok &= BB < Cs[1] + uv2
            ok &= 2.0 / U < Ts[0]
            for j in range(2, len(Ts) + 1):
                factor = 1.0 - (4.0 * V / C0) * np.log(U * Ts[j - 2] / 2.0)
                ok &= factor * Cs[j - 1] + uv2 < BB
    if not ok.any():
        raise NoFeasiblePoint("no grid point satisfies the extremely-small constraints")
    idx = np.argwhere(ok)
    # minimal B, ties broken on (u, v)
    keys = sorted(idx.tolist(), key=lambda k: (Bs[k[2]], us[k[0]], vs[k[1]]))
    # the scalar check is authoritative; skip points lost to last-ulp differences
    for i, jv, kb in keys:
        best = replace(template, u=float(us[i]), v=float(vs[jv]), B=float(Bs[kb]))
        report = check_extremely_small(best)
        if report.feasible:
            return best, report
    raise NoFeasiblePoint("no grid point satisfies the extremely-small constraints")


def _minimize_very_small(template: VerySmallConfig, grid):
    if "A_inv" in grid:
        As = 1.0 / _grid_values(grid["A_inv"])
    else:
        As = _grid_values(grid.get("A", template.A))
    Bs = _grid_values(grid["B"])
    ells = _grid_values(grid.get("ell", template.ell)).astype(int)
    best = None
    for ell in ells:
        for A in As:
            gap_ok = Bs - 2.0 * A * ell > template.C
            if not gap_ok.any():
                continue
            B = float(Bs[np.argmax(gap_ok)])
            key = (B, float(A), int(ell))
            if best is None or key < best:
                best = key
    if best is None:
        raise NoFeasiblePoint("no grid point satisfies B - 2 A ell > C")
    B, A, ell = best
    cfg = replace(template, ell=ell, A=A, B=B)
    return cfg, check_very_small(cfg)


def minimize_B(template, grid):
    """Exhaustive grid scan for the smallest admissible B.

    ``grid`` maps parameter names to (lo, hi, step) triples or explicit
    lists; ``B`` is required.  Extremely-small grids take ``u``, ``v``;
    very-small grids take ``A`` or ``A_inv`` (scanned as A = 1/k) and ``ell``.
    Parameters absent from the grid keep the template's value.
    """
    if "B" not in grid:
        raise DomainError("grid must include a B range")
    if isinstance(template, ExtremelySmallConfig):
        return _minimize_extremely_small(template, grid)
    if isinstance(template, VerySmallConfig):
        return _minimize_very_small(template, grid)
    raise DomainError("unknown configuration type")


@dataclass(frozen=True)
class Scenario:
    Lcal: float
    lambda1: float
    weight: WeightParams
    Tstar: float
    R_levels: tuple
    T_levels: tuple = field(default=())

    def __post_init__(self):
        R = tuple(float(r) for r in self.R_levels)
        T = tuple(float(t) for t in (self.T_levels or (self.Tstar,)))
        object.__setattr__(self, "R_levels", R)
        object.__setattr__(self, "T_levels", T)
        if not self.Lcal >= 1.0:
            raise DomainError("Lcal must be ≥ 1")
        if not self.Tstar >= 1.0:
            raise DomainError("T* must be ≥ 1")
        if not R or len(R) != len(T):
            raise DomainError("R_levels and T_levels must be nonempty and of equal length")
        if R[0] < 1.0 or R[-1] > self.Lcal or any(b < a for a, b in zip(R, R[1:])):
            raise DomainError("need 1 ≤ R_1 ≤ ... ≤ R_J ≤ L")
        if T[0] <= 0.0 or any(b < a for a, b in zip(T, T[1:])):
            raise DomainError("need 0 < T_1 ≤ ... ≤ T_J")
        if not math.isclose(T[-1], self.Tstar):
            raise DomainError("T_J must equal T*")
        if self.lambda1 < 0.0:
            raise DomainError("lambda_1 must be ≥ 0")

    @property
    def J(self):
        return len(self.R_levels)


def classify_lambda1(lambda1, Lcal, eta_tilde=0.05, exponent=LAMBDA_EXPONENT):
    """Which exceptional-zero case lambda_1 falls in; compared in log scale."""
    if lambda1 <= 0.0:
        raise DomainError("lambda_1 must be positive")
    if lambda1 >= 1.0 / 12.74:
        return "1"
    if lambda1 >= eta_tilde:
        return "2.(i)"
    if math.log(lambda1) >= -exponent * math.log(Lcal):
        return "2.(ii)"
    return "2.(iii)"


def error_envelopes(s: Scenario):
    """Natural logs of the six error terms with all implied constants set to 1.

    E6 is -inf when J = 1 (the sum over j = 2..J is empty).
    """
    p = s.weight
    L, A, ell = s.Lcal, p.A, p.ell
    gap = p.shift
    two_ell = 2 * ell
    logL = math.log(L)
    lnE1 = -math.log(A) + 2.0 * logL - gap * L / 2.0
    lnE2 = logL + two_ell * math.log(2.0 / (A * s.Tstar * L))
    lnE3 = logL + two_ell * math.log(1.0 / (A * L)) - gap * L
    lnE4 = logL + two_ell * math.log(2.0 / (A * L)) - 1.5 * gap * L
    lnE5 = min(two_ell * math.log(2.0 / A), logL) - gap * s.R_levels[0]
    terms = [
        logL + two_ell * math.log(2.0 / (A * s.T_levels[j - 1] * L)) - gap * s.R_levels[j]
        for j in range(1, s.J)
    ]
    if terms:
        top = max(terms)
        lnE6 = top + math.log(sum(math.exp(t - top) for t in terms))
    else:
        lnE6 = -math.inf
    return lnE1, lnE2, lnE3, lnE4, lnE5, lnE6


def _parse_value(raw):
    raw = raw.strip()
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        return raw


def parse_config_text(text):
    """Parse a JSON object or ``key = value`` lines (``#`` starts a comment)."""
    stripped = text.strip()
    if stripped.startswith("{"):
        return json.loads(stripped)
    data = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, value = line.split("=", 1)
        data[key.strip()] = _parse_value(value)
    return data


def config_from_dict(case, data):
    try:
        if case == "very-small":
            return VerySmallConfig(ell=int(data["ell"]), A=float(data["A"]), B=float(data["B"]),
                                   C=float(data.get("C", VERY_SMALL_C)))
        if case == "extremely-small":
            return ExtremelySmallConfig(
                u=float(data["u"]), v=float(data["v"]), B=float(data["B"]),
                levels=tuple(tuple(x) for x in data["levels"]),
                C0=float(data.get("C0", C0_DEFAULT)),
                lambda_exponent=float(data.get("lambda_exponent", LAMBDA_EXPONENT)),
            )
    except KeyError as exc:
        raise ConfigError(f"missing key {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, DomainError):
            raise
        raise ConfigError(f"malformed config: {exc}") from None
    raise ConfigError(f"unknown case {case!r}")


def load_config(case, path):
    return config_from_dict(case, parse_config_text(Path(path).read_text()))


REFERENCE_VERY_SMALL = VerySmallConfig(ell=101, A=1.0 / 970.0, B=12.48, C=VERY_SMALL_C)
REFERENCE_EXTREMELY_SMALL = ExtremelySmallConfig(
    u=0.53, v=1.001, B=15.72, levels=((4.6, 14.58), (10.0, 15.50), (130.0, 20.21)), C0=C0_DEFAULT,
)
