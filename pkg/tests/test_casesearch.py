import json
import math
from dataclasses import replace

import numpy as np
import pytest

from leastprime.casesearch import (
    CASE_TABLE,
    REFERENCE_EXTREMELY_SMALL,
    REFERENCE_VERY_SMALL,
    ExtremelySmallConfig,
    Scenario,
    VerySmallConfig,
    case_table_B,
    check_extremely_small,
    check_very_small,
    classify_lambda1,
    config_from_dict,
    error_envelopes,
    levels_from_optimizer,
    load_config,
    minimize_B,
    parse_config_text,
)
from leastprime.errors import ConfigError, DomainError, NoFeasiblePoint
from leastprime.weights import WeightParams

B_LABEL = "(1 + 1/200) C_1 + 2uv < B"


def desk_margins(u=0.53, v=1.001, B=15.72, C0=14.144, Ts=(4.6, 10.0, 130.0), Cs=(14.58, 15.50, 20.21)):
    """Plain arithmetic of the extremely-small system, written out by hand."""
    uv2 = 2 * u * v
    return {
        "a": Ts[2] - 2 / u * math.exp(C0 / (4 * v)),
        "b": B - (1.005 * Cs[0] + uv2),
        "c": Cs[1] + uv2 - B,
        "d2": B - ((1 - 4 * v / C0 * math.log(u * Ts[0] / 2)) * Cs[1] + uv2),
        "d3": B - ((1 - 4 * v / C0 * math.log(u * Ts[1] / 2)) * Cs[2] + uv2),
    }


def test_very_small_reference_point():
    rep = check_very_small(REFERENCE_VERY_SMALL)
    assert rep.feasible and rep.case == "2.(ii)"
    (c,) = rep.constraints
    assert c.rhs == pytest.approx(12.27175, abs=1e-5)
    assert not check_very_small(replace(REFERENCE_VERY_SMALL, B=12.46)).feasible


def test_very_small_equality_is_infeasible():
    rep = check_very_small(VerySmallConfig(ell=1, A=0.5, B=13.25, C=12.25))
    assert rep.constraints[0].margin == 0.0
    assert not rep.feasible


def test_extremely_small_reference_point():
    rep = check_extremely_small(REFERENCE_EXTREMELY_SMALL)
    assert rep.feasible and len(rep.constraints) == 7
    m = desk_margins()
    assert rep["T_J > (2/u) exp(C0/(4v))"].margin == pytest.approx(m["a"], abs=1e-12)
    assert rep[B_LABEL].margin == pytest.approx(m["b"], abs=1e-12)
    assert rep["B < C_2 + 2uv"].margin == pytest.approx(m["c"], abs=1e-12)
    d = [c for c in rep.constraints if c.name.startswith("(1 - (4v/C0)")]
    assert d[0].margin == pytest.approx(m["d2"], abs=1e-12)
    assert d[1].margin == pytest.approx(m["d3"], abs=1e-12)
    # left-hand sides at the quoted precision
    assert rep["T_J > (2/u) exp(C0/(4v))"].lhs == pytest.approx(129.09, abs=0.01)
    assert rep[B_LABEL].lhs == pytest.approx(15.7143, abs=1e-3)
    assert d[0].lhs == pytest.approx(15.692, abs=1e-3)


def test_extremely_small_B_1570_fails_b():
    rep = check_extremely_small(replace(REFERENCE_EXTREMELY_SMALL, B=15.70))
    assert not rep.feasible
    assert B_LABEL in rep.failed()


def test_extremely_small_with_optimizer_levels():
    levels = levels_from_optimizer((4.6, 10.0, 130.0))
    for (T, C), expected in zip(levels, (14.58, 15.50, 20.21)):
        assert C == pytest.approx(expected, abs=0.01)
    assert check_extremely_small(replace(REFERENCE_EXTREMELY_SMALL, levels=levels)).feasible


@pytest.mark.parametrize(
    "kw",
    [
        {"u": 1.0},
        {"u": 0.0},
        {"v": 1.0},
        {"levels": ()},
        {"levels": ((10.0, 15.0), (4.6, 16.0))},
        {"levels": ((4.6, 16.0), (10.0, 15.0))},
        {"levels": ((0.5, 14.0),)},
    ],
)
def test_extremely_small_config_errors(kw):
    with pytest.raises(ConfigError):
        replace(REFERENCE_EXTREMELY_SMALL, **kw)


def test_very_small_config_errors():
    with pytest.raises(ConfigError):
        VerySmallConfig(ell=0, A=0.1, B=1.0)
    with pytest.raises(ConfigError):
        VerySmallConfig(ell=10, A=0.1, B=2.0)


def test_minimize_extremely_small():
    grid = {"u": (0.4, 0.7, 0.01), "v": (1.0005, 1.2, 0.005), "B": (14.0, 17.0, 0.005)}
    best, rep = minimize_B(REFERENCE_EXTREMELY_SMALL, grid)
    assert rep.feasible and best.B <= 15.72


def test_minimize_very_small():
    best, rep = minimize_B(REFERENCE_VERY_SMALL, {"A_inv": (500, 2000, 1), "B": (12.0, 13.0, 0.01)})
    assert rep.feasible and best.B <= 12.48
    assert best.ell == 101


def test_minimize_empty():
    with pytest.raises(NoFeasiblePoint):
        minimize_B(REFERENCE_EXTREMELY_SMALL, {"B": (14.0, 14.5, 0.01)})
    with pytest.raises(NoFeasiblePoint):
        minimize_B(REFERENCE_VERY_SMALL, {"B": (12.22, 12.26, 0.01)})
    with pytest.raises(DomainError):
        minimize_B(REFERENCE_VERY_SMALL, {"A": (0.001, 0.002, 0.0005)})


def _random_extreme(rng):
    C1 = rng.uniform(12, 16)
    levels = ((rng.uniform(1, 6), C1), (rng.uniform(6, 20), C1 + rng.uniform(0, 2)),
              (rng.uniform(20, 300), C1 + rng.uniform(2, 8)))
    return ExtremelySmallConfig(u=rng.uniform(0.2, 0.9), v=rng.uniform(1.0001, 1.5),
                                B=rng.uniform(12, 22), levels=levels)


def test_report_consistency():
    rng = np.random.default_rng(31)
    for _ in range(200):
        rep = check_extremely_small(_random_extreme(rng))
        assert rep.feasible == all(c.passed for c in rep.constraints)
        assert all(c.passed == (c.lhs < c.rhs) for c in rep.constraints)


def test_monotone_in_B():
    rng = np.random.default_rng(32)
    found = 0
    base = REFERENCE_EXTREMELY_SMALL
    for _ in range(2000):
        cfg = replace(base, u=rng.uniform(0.45, 0.6), v=rng.uniform(1.0001, 1.05),
                      B=rng.uniform(15.6, 16.5))
        if not check_extremely_small(cfg).feasible:
            continue
        found += 1
        upper = cfg.levels[1][1] + 2 * cfg.u * cfg.v
        for B2 in np.linspace(cfg.B, upper, 7)[1:-1]:
            assert check_extremely_small(replace(cfg, B=float(B2))).feasible
    assert found > 20


def _reference_scenario(L, R1=50.0):
    return Scenario(Lcal=L, lambda1=1e-3, weight=WeightParams(101, 1 / 970, 12.48), Tstar=1.0,
                    R_levels=(R1,))


def test_envelope_examples():
    ln = error_envelopes(_reference_scenario(1e4))
    gap = 12.48 - 202 / 970
    assert ln[0] == pytest.approx(math.log(970 * 1e8) - gap * 5000, abs=1e-6)
    assert ln[0] == pytest.approx(-61333.5, abs=0.5)
    assert ln[1] == pytest.approx(math.log(1e4) + 202 * math.log(2 * 970 / 1e4), abs=1e-9)
    assert ln[1] == pytest.approx(-322.05, abs=0.01)
    assert ln[5] == -math.inf


def test_envelopes_decrease_in_L():
    a = error_envelopes(_reference_scenario(1e4))
    b = error_envelopes(_reference_scenario(2e4))
    assert all(y < x for x, y in zip(a[:4], b[:4]))
    # with R_1 fixed, E5 = min((2/A)^{2l}, L) e^{-gap R_1} grows like L on the log branch
    assert b[4] - a[4] == pytest.approx(math.log(2.0), abs=1e-9)
    s3 = [Scenario(Lcal=L, lambda1=1e-300, weight=WeightParams(101, 1 / 970, 12.48), Tstar=130.0,
                   R_levels=(50.0, 200.0, 800.0), T_levels=(4.6, 10.0, 130.0)) for L in (1e4, 2e4)]
    assert error_envelopes(s3[1])[5] < error_envelopes(s3[0])[5]


def test_envelope_multi_level():
    s = Scenario(Lcal=1e4, lambda1=1e-300, weight=WeightParams(101, 1 / 970, 12.48), Tstar=130.0,
                 R_levels=(50.0, 200.0, 800.0), T_levels=(4.6, 10.0, 130.0))
    assert s.J == 3 and math.isfinite(error_envelopes(s)[5])


def test_scenario_errors():
    w = WeightParams(1, 0.1, 1.0)
    with pytest.raises(DomainError):
        Scenario(0.5, 0.0, w, 1.0, (1.0,))
    with pytest.raises(DomainError):
        Scenario(10.0, 0.0, w, 1.0, (20.0,))
    with pytest.raises(DomainError):
        Scenario(10.0, 0.0, w, 2.0, (2.0, 3.0), (1.0, 1.5))


def test_bound_chain_parametrization():
    u, v = 0.53, 1.001
    for L in (1e3, 1e4, 1e5):
        ell = math.ceil(v * L)
        A = u / L
        assert u * v <= A * ell < u * v + u / L + 1e-15


def test_classify_lambda1():
    assert classify_lambda1(0.5, 100.0) == "1"
    assert classify_lambda1(0.06, 100.0) == "2.(i)"
    assert classify_lambda1(1e-10, 100.0) == "2.(ii)"
    assert classify_lambda1(1e-300, 100.0) == "2.(ii)"  # 100^-200 = 1e-400
    assert classify_lambda1(1e-300, 10.0) == "2.(iii)"


def test_case_table():
    assert case_table_B() == {"1": 7.41, "2.(i)": 2.63, "2.(ii)": 12.48, "2.(iii)": 15.72}
    assert [row[0] for row in CASE_TABLE] == ["1", "2.(i)", "2.(ii)", "2.(iii)"]


def test_config_parsing(tmp_path):
    text = "# comment\nu = 0.53\nv = 1.001  # trailing\nB = 15.72\nlevels = [[4.6, 14.58], [10, 15.5], [130, 20.21]]\n"
    cfg = config_from_dict("extremely-small", parse_config_text(text))
    assert cfg == REFERENCE_EXTREMELY_SMALL
    path = tmp_path / "vs.json"
    path.write_text(json.dumps(REFERENCE_VERY_SMALL.to_dict()))
    assert load_config("very-small", path) == REFERENCE_VERY_SMALL
    with pytest.raises(ConfigError):
        parse_config_text("u 0.5")
    with pytest.raises(ConfigError):
        config_from_dict("very-small", {"ell": 1})
    with pytest.raises(ConfigError):
        config_from_dict("other", {})
