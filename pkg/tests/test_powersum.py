import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from leastprime.errors import DomainError, TheoremViolation
from leastprime.powersum import (
    MAX_TERMS,
    PowerSumInstance,
    find_witness,
    kernel_weighted_sum,
    kernel_weighted_sum_via_P,
    mass_M,
    normalized_power_sums,
    power_sum_sj,
    random_instance,
    turan_threshold,
    witness_range,
)


def inst(terms, eps=0.1):
    return PowerSumInstance.from_terms(terms, eps)


def test_power_sum_examples():
    assert power_sum_sj(inst([(1, 1)]), 3) == 1
    assert abs(power_sum_sj(inst([(1, 1), (1, 1j)]), 2)) < 1e-15
    assert power_sum_sj(inst([(1, 1), (1, -1)]), 1) == 0


def test_mass_examples():
    assert mass_M(inst([(1, 1)])) == 0.5
    for th in (0.0, 1.0, 3.0):
        assert mass_M(inst([(1, 1), (1, cmath.exp(1j * th))])) == pytest.approx(1.0, abs=1e-15)
    assert mass_M(inst([(1, 1), (1, 0.5 * cmath.exp(0.4j))])) == pytest.approx(1 / 2 + 0.5 / 1.5)


def test_witness_examples():
    c = find_witness(inst([(1, 1)]))
    assert (c.j, c.s_j_real, c.J_max) == (1, 1.0, 4)
    assert c.threshold == pytest.approx(0.1 / 32.4)
    c = find_witness(inst([(1, 1), (1, -1)]))
    assert (c.j, c.J_max) == (2, 8)
    assert c.s_j_real == pytest.approx(2.0)


def test_witness_scale_invariance_example():
    base = inst([(1, 1), (1, -1), (0.5, 0.3j)])
    assert find_witness(base.scaled(3.0)).j == find_witness(base).j


def test_threshold_formula():
    assert turan_threshold(0.5, 2.0) == pytest.approx(2.0 * 0.5 / 34.0)


def test_normalized_sums_match_direct():
    rng_inst = random_instance(11, 30, 0.3)
    s = normalized_power_sums(rng_inst, 6)
    r1 = np.abs(rng_inst.z)[0]
    for j in range(1, 7):
        assert s[j - 1] == pytest.approx(power_sum_sj(rng_inst, j) / r1 ** j, rel=1e-12, abs=1e-12)


def test_random_instance_determinism_and_edges():
    a, b = random_instance(0, 10), random_instance(0, 10)
    assert np.array_equal(a.z, b.z) and np.array_equal(a.b, b.b)
    single = random_instance(1, 1)
    assert len(single.b) == 1 and mass_M(single) == 0.5
    big = random_instance(2, MAX_TERMS)
    assert 1 <= len(big.b) <= MAX_TERMS
    with pytest.raises(DomainError):
        random_instance(0, MAX_TERMS + 1)


@pytest.mark.parametrize("eps", [0.01, 0.1, 0.5, 0.99])
def test_theorem_on_random_instances(eps):
    for seed in range(250):
        cert = find_witness(random_instance(seed, 256, eps))
        assert 1 <= cert.j <= cert.J_max
        assert cert.s_j_real >= cert.threshold


def test_theorem_with_real_weights():
    for seed in range(300):
        cert = find_witness(random_instance(10_000 + seed, 128, 0.2, unit_weights=False))
        assert cert.s_j_real >= cert.threshold


@pytest.mark.parametrize("lam", [0.5, 2.0, 10.0])
def test_homogeneity(lam):
    for seed in range(100):
        base = random_instance(500 + seed, 64, 0.1)
        scaled = base.scaled(lam)
        assert mass_M(scaled) == pytest.approx(mass_M(base), rel=1e-12)
        assert find_witness(scaled).j == find_witness(base).j


def test_proof_step_chain():
    # kernel-weighted sum >= b_1((J+1)/4 - 2M) and <= J max_j Re s_j, J = floor((8+eps)M)
    for seed in range(300):
        p = random_instance(900 + seed, 64, 0.1, unit_weights=seed % 2 == 0)
        J = witness_range(p)
        M = mass_M(p)
        K = kernel_weighted_sum(p, J)
        assert K == pytest.approx(kernel_weighted_sum_via_P(p, J), rel=1e-9, abs=1e-9)
        assert K >= p.b[0] * ((J + 1) / 4.0 - 2.0 * M) - 1e-9
        smax = float(np.max(normalized_power_sums(p, J).real))
        assert K <= J * smax + 1e-9


def test_violation_carries_payload(monkeypatch):
    # no real instance violates the bound, so raise the threshold artificially
    import leastprime.powersum as ps

    monkeypatch.setattr(ps, "turan_threshold", lambda eps, b1=1.0: 10.0)
    with pytest.raises(TheoremViolation) as info:
        find_witness(inst([(1, 1)], eps=0.5))
    assert info.value.payload["b"] == [1.0]


@pytest.mark.parametrize(
    "terms, eps",
    [
        ([(1, 1), (1, 2)], 0.1),
        ([(0, 1)], 0.1),
        ([(1, 0)], 0.1),
        ([(1, 1), (-1, 0.5)], 0.1),
        ([(1, 1)], 0.0),
        ([(1, 1)], 1.0),
    ],
)
def test_invalid_instances(terms, eps):
    with pytest.raises(DomainError):
        inst(terms, eps)


@settings(max_examples=100, deadline=None)
@given(
    st.lists(st.tuples(st.floats(0.0, 3.0), st.floats(0.0, 1.0), st.floats(0.0, 2 * math.pi)),
             min_size=0, max_size=20),
    st.floats(0.01, 0.99),
    st.floats(0.0, 2 * math.pi),
)
def test_theorem_property(rest, eps, th1):
    b = np.array([1.0] + [x[0] for x in rest])
    z = np.array([cmath.exp(1j * th1)] + [r * cmath.exp(1j * t) for _, r, t in rest])
    mod = np.abs(z)
    z[mod > mod[0]] *= mod[0] / mod[mod > mod[0]] * (1 - 2.0 ** -50)
    cert = find_witness(PowerSumInstance(b, z, eps))
    assert cert.s_j_real >= cert.threshold
