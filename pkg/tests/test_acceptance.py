"""Exit criteria. Run ``pytest tests/test_acceptance.py`` for the pass/fail table."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kronwalk import analysis, verify
from kronwalk.graph import complete_graph, kron_complete
from kronwalk.reduce import kronecker_partition, reduce_hamiltonian
from kronwalk.walk import (
    SearchProblem,
    evolve,
    expected_energy,
    find_peak,
    probability_series,
    success_probability,
    uniform_state,
)

acceptance = pytest.mark.acceptance


def peak_detail(t, p, target):
    return f"t={t:.4f} (target {target}, rel {abs(t / target - 1):.2e}), p={p:.6f}"


def assert_peak(record_property, t, p, boundary, target, rtol, p_min):
    record_property("detail", peak_detail(t, p, target))
    assert not boundary
    assert abs(t / target - 1) <= rtol
    assert p >= p_min


@acceptance(1, "Grover peak on K_256, full space")
def test_grover_full_space(record_property):
    problem = SearchProblem(complete_graph(256), 0, 1 / 256)
    res = probability_series(problem, 2 * math.pi * 16, 512)
    assert res.propagator and res.N == 256
    assert_peak(record_property, res.peak_time, res.peak_probability, res.boundary_peak, 25.13, 5e-3, 0.999)


@acceptance(2, "K_256 (x) K_256 reduced, critical rate")
def test_second_order_reduced(record_property):
    gamma = analysis.critical_gamma(256, 2)
    assert gamma.formula_id == analysis.SRG
    problem = SearchProblem(kron_complete(256, 2), 0, gamma.value)
    t, p, boundary = find_peak(problem, 402.12, kronecker_partition(256, 2, materialize=False))
    assert_peak(record_property, t, p, boundary, 402.12, 0.02, 0.98)


@acceptance(3, "K_256^3 reduced, rate 1/255^3")
def test_third_order_reduced(record_property):
    problem = SearchProblem(kron_complete(256, 3), 0, 1 / 255**3)
    partition = kronecker_partition(256, 3, materialize=False)
    assert partition.num_cells == 4
    t, p, boundary = find_peak(problem, 6433.98, partition)
    assert_peak(record_property, t, p, boundary, 6433.98, 0.02, 0.98)


@acceptance(4, "K_4^6 full space, rate 1/729")
def test_sixth_order_full(record_property):
    problem = SearchProblem(kron_complete(4, 6), 0, 1 / 729)
    res = probability_series(problem, 2 * math.pi * 64, 512, method="chebyshev")
    assert res.N == 4096
    assert_peak(record_property, res.peak_time, res.peak_probability, res.boundary_peak, 100.53, 0.05, 0.9)


@acceptance(5, "quotient dynamics equal full dynamics")
def test_quotient_exactness(record_property):
    errs = {case: verify.quotient_discrepancy(*case, points=200) for case in verify.QUOTIENT_CASES}
    record_property("detail", ", ".join(f"K_{M}^{j}: {e:.1e}" for (M, j), e in errs.items()))
    assert max(errs.values()) <= 1e-8


@acceptance(6, "SRG parameters by brute force, M = 3..8")
def test_srg_oracle(record_property):
    checks = verify.check_srg(range(3, 9))
    record_property("detail", f"{sum(c.passed for c in checks)}/{len(checks)} match")
    assert len(checks) == 6 and all(c.passed for c in checks)


@acceptance(7, "third-order census by enumeration, M = 3..5")
def test_census_oracle(record_property):
    checks = verify.check_census(range(3, 6))
    record_property("detail", "; ".join(f"{c.name} {c.detail}" for c in checks))
    assert len(checks) == 3 and all(c.passed for c in checks)
    for M in range(3, 6):
        assert 1 + (M - 1) ** 3 + 3 * (M - 1) + 3 * (M - 1) ** 2 == M**3


@acceptance(8, "diameter 2, M = 3..6, j = 2..4, N <= 4096")
def test_diameter(record_property):
    checks = verify.check_diameter()
    record_property("detail", f"{len(checks)} graphs, all diameter 2: {all(c.passed for c in checks)}")
    assert {(M, j) for M, j in verify.diameter_cases()} == {
        (M, j) for M in range(3, 7) for j in range(2, 5) if M**j <= 4096
    }
    assert all(c.passed for c in checks)


@acceptance(9, "numerical gap of the 4x4 quotient vs 2/(sqrt(M)(M-3))")
def test_gap_cross_check(record_property):
    worst = []
    for M in (16, 64, 256, 1024):
        gamma = analysis.critical_gamma(M, 3).value
        H = reduce_hamiltonian(kron_complete(M, 3), kronecker_partition(M, 3, materialize=False), gamma, 0).matrix
        assert H.shape == (4, 4)
        E = np.linalg.eigvalsh(H)
        gap = E[1] - E[0]
        predicted = analysis.perturbation_report(M).gap
        assert predicted == pytest.approx(2 / (math.sqrt(M) * (M - 3)))
        rel = abs(gap / predicted - 1)
        worst.append((M, rel, 20 / M))
    record_property("detail", ", ".join(f"M={M}: {r:.2e} <= {b:.2e}" for M, r, b in worst))
    assert all(r <= b for _, r, b in worst)


@acceptance(10, "Taylor gap of the two third-order rates at M = 256")
def test_taylor_gap(record_property):
    g = analysis.gamma_taylor_gap(256)
    record_property("detail", f"M^5 * diff = {g.scaled:.6f}")
    assert abs(g.scaled + 3) <= 0.1


SMALL = [(M, j) for M in range(2, 6) for j in range(1, 4) if M**j <= 256]


@acceptance(11, "unitarity, energy, symmetry, probability bounds")
def test_property_suites(record_property):
    worst = {"norm": 0.0, "energy": 0.0, "symmetry": 0.0}

    @given(st.sampled_from(SMALL), st.floats(0.01, 2.0), st.floats(0.0, 100.0), st.data())
    def conservation(case, gamma, t, data):
        M, j = case
        w = data.draw(st.integers(0, M**j - 1))
        problem = SearchProblem(kron_complete(M, j), w, gamma)
        psi0 = uniform_state(problem)
        e0 = expected_energy(problem, psi0)
        for method in ("exact", "chebyshev"):
            psi = evolve(problem, psi0, t, method=method)
            dn = abs(psi.norm() - 1)
            de = abs(expected_energy(problem, psi) - e0) / max(1.0, abs(e0))
            worst["norm"] = max(worst["norm"], dn)
            worst["energy"] = max(worst["energy"], de)
            assert dn <= 1e-9
            assert de <= 1e-8
            assert 0.0 <= success_probability(problem, psi) <= 1.0

    @given(st.sampled_from([c for c in SMALL if c[0] >= 3]), st.floats(0.01, 1.0), st.data())
    def symmetry(case, gamma, data):
        M, j = case
        g = kron_complete(M, j)
        w = data.draw(st.integers(1, g.num_vertices - 1))
        a = probability_series(SearchProblem(g, 0, gamma), 40.0, 64).probabilities
        b = probability_series(SearchProblem(g, w, gamma), 40.0, 64).probabilities
        worst["symmetry"] = max(worst["symmetry"], float(np.max(np.abs(a - b))))
        assert np.max(np.abs(a - b)) <= 1e-10
        assert a.min() >= 0.0 and a.max() <= 1.0

    conservation()
    symmetry()
    record_property("detail", ", ".join(f"max {k} err {v:.1e}" for k, v in worst.items()))
