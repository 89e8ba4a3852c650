"""Smoke tests for the python bindings."""

import math

import numpy as np
import pytest

import renyi


def test_bounds_scalar_values():
    assert renyi.binary_entropy(0.5) == pytest.approx(1.0)
    assert renyi.afw_von_neumann(0.1, 2) == pytest.approx(0.6834466856136647)
    assert renyi.bound_hmin(1.0, 2) == pytest.approx(math.log2(5))
    assert renyi.bound_low(0.25, 2, 0.5) == pytest.approx(1.979830006179176)
    assert renyi.bound_high(0.1, 2, 2.0) == pytest.approx(2.3822024389359107)
    assert renyi.bound_jabbour_datta(0.1, 2, 0.5) == pytest.approx(math.log2(1.6))
    assert renyi.leditzky_gap(0.5, 0.5) == pytest.approx(-2.0)
    assert renyi.dual_order(2.0) == pytest.approx(2.0 / 3.0)
    assert math.isinf(renyi.dual_order(0.5))


def test_entropies_on_known_states():
    mm = np.eye(4, dtype=complex) / 4.0
    r = renyi.conditional_entropy(mm, 2, 2, 2.0)
    assert r["value"] == pytest.approx(1.0, abs=1e-8)
    assert r["converged"]

    bell = renyi.max_entangled(2)
    assert renyi.hmin(bell, 2, 2)["value"] == pytest.approx(-1.0, abs=1e-6)
    assert renyi.hmax(bell, 2, 2)["value"] == pytest.approx(-1.0, abs=1e-6)
    assert renyi.von_neumann_conditional(bell, 2, 2) == pytest.approx(-1.0, abs=1e-9)

    rho_a = np.diag([0.75, 0.25]).astype(complex)
    assert renyi.renyi_entropy(rho_a, 0.5) == pytest.approx(
        2 * math.log2(math.sqrt(0.75) + math.sqrt(0.25))
    )


def test_divergence_and_distances():
    p = np.diag([0.75, 0.25]).astype(complex)
    q = np.eye(2, dtype=complex) / 2.0
    assert renyi.sandwiched_divergence(p, q, 2.0) == pytest.approx(math.log2(1.25))
    assert renyi.trace_distance(p, q) == pytest.approx(0.25)
    assert renyi.fidelity(np.diag([1.0, 0.0]).astype(complex), q) == pytest.approx(
        1 / math.sqrt(2)
    )


def test_sampling_and_perturbation_are_deterministic():
    a = renyi.sample_state(2, 2, "hilbert-schmidt", seed=5)
    b = renyi.sample_state(2, 2, "hilbert-schmidt", seed=5)
    np.testing.assert_array_equal(a, b)
    w = np.linalg.eigvalsh(a)
    assert w.min() > -1e-10
    assert np.trace(a).real == pytest.approx(1.0)

    sigma, realized = renyi.perturb(a, 2, 2, 0.2, "mixing", seed=9)
    assert realized <= 0.2 + 1e-10
    assert renyi.trace_distance(a, sigma) == pytest.approx(realized, abs=1e-12)


def test_duality_residual():
    rho = renyi.sample_state(2, 2, "hilbert-schmidt", seed=11)
    rep = renyi.duality_residual(rho, 2, 2, 2.0)
    assert rep["residual"] < 1e-5
    assert rep["beta"] == pytest.approx(2.0 / 3.0)


def test_classical_helpers():
    table = np.array([[0.5, 0.0], [0.0, 0.5]])
    state = renyi.cq_state(table)
    assert state.shape == (4, 4)
    assert renyi.classical_conditional_renyi(table, math.inf) == pytest.approx(0.0)
    got = renyi.hmin(state, 2, 2)["value"]
    assert got == pytest.approx(0.0, abs=1e-7)


def test_validation_errors_surface_as_value_errors():
    bad = np.eye(2, dtype=complex) * 0.45  # trace 0.9
    with pytest.raises(ValueError):
        renyi.conditional_entropy(bad, 2, 1, 2.0)
    with pytest.raises(ValueError):
        renyi.binary_entropy(1.5)


def test_small_campaign():
    rep = renyi.run_campaign(
        dims=[(2, 2)],
        orders=[0.75, 2.0],
        epsilons=[0.1],
        samples_per_cell=5,
        checks=["thm1", "cor1", "mccarthy"],
        seed=321,
    )
    assert rep["schema"] == 1
    assert rep["summary"]["violations"] == 0
    assert not rep["summary"]["failed"]
    assert len(rep["records"]) > 0
