#!/usr/bin/env python

"""Tests for the operators and the Schroedinger propagator."""

import math
import unittest

import numpy as np
import pytest

from zpygate.core.operators import (SIGMA_X, SIGMA_Z, HermitianOperator, StateVector,
                                    eig_hermitian, global_phase_distance, unitarity_defect)
from zpygate.core.propagation import (METHOD_PIECEWISE, PropagationConfig, check_convergence,
                                      evolve_constant, propagate, propagator_matrix)
from zpygate.errors import PropagationError, ValidationError
from zpygate.pulses.faquad import faquad_ramp
from zpygate.utils.utils import ghz_to_rad, mhz_to_rad

ALPHA = ghz_to_rad(-0.33)
J_TARGET = mhz_to_rad(16.0)


def random_hermitian(rng, dim):
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return 0.5 * (m + m.conj().T)


class TestOperators(unittest.TestCase):
    """Hermitian operators and diagonalization."""

    def test_000_diagonal(self):
        """An already diagonal operator."""
        w_a, w_b = ghz_to_rad(6.0), ghz_to_rad(5.67)
        evals, evecs = eig_hermitian(np.diag([0.0, w_a, w_b]))
        np.testing.assert_allclose(evals, [0.0, w_b, w_a])
        np.testing.assert_allclose(np.abs(evecs), np.eye(3)[:, [0, 2, 1]], atol=1e-12)

    def test_001_two_level_splitting(self):
        """(alpha/2) sigma_z has eigenvalues -+ 2 pi x 0.165."""
        evals, _ = eig_hermitian(0.5 * ALPHA * SIGMA_Z)
        np.testing.assert_allclose(evals, [-ghz_to_rad(0.165), ghz_to_rad(0.165)], rtol=1e-12)

    def test_002_non_hermitian(self):
        """Non-Hermitian input is rejected with the asymmetry."""
        with self.assertRaises(ValidationError) as ctx:
            HermitianOperator([[0.0, 1.0], [0.0, 0.0]])
        self.assertIn("max |H - H^dagger|", str(ctx.exception))
        with self.assertRaises(ValidationError):
            eig_hermitian(np.array([[1.0, 1j], [1j, 1.0]]))

    def test_003_eigen_equation(self):
        """H V = V diag(lambda) for random operators."""
        rng = np.random.default_rng(7)
        for dim in (1, 2, 6, 16):
            h = random_hermitian(rng, dim)
            evals, evecs = eig_hermitian(h)
            norm = np.linalg.norm(h, 2)
            self.assertTrue(np.all(np.diff(evals) >= 0))
            self.assertLess(np.max(np.abs(h @ evecs - evecs * evals)), 1e-10 * max(norm, 1.0))

    def test_004_matrix_is_frozen(self):
        """The wrapped matrix cannot be modified."""
        op = HermitianOperator(SIGMA_X)
        with self.assertRaises(ValueError):
            op.matrix[0, 0] = 1.0
        self.assertEqual(op.dim, 2)
        self.assertAlmostEqual((2 * op).norm(), 2.0)

    def test_005_global_phase(self):
        """Global phase is quotiented out."""
        u = evolve_constant(SIGMA_X, 0.3)
        self.assertLess(global_phase_distance(u, np.exp(1.1j) * u), 1e-14)
        self.assertGreater(global_phase_distance(u, SIGMA_Z @ u), 0.1)

    def test_006_state_vector(self):
        """Normalization on request, otherwise a unit-norm check."""
        psi = StateVector([3.0, 4.0], normalize=True)
        self.assertAlmostEqual(psi.norm(), 1.0)
        np.testing.assert_allclose(psi.populations(), [0.36, 0.64])
        with self.assertRaises(ValidationError):
            StateVector([0.0, 0.0], normalize=True)
        with self.assertRaises(ValidationError):
            StateVector([3.0, 4.0])
        with self.assertRaises(ValidationError):
            StateVector([1.0, 1e-4])
        self.assertEqual(StateVector([1.0, 1e-4], tol=1e-7).dim, 2)


class TestPropagation(unittest.TestCase):
    """Closed-form propagation examples."""

    def test_000_stationary(self):
        """An eigenstate only picks up its phase."""
        tau = 3.0
        out = propagate(lambda t: 0.5 * ALPHA * SIGMA_Z, [1.0, 0.0], 0.0, tau)
        np.testing.assert_allclose(out.amplitudes, [np.exp(-0.5j * ALPHA * tau), 0.0],
                                   atol=1e-9)

    def test_001_half_rabi_flop(self):
        """J sigma_x for pi/(2J) maps (1, 0) to (0, -i)."""
        j = 0.1
        out = propagate(lambda t: j * SIGMA_X, [1.0, 0.0], 0.0, math.pi / (2 * j))
        self.assertLess(global_phase_distance(out.amplitudes, [0.0, -1j]), 1e-9)
        self.assertAlmostEqual(out.norm(), 1.0, delta=1e-10)

    def test_002_zero_hamiltonian(self):
        """Zero generator gives the identity."""
        u = propagator_matrix(lambda t: np.zeros((3, 3)), 0.0, 5.0)
        np.testing.assert_allclose(u, np.eye(3), atol=1e-12)

    def test_003_constant_diagonal(self):
        """A diagonal generator gives the phase factors."""
        energies = np.array([0.0, 1.3, -0.7, 2.2])
        u = propagator_matrix(lambda t: np.diag(energies), 1.0, 3.5)
        np.testing.assert_allclose(u, np.diag(np.exp(-1j * energies * 2.5)), atol=1e-9)

    def test_004_square_pulse_swap(self):
        """A resonant square pulse swaps at area pi/2 and returns with a sign at area pi."""
        omega, j = 2.0, 0.2
        h3 = omega * np.eye(2) + j * SIGMA_X
        u_half = propagator_matrix(lambda t: h3, 0.0, math.pi / (2 * j))
        self.assertLess(global_phase_distance(u_half, SIGMA_X), 1e-8)
        u_full = propagator_matrix(lambda t: h3, 0.0, math.pi / j)
        np.testing.assert_allclose(u_full, -np.exp(-1j * omega * math.pi / j) * np.eye(2),
                                   atol=1e-8)

    def test_005_piecewise_oracle(self):
        """Adaptive and Magnus paths agree on a FAQUAD ramp of H2."""
        ramp = faquad_ramp(ALPHA, J_TARGET, 4.0)

        def h2(t):
            return 0.5 * ALPHA * SIGMA_Z + ramp(t) * SIGMA_X

        adaptive = propagator_matrix(h2, 0.0, 4.0)
        piecewise = propagator_matrix(h2, 0.0, 4.0, PropagationConfig(method=METHOD_PIECEWISE))
        self.assertLess(np.max(np.abs(adaptive - piecewise)), 1e-8)
        self.assertLess(unitarity_defect(adaptive), 1e-8)

    def test_006_rotating_frame(self):
        """The frame changes nothing in the lab-frame result."""
        energies = np.array([0.0, 30.0, 61.0])
        coupling = np.array([[0, 0.1, 0], [0.1, 0, 0.14], [0, 0.14, 0]])

        def h(t):
            return np.diag(energies) + math.sin(0.4 * t) * coupling

        plain = propagator_matrix(h, 0.0, 2.0)
        framed = propagator_matrix(h, 0.0, 2.0, frame=energies)
        self.assertLess(np.max(np.abs(plain - framed)), 1e-8)

    def test_007_invalid_arguments(self):
        """Bad intervals and settings are rejected."""
        with self.assertRaises(ValidationError):
            propagate(lambda t: SIGMA_Z, [1.0, 0.0], 1.0, 0.0)
        with self.assertRaises(ValidationError):
            PropagationConfig(abs_tol=1e-3)
        with self.assertRaises(ValidationError):
            PropagationConfig(max_step=0.0)
        with self.assertRaises(ValidationError):
            PropagationConfig(method="euler")
        with self.assertRaises(ValidationError):
            propagate(lambda t: np.array([[0.0, 1.0], [0.0, 0.0]]), [1.0, 0.0], 0.0, 1.0)
        with self.assertRaises(ValidationError):
            propagate(lambda t: SIGMA_Z, [1.0, 1.0], 0.0, 1.0)

    def test_008_step_underflow(self):
        """Integrator breakdown reports the time it happened."""
        def broken(t):
            return SIGMA_X if t < 0.5 else np.full((2, 2), np.nan)

        with pytest.raises(PropagationError) as info:
            propagate(broken, [1.0, 0.0], 0.0, 1.0)
        assert 0.0 <= info.value.time <= 0.5 + 1e-6


def test_norm_preservation():
    """Random time-dependent generators preserve the norm."""
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        dim = int(rng.integers(2, 5))
        a, b = random_hermitian(rng, dim), random_hermitian(rng, dim)
        psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        psi /= np.linalg.norm(psi)
        out = propagate(lambda t: a + math.sin(t) * b, psi, 0.0, 1.0)
        assert abs(out.norm() - 1.0) < 1e-9


def test_composition_and_reversibility():
    """U(t0, t2) = U(t1, t2) U(t0, t1), and the time-reversed run undoes the forward one."""
    rng = np.random.default_rng(3)
    a, b = random_hermitian(rng, 3), random_hermitian(rng, 3)

    def h(t):
        return a + math.cos(1.7 * t) * b

    full = propagator_matrix(h, 0.0, 2.0)
    split = propagator_matrix(h, 1.2, 2.0) @ propagator_matrix(h, 0.0, 1.2)
    assert np.max(np.abs(full - split)) < 1e-8

    psi0 = np.array([1.0, 0.0, 0.0], dtype=complex)
    forward = propagate(h, psi0, 0.0, 2.0)
    back = propagate(lambda s: -h(2.0 - s), forward, 0.0, 2.0)
    assert np.max(np.abs(back.amplitudes - psi0)) < 1e-8


def test_convergence_check():
    """Halving tolerances barely moves a converged result."""
    ramp = faquad_ramp(ALPHA, J_TARGET, 2.0)
    config = PropagationConfig(abs_tol=1e-10, rel_tol=1e-10)
    change = check_convergence(lambda t: 0.5 * ALPHA * SIGMA_Z + ramp(t) * SIGMA_X,
                               [1.0, 0.0], 0.0, 2.0, config)
    assert change < 1e-8
