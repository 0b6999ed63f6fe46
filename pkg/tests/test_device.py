#!/usr/bin/env python

"""Tests for the coupled-transmon models and the Schrieffer-Wolff reduction."""

import math
import unittest

import numpy as np
import pytest
from scipy.linalg import expm

from zpygate.config import RunConfig
from zpygate.core.propagation import evolve_constant
from zpygate.device.coupled import (PERTURBATIVE, DeviceSpec,
                                    coupled_hamiltonian, dressed_couplings,
                                    effective_hamiltonian, lowest_levels,
                                    reduced_hamiltonian, truncation_check)
from zpygate.device.schrieffer_wolff import (StarkShiftData, s3_hamiltonian, stark_shift,
                                             sw_effective_hamiltonian, sw_generator,
                                             sw_reduction)
from zpygate.device.transmon import TransmonSpec, charge_basis_hamiltonian
from zpygate.errors import SchriefferWolffError, ValidationError
from zpygate.utils.utils import ghz_to_rad, mhz_to_rad

ROOT2 = math.sqrt(2.0)


def bare_levels(device):
    w_a, a_a, w_b, a_b = device.omega_a, device.alpha_a, device.omega_b, device.alpha_b
    return np.array([0.0, w_b, w_a, 2 * w_b + a_b, w_a + w_b, 2 * w_a + a_a])


def test_coupling_scale(device):
    """g_C / J = 2 [E_Ja E_Jb / (64 E_Ca E_Cb)]^(-1/4)."""
    a, b = device.qubit_a, device.qubit_b
    expected = 2.0 / (a.e_j * b.e_j / (64 * a.e_c * b.e_c)) ** 0.25
    assert device.coupling_scale == pytest.approx(expected, rel=1e-14)


def test_uncoupled_levels(device):
    """At J = 0 both models show the bare product energies."""
    e_a, e_b = device.qubit_a.energies, device.qubit_b.energies
    product = np.sort((e_a[:, None] + e_b[None, :]).ravel())[:6]
    np.testing.assert_allclose(lowest_levels(coupled_hamiltonian(device, 0.0)), product,
                               atol=1e-9)
    np.testing.assert_allclose(product, np.sort(bare_levels(device)), atol=1e-6)
    eff = effective_hamiltonian(device, 0.0).matrix
    np.testing.assert_allclose(eff, np.diag(bare_levels(device)), atol=1e-12)


def test_resonant_s3_entries(device):
    """At Delta = 0 |11> and |20> share the energy 2 omega_a + alpha_a."""
    h = effective_hamiltonian(device, device.j_max).matrix.real
    assert h[4, 4] == pytest.approx(h[5, 5], abs=1e-12)
    assert h[5, 5] == pytest.approx(2 * device.omega_a + device.alpha_a, abs=1e-12)


def test_block_structure(device):
    """S1, S2 and S3 never couple."""
    for builder in (effective_hamiltonian, reduced_hamiltonian):
        h = builder(device, 1.3 * device.j_max).matrix
        blocks = [[0], [1, 2], [3, 4, 5]]
        for i, rows in enumerate(blocks):
            for j, cols in enumerate(blocks):
                if i != j:
                    assert np.all(h[np.ix_(rows, cols)] == 0)
    assert reduced_hamiltonian(device, device.j_max).matrix[3, 4] == 0


def test_avoided_crossing(device):
    """|11>-|20> split by about 2 J~3 at J_M."""
    levels = lowest_levels(coupled_hamiltonian(device, device.j_max))
    gap = levels[5] - levels[4]
    assert gap == pytest.approx(2 * device.couplings.r3 * device.j_max, rel=0.02)


def test_spectrum_agreement(device):
    """Full and effective six lowest levels agree within 2 pi x 1 MHz over [0, J_M]."""
    worst = 0.0
    for j in np.linspace(0.0, device.j_max, 21):
        full = lowest_levels(coupled_hamiltonian(device, j))
        eff = lowest_levels(effective_hamiltonian(device, j))
        worst = max(worst, float(np.max(np.abs(full - eff))))
    assert worst < mhz_to_rad(1.0)


def test_truncation(device):
    """Eight levels per transmon are enough at J_M."""
    assert truncation_check(device, device.j_max) < ghz_to_rad(1e-6)
    coupled_hamiltonian(device, device.j_max, check_truncation=True)


def test_coupling_range(device):
    """J outside [0, 1.5 J_M] is rejected."""
    with pytest.raises(ValidationError):
        coupled_hamiltonian(device, -0.01)
    with pytest.raises(ValidationError):
        coupled_hamiltonian(device, 1.6 * device.j_max)


def test_detuning_bound(device):
    """|Delta| must stay below J_M/4."""
    with pytest.raises(ValidationError):
        DeviceSpec(device.qubit_a, device.qubit_b, device.j_max, device.j_max / 3)


class TestDressedCouplings(unittest.TestCase):
    """Exact and perturbative dressed couplings."""

    @classmethod
    def setUpClass(cls):
        cls.device = RunConfig().device_spec()

    def test_000_ranges(self):
        """r1 near 1, r2 and r3 near sqrt(2)."""
        r = self.device.couplings
        self.assertTrue(0.8 < r.r1 < 1.2)
        for value in (r.r2, r.r3):
            self.assertTrue(0.8 * ROOT2 < value < 1.2 * ROOT2)

    def test_001_perturbative_agreement(self):
        """Exact and first-order values agree within 10 %."""
        exact = dressed_couplings(self.device)
        pert = dressed_couplings(self.device, PERTURBATIVE)
        self.assertEqual(pert.method, PERTURBATIVE)
        for a, b in ((exact.r1, pert.r1), (exact.r2, pert.r2), (exact.r3, pert.r3)):
            self.assertLess(abs(a - b) / abs(a), 0.10)

    def test_002_brute_force_matrix_elements(self):
        """Matrix elements from an independent dense eigensolver."""
        def n_matrix(q):
            _, vecs = np.linalg.eigh(charge_basis_hamiltonian(q.e_c, q.e_j, q.charge_cutoff))
            k = np.arange(-q.charge_cutoff, q.charge_cutoff + 1)
            return vecs[:, :3].T @ (k[:, None] * vecs[:, :3])

        n_a, n_b = n_matrix(self.device.qubit_a), n_matrix(self.device.qubit_b)
        s = self.device.coupling_scale
        r = self.device.couplings
        self.assertAlmostEqual(r.r1, s * abs(n_a[0, 1] * n_b[1, 0]), places=10)
        self.assertAlmostEqual(r.r2, s * abs(n_a[1, 0] * n_b[1, 2]), places=10)
        self.assertAlmostEqual(r.r3, s * abs(n_a[1, 2] * n_b[1, 0]), places=10)

    def test_003_harmonic_limit(self):
        """A very deep transmon behaves like an oscillator."""
        q = TransmonSpec(e_c=0.01, e_j=50.0, charge_cutoff=40, levels_kept=4)
        r = dressed_couplings(DeviceSpec(q, q, 1.0))
        self.assertAlmostEqual(r.r1, 1.0, delta=0.01)
        self.assertAlmostEqual(r.r2, ROOT2, delta=0.02)
        self.assertAlmostEqual(r.r3, ROOT2, delta=0.02)


class TestSchriefferWolff(unittest.TestCase):
    """Stark shift of |11> from |02>."""

    ALPHA_SUM = ghz_to_rad(-0.66)
    J = ghz_to_rad(0.0226)

    def test_000_no_j2(self):
        """Without J~2 nothing shifts."""
        d_omega, d_j3, a1, a2 = stark_shift(self.ALPHA_SUM, 0.0, 0.0, self.J)
        self.assertEqual((d_omega, d_j3, a1, a2), (0.0, 0.0, 0.0, 0.0))

    def test_001_closed_form_values(self):
        """dOmega ~ +2 pi x 0.78 MHz, dJ3 ~ -2 pi x 0.013 MHz."""
        d_omega, d_j3, _, _ = stark_shift(self.ALPHA_SUM, 0.0, self.J, self.J)
        self.assertAlmostEqual(d_omega / mhz_to_rad(1.0), 0.775, delta=0.01)
        self.assertAlmostEqual(d_j3 / mhz_to_rad(1.0), -0.0133, delta=0.0005)

    def test_002_sign_rule(self):
        """dOmega has the sign of (A / (J3^2 - A B)) J2^2."""
        for detuning in (-0.02, 0.0, 0.02):
            big = self.ALPHA_SUM + 2 * detuning
            small = self.ALPHA_SUM + detuning
            d_omega = stark_shift(self.ALPHA_SUM, detuning, self.J, self.J)[0]
            self.assertEqual(np.sign(d_omega), np.sign(big / (self.J ** 2 - small * big)))

    def test_003_resonance(self):
        """A vanishing denominator is reported."""
        with self.assertRaises(SchriefferWolffError):
            stark_shift(-1.0, 0.5, 0.1, 0.0)

    def test_004_gap_matches_three_level_block(self):
        """The SW doublet reproduces the |11>/|20> gap of the exact S3 block."""
        j2, j3 = 1.3 * self.J / ROOT2, 1.3 * self.J / ROOT2
        d_omega, d_j3, _, _ = stark_shift(self.ALPHA_SUM, 0.0, j2, j3)
        exact = np.linalg.eigvalsh(s3_hamiltonian(self.ALPHA_SUM, 0.0, j2, j3).matrix)
        gap3 = exact[2] - exact[1]
        gap_sw = math.hypot(d_omega, 2 * (j3 + d_j3))
        gap_flipped = math.hypot(d_omega, 2 * (j3 - d_j3))
        self.assertLess(abs(gap3 - gap_sw), 2e-5)
        self.assertGreater(abs(gap3 - gap_flipped), 1e-4)

    def test_005_generator(self):
        """S is anti-Hermitian and removes the |02>-|11> coupling to first order."""
        j2, j3 = 0.12, 0.13
        d_omega, d_j3, a1, a2 = stark_shift(self.ALPHA_SUM, 0.0, j2, j3)
        s = sw_generator(StarkShiftData(d_omega, d_j3, a1, a2))
        np.testing.assert_allclose(s, -s.conj().T)
        h0 = s3_hamiltonian(self.ALPHA_SUM, 0.0, 0.0, j3).matrix
        v = s3_hamiltonian(self.ALPHA_SUM, 0.0, j2, j3).matrix - h0
        np.testing.assert_allclose(s @ h0 - h0 @ s, -v, atol=1e-14)


def test_sw_reduction_guard(device):
    """J~3 beyond a quarter of |alpha_a + alpha_b| is outside the expansion."""
    with pytest.raises(ValidationError):
        sw_reduction(device, 0.1, ghz_to_rad(0.2))
    data = sw_reduction(device, 0.1, 0.1)
    assert data.delta_omega > 0


def test_sw_propagator_validity(device):
    """The SW doublet tracks the |11> population of the full S3 block over one hold."""
    r = device.couplings
    j2, j3 = r.r2 * device.j_max, r.r3 * device.j_max
    data = sw_reduction(device, j2, j3)
    alpha_sum = device.alpha_a + device.alpha_b
    h3 = s3_hamiltonian(alpha_sum, device.detuning, j2, j3).matrix
    h_sw = sw_effective_hamiltonian(data, device.detuning, j3).matrix
    s = sw_generator(data)
    start = expm(-s) @ np.array([0.0, 1.0, 0.0])
    worst = 0.0
    for t in np.linspace(0.0, math.pi / j3, 200):
        lab = evolve_constant(h3, t) @ start
        dressed = expm(s) @ lab
        two = evolve_constant(h_sw, t) @ np.array([1.0, 0.0])
        worst = max(worst, abs(abs(dressed[1]) ** 2 - abs(two[0]) ** 2))
    assert worst < 1e-3
