#!/usr/bin/env python

"""Tests for gate simulation and phase analysis."""

import math
import unittest

import numpy as np
import pytest

from zpygate.errors import (ConvergenceError, GateAnalysisError, PropagationError,
                            ValidationError)
from zpygate.gate import (CZ_ENTANGLING_PHASE, EFFECTIVE, FULL, REDUCED, REPORT_COLUMNS,
                          decompose_phases, entangling_phase, extract_phases, fidelity,
                          simulate_gate)
from zpygate.pulses.faquad import FAQUAD, INVARIANT, RampWaveform
from zpygate.pulses.invariant import invariant_ansatz, invariant_ramp, predicted_s2_phases
from zpygate.pulses.schedule import build_schedule, design_schedule
from zpygate.utils.utils import reduce_phase, wrap_phase

Z1 = np.array([1, 1, -1, -1])
Z2 = np.array([1, -1, 1, -1])


def local_phases(theta0, theta1, theta2):
    return np.exp(1j * (theta0 + Z1 * theta1 + Z2 * theta2))


class TestPhaseAnalysis(unittest.TestCase):
    """Phase extraction, decomposition and fidelity on fixed matrices."""

    def test_000_ideal_cz(self):
        u = np.diag([1, 1, 1, -1]).astype(complex)
        decomposition = decompose_phases(extract_phases(u))
        self.assertAlmostEqual(decomposition.entangling, CZ_ENTANGLING_PHASE, places=14)
        f_e, f_avg = fidelity(u, decomposition)
        self.assertAlmostEqual(f_e, 1.0, places=14)
        self.assertAlmostEqual(f_avg, 1.0, places=14)

    def test_001_identity(self):
        """The identity is a quarter turn of phi12 away from CZ."""
        u = np.eye(4, dtype=complex)
        decomposition = decompose_phases(extract_phases(u))
        self.assertAlmostEqual(abs(decomposition.deviation()), math.pi / 4, places=12)
        f_e, f_avg = fidelity(u, decomposition)
        self.assertAlmostEqual(f_e, 0.5, places=12)
        self.assertAlmostEqual(f_avg, 0.6, places=12)

    def test_002_reconstruction(self):
        phases = (0.3, -2.9, 1.1, 3.0)
        rebuilt = decompose_phases(phases).phases()
        np.testing.assert_allclose(rebuilt, phases, atol=1e-12)
        self.assertAlmostEqual(entangling_phase(phases), (0.3 + 2.9 - 1.1 + 3.0) / 4)

    def test_003_local_gauge_invariance(self):
        """Local and global phases never change F_e."""
        rng = np.random.default_rng(7)
        u = np.diag([1, 1, 1, -1]) * np.exp(1j * np.array([0.0, 0.0, 0.0, 0.2]))
        u = u + 0.01 * (rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))
        base = fidelity(u, decompose_phases(extract_phases(u)))[0]
        for _ in range(20):
            rotated = u * local_phases(*rng.uniform(-math.pi, math.pi, 3))[:, None]
            f_e = fidelity(rotated, decompose_phases(extract_phases(rotated)))[0]
            self.assertAlmostEqual(f_e, base, places=12)

    def test_004_losses_reduce_fidelity(self):
        u = np.diag([1, 1, 1, -0.9]).astype(complex)
        f_e, _ = fidelity(u, decompose_phases(extract_phases(u)))
        self.assertAlmostEqual(f_e, (3.9 / 4) ** 2, places=12)

    def test_005_not_diagonal(self):
        swap = np.eye(4, dtype=complex)[:, [0, 2, 1, 3]]
        with self.assertRaises(GateAnalysisError) as ctx:
            extract_phases(swap)
        self.assertIn("|01>", str(ctx.exception))
        with self.assertRaises(ValidationError):
            extract_phases(np.eye(3))


@pytest.mark.parametrize("protocol", [FAQUAD, INVARIANT])
def test_entangling_phase_is_quarter_turn(device, protocol):
    """With |02> decoupled the analytic hold gives phi12 = pi/4."""
    outcome = simulate_gate(device, design_schedule(device, protocol, 4.0), model=REDUCED)
    assert abs(outcome.phase_deviation) < 1e-6


@pytest.mark.parametrize("protocol", [FAQUAD, INVARIANT])
def test_stark_shift_detunes_six_level_phase(device, protocol):
    """The |11>-|02> coupling pulls phi12 about 1e-2 rad below pi/4."""
    outcome = simulate_gate(device, design_schedule(device, protocol, 4.0), model=EFFECTIVE)
    assert -0.05 < outcome.phase_deviation < -1e-3


@pytest.mark.parametrize("protocol", [FAQUAD, INVARIANT])
def test_single_excitation_phases_cancel(device, protocol):
    """phi01 + phi10 = -(omega_a + omega_b) T_g for any S2 ramp."""
    schedule = design_schedule(device, protocol, 3.0)
    outcome = simulate_gate(device, schedule, model=EFFECTIVE)
    expected = -(device.omega_a + device.omega_b) * schedule.total_time
    assert abs(wrap_phase(outcome.phases[1] + outcome.phases[2] - expected)) < 1e-8


def test_predicted_phases(device):
    """Invariant-mode phases predict the simulated S2 phases."""
    schedule = design_schedule(device, INVARIANT, 4.0)
    outcome = simulate_gate(device, schedule, model=EFFECTIVE)
    center = 0.5 * (device.omega_a + device.omega_b)
    phi01, phi10 = predicted_s2_phases(schedule.ramp.ansatz, center, schedule.t_w)
    assert abs(wrap_phase(outcome.phases[1] - phi01)) < 1e-6
    assert abs(wrap_phase(outcome.phases[2] - phi10)) < 1e-6
    assert outcome.losses[1] < 1e-9
    assert outcome.losses[2] < 1e-9


def test_uncoupled_full_model(device):
    """J = 0 everywhere gives a product of local phases."""
    ramp = invariant_ramp(invariant_ansatz(device.alpha_eff, 0.0, 1.0))
    outcome = simulate_gate(device, build_schedule(ramp, 2.0), model=FULL)
    assert max(outcome.losses) < 1e-12
    assert outcome.leakage < 1e-12
    assert abs(reduce_phase(outcome.entangling, math.pi / 2)) < 1e-8
    assert outcome.f_avg == pytest.approx(0.6, abs=1e-10)


@pytest.mark.parametrize("protocol", [FAQUAD, INVARIANT])
def test_full_model_uncorrected(device, protocol):
    """Uncorrected gates already reach 99.9 % and keep the populations in place."""
    outcome = simulate_gate(device, design_schedule(device, protocol, 4.0), model=FULL)
    assert outcome.infidelity < 2e-3
    assert outcome.leakage < 1e-3
    transfer = outcome.transfer()
    for s in range(4):
        survival = abs(outcome.u_comp[s, s]) ** 2
        assert survival + transfer[s] + outcome.leakage_per_state[s] == pytest.approx(1.0,
                                                                                     abs=1e-10)
    row = outcome.to_row()
    assert tuple(row) == REPORT_COLUMNS
    assert row["protocol"] == protocol
    assert row["Tg_ns"] == pytest.approx(8.0 + outcome.t_w)


def test_full_and_effective_agree(device):
    schedule = design_schedule(device, INVARIANT, 4.0)
    full = simulate_gate(device, schedule, model=FULL)
    effective = simulate_gate(device, schedule, model=EFFECTIVE)
    assert abs(full.phase_deviation - effective.phase_deviation) < 0.05
    assert abs(full.infidelity - effective.infidelity) < 1e-3


class _BrokenRamp(RampWaveform):
    kind = FAQUAD

    @property
    def target(self):
        return 0.05

    @property
    def ramp_time(self):
        return 1.0

    def __call__(self, t):
        return 0.0 if t < 0.5 else float("nan")


def test_propagation_failure_names_the_schedule(device):
    with pytest.raises(PropagationError) as info:
        simulate_gate(device, build_schedule(_BrokenRamp(), 1.0), model=EFFECTIVE)
    assert "model=effective" in str(info.value)
    assert info.value.time <= 0.5 + 1e-6


def test_unknown_model(device):
    with pytest.raises(ValidationError):
        simulate_gate(device, design_schedule(device, FAQUAD, 4.0), model="classical")


def test_unconverged_full_model(device):
    """Three levels per transmon is not a converged full model."""
    coarse = device.with_levels(3)
    schedule = design_schedule(coarse, INVARIANT, 4.0)
    with pytest.raises(ConvergenceError) as info:
        simulate_gate(coarse, schedule, model=FULL)
    assert "levels_kept" in str(info.value)
    assert simulate_gate(coarse, schedule, model=EFFECTIVE).infidelity < 1.0
