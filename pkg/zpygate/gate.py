# -*- coding: utf-8 -*-
"""
CZ gate simulation and analysis.

A gate is characterized by the computational block U_comp of the propagator
over [0, T_g], basis (|00>, |01>, |10>, |11>). Its diagonal phases split as

    phi_ij = phi0 + z_i phi1 + z_j phi2 + z_i z_j phi12,   z_0 = +1, z_1 = -1,

where phi12 is the entangling phase, pi/4 for a CZ-equivalent gate.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .core.operators import unitarity_defect
from .core.propagation import DEFAULT_CONFIG, evolve_constant, propagate_columns
from .device.coupled import EFFECTIVE_COMPUTATIONAL, COMPUTATIONAL_BASIS
from .errors import GateAnalysisError, PropagationError, ValidationError
from .utils.utils import rad_to_mhz, reduce_phase, wrap_phase

logger = logging.getLogger(__name__)

FULL = "full"
EFFECTIVE = "effective"
REDUCED = "reduced"
MODELS = (FULL, EFFECTIVE, REDUCED)

CZ_ENTANGLING_PHASE = math.pi / 4.0
DIAGONAL_THRESHOLD = 0.5
N_COMPUTATIONAL = 4

# z_i z_j sign patterns in the order 00, 01, 10, 11
_Z1 = np.array([1.0, 1.0, -1.0, -1.0])
_Z2 = np.array([1.0, -1.0, 1.0, -1.0])
_Z12 = _Z1 * _Z2

REPORT_COLUMNS = ("T_ns", "t_w_ns", "Delta_over_2pi_MHz", "Tg_ns", "protocol", "model",
                  "infidelity", "phase_dev_rad", "loss_00", "loss_01", "loss_10", "loss_11",
                  "leakage")


@dataclass(frozen=True)
class PhaseDecomposition:
    """ Global, local and entangling parts of the four diagonal phases.

    Attributes:
        global_phase (float): phi0.
        local_a (float): phi1, qubit a.
        local_b (float): phi2, qubit b.
        entangling (float): phi12.
    """
    global_phase: float
    local_a: float
    local_b: float
    entangling: float

    def phases(self):
        """Rebuild (phi_00, phi_01, phi_10, phi_11), unwrapped."""
        return tuple(self.global_phase + _Z1 * self.local_a + _Z2 * self.local_b
                     + _Z12 * self.entangling)

    def deviation(self, target=CZ_ENTANGLING_PHASE):
        """phi12 - target reduced into (-pi/4, pi/4]."""
        return reduce_phase(self.entangling - target, math.pi / 2.0)


def extract_phases(u_comp):
    """ Diagonal phases of a nearly diagonal computational block.

    Args:
        u_comp (array_like): 4x4 matrix.

    Returns:
        tuple: (phi_00, phi_01, phi_10, phi_11) on (-pi, pi].

    Raises:
        GateAnalysisError: If a diagonal modulus is <= 0.5.
    """
    u = np.asarray(u_comp, dtype=complex)
    if u.shape != (N_COMPUTATIONAL, N_COMPUTATIONAL):
        raise ValidationError(f"Expected a 4x4 block, got shape {u.shape}")
    diag = np.diag(u)
    weak = np.abs(diag) <= DIAGONAL_THRESHOLD
    if np.any(weak):
        states = ", ".join(f"|{COMPUTATIONAL_BASIS[k]}>" for k in np.flatnonzero(weak))
        raise GateAnalysisError(
            f"Diagonal amplitude of {states} is below {DIAGONAL_THRESHOLD}: the "
            f"protocol transfers population out of the initial state")
    return tuple(wrap_phase(float(np.angle(d))) for d in diag)


def entangling_phase(phases):
    """phi12 = (phi_00 - phi_01 - phi_10 + phi_11) / 4."""
    return float(np.dot(_Z12, phases) / 4.0)


def decompose_phases(phases):
    """Split four diagonal phases into a PhaseDecomposition."""
    phases = np.asarray(phases, dtype=float)
    return PhaseDecomposition(global_phase=float(phases.mean()),
                              local_a=float(np.dot(_Z1, phases) / 4.0),
                              local_b=float(np.dot(_Z2, phases) / 4.0),
                              entangling=float(np.dot(_Z12, phases) / 4.0))


def fidelity(u_comp, decomposition, target=CZ_ENTANGLING_PHASE):
    """ Entanglement and average gate fidelity against a CZ-equivalent target.

    The ideal gate is the one sharing the extracted global and local phases
    and carrying the target entangling phase, so only the entangling error
    and the losses count:

        F_e = |(1/4) sum_s <s|U_id^dagger U_loc^dagger U|s>|^2,
        F   = (4 F_e + 1) / 5.

    Args:
        u_comp (array_like): 4x4 computational block.
        decomposition (PhaseDecomposition): Phases taken out as local.
        target (float): Entangling phase of the ideal gate; pi/4 is CZ.

    Returns:
        tuple(float, float): (F_e, F).
    """
    u = np.asarray(u_comp, dtype=complex)
    reference = np.asarray(decomposition.phases()) \
        - _Z12 * reduce_phase(decomposition.entangling - target, math.pi / 2.0)
    overlap = np.sum(np.exp(-1j * reference) * np.diag(u)) / N_COMPUTATIONAL
    f_e = float(min(1.0, abs(overlap) ** 2))
    return f_e, (N_COMPUTATIONAL * f_e + 1.0) / (N_COMPUTATIONAL + 1.0)


def average_fidelity(f_e):
    """F = (4 F_e + 1) / 5."""
    return (N_COMPUTATIONAL * f_e + 1.0) / (N_COMPUTATIONAL + 1.0)


@dataclass(frozen=True)
class GateOutcome:
    """ Result of one gate simulation.

    Attributes:
        u_comp (numpy.ndarray): 4x4 computational block of U(T_g).
        phases (tuple): phi_00, phi_01, phi_10, phi_11 on (-pi, pi].
        decomposition (PhaseDecomposition): Phase split.
        losses (tuple): 1 - |<s|U|s>|^2 per computational state.
        leakage_per_state (tuple): Population outside the computational
            basis per initial state.
        f_e (float): Entanglement fidelity.
        f_avg (float): Average gate fidelity.
    """
    u_comp: np.ndarray = field(repr=False)
    phases: tuple
    decomposition: PhaseDecomposition
    losses: tuple
    leakage_per_state: tuple
    f_e: float
    f_avg: float
    model: str = FULL
    protocol: str = ""
    ramp_time: float = float("nan")
    t_w: float = float("nan")
    detuning: float = 0.0

    @property
    def entangling(self):
        return self.decomposition.entangling

    @property
    def phase_deviation(self):
        return self.decomposition.deviation()

    @property
    def infidelity(self):
        return 1.0 - self.f_avg

    @property
    def leakage(self):
        """Mean population outside the computational basis."""
        return float(np.mean(self.leakage_per_state))

    @property
    def total_time(self):
        return 2.0 * self.ramp_time + self.t_w

    def transfer(self):
        """In-basis population moved to other computational states, per column."""
        pops = np.abs(self.u_comp) ** 2
        return tuple(float(pops[:, s].sum() - pops[s, s]) for s in range(N_COMPUTATIONAL))

    def to_row(self):
        """The gate-report row, keyed by REPORT_COLUMNS."""
        row = dict(zip(REPORT_COLUMNS, (
            self.ramp_time, self.t_w, rad_to_mhz(self.detuning), self.total_time,
            self.protocol, self.model, self.infidelity, abs(self.phase_deviation),
            *self.losses, self.leakage)))
        return row


def _model_operators(device, model):
    """(bare energies, coupling operator, computational indices) of a model."""
    if model == FULL:
        energies, coupling = device.full_operators()
        comp = [device.full_index(s) for s in COMPUTATIONAL_BASIS]
    elif model in (EFFECTIVE, REDUCED):
        energies, coupling = device.effective_operators(reduced=model == REDUCED)
        comp = list(EFFECTIVE_COMPUTATIONAL)
    else:
        raise ValidationError(f"Unknown model {model!r}, expected one of {MODELS}")
    return np.asarray(energies, dtype=float), np.asarray(coupling, dtype=complex), comp


def propagate_gate(device, schedule, model=FULL, config=None):
    """ Propagate the computational states through a schedule.

    The ramps are integrated in the rotating frame of the bare energies; the
    hold window uses the exact exponential of the constant Hamiltonian.

    Returns:
        tuple(numpy.ndarray, list): dim x 4 final states and the row indices
        of the computational states.
    """
    config = config or DEFAULT_CONFIG
    energies, coupling, comp = _model_operators(device, model)
    bare = np.diag(energies).astype(complex)

    def hamiltonian(t):
        return bare + schedule.coupling(t) * coupling

    y = np.zeros((energies.size, len(comp)), dtype=complex)
    y[comp, range(len(comp))] = 1.0
    T, t_w = schedule.ramp_time, schedule.t_w
    try:
        y = propagate_columns(hamiltonian, y, 0.0, T, config, frame=energies)
        y = evolve_constant(bare + schedule.hold_coupling * coupling, t_w) @ y
        y = propagate_columns(hamiltonian, y, T + t_w, schedule.total_time, config,
                              frame=energies)
    except PropagationError as err:
        raise PropagationError(
            f"{err} [model={model}, {schedule.ramp.kind} T={T} ns, t_w={t_w:.6f} ns]",
            time=err.time) from err
    return y, comp


def simulate_gate(device, schedule, model=FULL, config=None):
    """ Run one gate and analyze it.

    Args:
        device (DeviceSpec): The device, detuning included.
        schedule (ControlSchedule): The coupling schedule.
        model (str): ``full``, ``effective`` or ``reduced``.
        config (PropagationConfig): Integration settings.

    Returns:
        GateOutcome

    Raises:
        PropagationError: With the schedule in the message.
        ConvergenceError: If the full model is not converged in levels_kept.
        GateAnalysisError: If a computational state is not roughly preserved.
    """
    if model == FULL:
        logger.debug("Full model truncation change %.2e rad/ns", device.truncation_change)
    y, comp = propagate_gate(device, schedule, model, config)
    u_comp = y[comp, :]
    logger.debug("Gate propagator unitarity defect %.2e", unitarity_defect(y[:, :]))
    survival = np.abs(np.diag(u_comp)) ** 2
    losses = tuple(float(min(1.0, max(0.0, 1.0 - p))) for p in survival)
    in_basis = np.sum(np.abs(u_comp) ** 2, axis=0)
    leakage = tuple(float(max(0.0, 1.0 - p)) for p in in_basis)

    phases = extract_phases(u_comp)
    decomposition = decompose_phases(phases)
    f_e, f_avg = fidelity(u_comp, decomposition)
    outcome = GateOutcome(u_comp=u_comp, phases=phases, decomposition=decomposition,
                          losses=losses, leakage_per_state=leakage, f_e=f_e, f_avg=f_avg,
                          model=model, protocol=schedule.ramp.kind,
                          ramp_time=schedule.ramp_time, t_w=schedule.t_w,
                          detuning=device.detuning)
    logger.info("%s gate (%s model) T = %.3f ns, t_w = %.6f ns: infidelity %.3e, "
                "phase deviation %.3e rad", outcome.protocol, model, outcome.ramp_time,
                outcome.t_w, outcome.infidelity, outcome.phase_deviation)
    return outcome
