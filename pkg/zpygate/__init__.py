from ._version import __version__

from .core.operators import HermitianOperator, StateVector, eig_hermitian
from .core.propagation import PropagationConfig, propagate, propagator_matrix
from .device.transmon import TransmonSpec, calibrate_transmon, single_transmon_hamiltonian
from .device.coupled import (
    DeviceSpec, DressedCouplings, coupled_hamiltonian, effective_hamiltonian,
    dressed_couplings
)
from .device.schrieffer_wolff import StarkShiftData, sw_reduction
from .pulses.faquad import faquad_ramp, faquad_mu
from .pulses.invariant import InvariantAnsatz, invariant_ansatz, invariant_ramp, lr_phases
from .pulses.schedule import ControlSchedule, build_schedule, waiting_time
from .gate import GateOutcome, PhaseDecomposition, simulate_gate
from .calibration import OptimizationProblem, SweepResult, optimize_gate, sweep


__all__ = [
    'errors',
    'presets',
    'core',
    'device',
    'pulses',
    'gate',
    'calibration',
    'config',
    'cli',
    'utils'
]
