# -*- coding: utf-8 -*-
"""
Two capacitively coupled transmons.

The full model lives in the product of the two single-transmon eigenbases,
levels_kept states each, with basis index i * L_b + j for |i j> (qubit a
first). The effective model keeps the six lowest product states in the
order (|00>, |01>, |10>, |02>, |11>, |20>) and splits into the blocks
S1 = {|00>}, S2 = {|01>, |10>} and S3 = {|02>, |11>, |20>}.
"""

import logging
import math
from dataclasses import dataclass, replace
from functools import cached_property

import numpy as np

from ..core.operators import HermitianOperator
from ..errors import ValidationError, cutoff_exception_factory
from .transmon import SPECTRUM_TOL, calibrate_transmon

logger = logging.getLogger(__name__)

EFFECTIVE_BASIS = ("00", "01", "10", "02", "11", "20")
COMPUTATIONAL_BASIS = ("00", "01", "10", "11")
EFFECTIVE_COMPUTATIONAL = tuple(EFFECTIVE_BASIS.index(s) for s in COMPUTATIONAL_BASIS)

EXACT = "exact-matrix-element"
PERTURBATIVE = "first-order-perturbative"

J_RANGE_FACTOR = 1.5


@dataclass(frozen=True)
class DressedCouplings:
    """ Ratios r_i = J~_i / J of the dressed couplings.

    r1 couples |01>-|10>, r2 couples |11>-|02> and r3 couples |11>-|20>.
    """
    r1: float
    r2: float
    r3: float
    method: str = EXACT

    def scaled(self, j):
        """(J~1, J~2, J~3) for the physical coupling j."""
        return self.r1 * j, self.r2 * j, self.r3 * j


@dataclass(frozen=True)
class DeviceSpec:
    """ Two transmons, the maximum coupling and the S3 detuning.

    Args:
        qubit_a (TransmonSpec): The higher-frequency transmon.
        qubit_b (TransmonSpec): The other transmon.
        j_max (float): Maximum coupling J_M, rad/ns.
        detuning (float): Delta = omega_b - (omega_a + alpha_a), rad/ns.
    """
    qubit_a: object
    qubit_b: object
    j_max: float
    detuning: float = 0.0

    def __post_init__(self):
        if not self.j_max > 0:
            raise ValidationError("J_M must be positive")
        if abs(self.detuning) >= self.j_max / 4.0:
            raise ValidationError(
                f"|Delta| = {abs(self.detuning):.4e} rad/ns must stay below J_M/4 = "
                f"{self.j_max / 4.0:.4e} rad/ns")

    @classmethod
    def from_frequencies(cls, omega_a, alpha_a, alpha_b, j_max, detuning=0.0,
                         charge_cutoff=20, levels_kept=8):
        """ Calibrate both transmons, qubit b at omega_a + alpha_a + detuning.

        All arguments in rad/ns.
        """
        qubit_a = calibrate_transmon(omega_a, alpha_a, charge_cutoff, levels_kept)
        qubit_b = calibrate_transmon(omega_a + alpha_a + detuning, alpha_b,
                                     charge_cutoff, levels_kept)
        return cls(qubit_a, qubit_b, j_max, detuning)

    def with_detuning(self, detuning):
        """A copy whose qubit b is recalibrated to the new detuning."""
        qubit_b = calibrate_transmon(self.omega_a + self.alpha_a + detuning, self.alpha_b,
                                     self.qubit_b.charge_cutoff, self.qubit_b.levels_kept)
        return replace(self, qubit_b=qubit_b, detuning=detuning)

    def with_levels(self, levels_kept):
        return replace(self, qubit_a=self.qubit_a.with_levels(levels_kept),
                       qubit_b=self.qubit_b.with_levels(levels_kept))

    @property
    def omega_a(self):
        return self.qubit_a.omega01

    @property
    def alpha_a(self):
        return self.qubit_a.alpha

    @property
    def omega_b(self):
        """Nominal omega_b = omega_a + alpha_a + Delta."""
        return self.omega_a + self.alpha_a + self.detuning

    @property
    def alpha_b(self):
        return self.qubit_b.alpha

    @property
    def alpha_eff(self):
        """alpha_a + Delta, the S2 splitting entering the ramp design."""
        return self.alpha_a + self.detuning

    @property
    def coupling_scale(self):
        """ g_C / J = 2 [E_Ja E_Jb / (64 E_Ca E_Cb)]^(-1/4)."""
        a, b = self.qubit_a, self.qubit_b
        return 2.0 * (a.e_j * b.e_j / (64.0 * a.e_c * b.e_c)) ** -0.25

    @cached_property
    def couplings(self):
        return dressed_couplings(self)

    @cached_property
    def truncation_change(self):
        """ Change of the six lowest full-model levels at J_M from two extra
        levels per transmon.

        Raises:
            ConvergenceError: If levels_kept is not converged.
        """
        return truncation_check(self, self.j_max)

    @cached_property
    def _full_operators(self):
        a, b = self.qubit_a, self.qubit_b
        energies = (a.energies[:, None] + b.energies[None, :]).ravel()
        coupling = self.coupling_scale * np.kron(a.charge_matrix(), b.charge_matrix())
        energies.setflags(write=False)
        coupling.setflags(write=False)
        return energies, coupling

    def full_operators(self):
        """ (bare energies, coupling operator) of the full model.

        H(J) = diag(energies) + J * coupling.
        """
        return self._full_operators

    def full_index(self, label):
        """Full-model basis index of a two-character label like '11'."""
        return int(label[0]) * self.qubit_b.levels_kept + int(label[1])

    def effective_operators(self, reduced=False):
        """ (bare energies, coupling operator) of the six-level model.

        With reduced=True the |02> level is decoupled from |11>.
        """
        w_a, a_a, w_b, a_b = self.omega_a, self.alpha_a, self.omega_b, self.alpha_b
        energies = np.array([0.0, w_b, w_a, 2 * w_b + a_b, w_a + w_b, 2 * w_a + a_a])
        r = self.couplings
        coupling = np.zeros((6, 6))
        coupling[1, 2] = coupling[2, 1] = r.r1
        if not reduced:
            coupling[3, 4] = coupling[4, 3] = r.r2
        coupling[4, 5] = coupling[5, 4] = r.r3
        return energies, coupling


def _check_j(device, j):
    if not 0.0 <= j <= J_RANGE_FACTOR * device.j_max:
        raise ValidationError(
            f"J = {j:.4e} rad/ns is outside [0, {J_RANGE_FACTOR} J_M]")


def coupled_hamiltonian(device, j, check_truncation=False):
    """ The full two-transmon Hamiltonian at coupling J.

    Args:
        device (DeviceSpec): The device.
        j (float): Coupling J in rad/ns, within [0, 1.5 J_M].
        check_truncation (bool): Also verify levels_kept convergence.

    Returns:
        HermitianOperator: (L_a L_b)-square matrix, ground energy zero.
    """
    _check_j(device, j)
    if check_truncation:
        truncation_check(device, j)
    energies, coupling = device.full_operators()
    return HermitianOperator(np.diag(energies) + j * coupling)


def truncation_check(device, j, extra_levels=2):
    """ Compare the six lowest eigenvalues against a model with more levels.

    Returns:
        float: The largest eigenvalue change in rad/ns.

    Raises:
        ConvergenceError: If the change reaches 2 pi x 1e-6 rad/ns.
    """
    def lowest(dev):
        energies, coupling = dev.full_operators()
        return np.linalg.eigvalsh(np.diag(energies) + j * coupling)[:6]

    levels = device.qubit_a.levels_kept
    change = float(np.max(np.abs(lowest(device) - lowest(device.with_levels(levels + extra_levels)))))
    logger.debug("Truncation check at J = %.4e: change %.3e rad/ns", j, change)
    if change >= SPECTRUM_TOL:
        raise cutoff_exception_factory("levels_kept", levels, levels + extra_levels, change)
    return change


def effective_hamiltonian(device, j):
    """ The six-level effective Hamiltonian.

    Basis (|00>, |01>, |10>, |02>, |11>, |20>), omega_b = omega_a + alpha_a
    + Delta and J~_i = r_i J. Blocks S1, S2 and S3 never couple.

    Args:
        device (DeviceSpec): The device.
        j (float): Coupling J in rad/ns.

    Returns:
        HermitianOperator: 6x6 matrix.
    """
    energies, coupling = device.effective_operators()
    return HermitianOperator(np.diag(energies) + j * coupling)


def reduced_hamiltonian(device, j):
    """The effective Hamiltonian with |02> decoupled (J~2 = 0)."""
    energies, coupling = device.effective_operators(reduced=True)
    return HermitianOperator(np.diag(energies) + j * coupling)


def dressed_couplings(device, method=EXACT):
    """ Dressed coupling ratios r_i = J~_i / J.

    Args:
        device (DeviceSpec): The device.
        method (str): ``exact-matrix-element`` uses the exact transmon
            eigenstates; ``first-order-perturbative`` uses the first-order
            anharmonic corrections to the harmonic-oscillator values.

    Returns:
        DressedCouplings
    """
    if method == EXACT:
        n_a = device.qubit_a.charge_matrix()
        n_b = device.qubit_b.charge_matrix()
        scale = device.coupling_scale
        return DressedCouplings(r1=float(scale * n_a[0, 1] * n_b[1, 0]),
                                r2=float(scale * n_a[1, 0] * n_b[1, 2]),
                                r3=float(scale * n_a[1, 2] * n_b[1, 0]),
                                method=EXACT)
    if method == PERTURBATIVE:
        w_a, a_a = device.qubit_a.omega01, device.qubit_a.alpha
        w_b, a_b = device.qubit_b.omega01, device.qubit_b.alpha

        def one(w, a):
            return 2.0 * a / (3.0 * (2.0 * w + a))

        def two(w, a):
            return -a / (3.0 * (2.0 * w + a)) + 5.0 * a / (2.0 * (2.0 * w + 3.0 * a))

        root2 = math.sqrt(2.0)
        return DressedCouplings(r1=1.0 + one(w_a, a_a) + one(w_b, a_b),
                                r2=root2 * (1.0 + two(w_b, a_b) + one(w_a, a_a)),
                                r3=root2 * (1.0 + two(w_a, a_a) + one(w_b, a_b)),
                                method=PERTURBATIVE)
    raise ValidationError(f"Unknown coupling method {method!r}")


def lowest_levels(hamiltonian, count=6):
    """The count lowest eigenvalues of an operator."""
    matrix = hamiltonian.matrix if isinstance(hamiltonian, HermitianOperator) else hamiltonian
    return np.linalg.eigvalsh(matrix)[:count]
