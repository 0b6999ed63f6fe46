# -*- coding: utf-8 -*-
"""
Single transmon in the charge basis.

    H = 4 E_C n^2 - E_J cos(phi)

is tridiagonal in the charge states |k>, k = -n_cut..n_cut, with 4 E_C k^2
on the diagonal and -E_J/2 on both off-diagonals. Energies are shifted so the
ground state sits at zero.
"""

import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.optimize import root

from ..core.operators import HermitianOperator
from ..errors import CalibrationError, ValidationError, cutoff_exception_factory

logger = logging.getLogger(__name__)

MIN_EJ_EC_RATIO = 20.0
MIN_CHARGE_CUTOFF = 10
MAX_CHARGE_CUTOFF = 640
SPECTRUM_TOL = 2.0 * np.pi * 1e-6
CALIBRATION_TOL = 2.0 * np.pi * 1e-4
CALIBRATION_MAXFEV = 100


def charge_basis_hamiltonian(e_c, e_j, charge_cutoff):
    """ Dense charge-basis Hamiltonian, no regime checks.

    Args:
        e_c (float): Charging energy, rad/ns.
        e_j (float): Josephson energy, rad/ns.
        charge_cutoff (int): Basis runs over k = -charge_cutoff..charge_cutoff.

    Returns:
        numpy.ndarray: Real symmetric (2 n_cut + 1)-square matrix.
    """
    diag, off = _tridiagonal(e_c, e_j, charge_cutoff)
    return np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)


def _tridiagonal(e_c, e_j, charge_cutoff):
    k = np.arange(-charge_cutoff, charge_cutoff + 1, dtype=float)
    return 4.0 * e_c * k ** 2, np.full(2 * charge_cutoff, -0.5 * e_j)


def charge_spectrum(e_c, e_j, charge_cutoff, levels, vectors=False):
    """Lowest eigenvalues (and eigenvectors) of the charge-basis Hamiltonian."""
    diag, off = _tridiagonal(e_c, e_j, charge_cutoff)
    return eigh_tridiagonal(diag, off, eigvals_only=not vectors,
                            select="i", select_range=(0, levels - 1))


@dataclass(frozen=True)
class TransmonSpec:
    """ One transmon.

    Args:
        e_c (float): Charging energy E_C, rad/ns.
        e_j (float): Josephson energy E_J, rad/ns.
        charge_cutoff (int): Charge basis cutoff n_cut.
        levels_kept (int): Number of eigenstates kept for coupled models.
    """
    e_c: float
    e_j: float
    charge_cutoff: int = 20
    levels_kept: int = 8

    def __post_init__(self):
        if self.e_c <= 0 or self.e_j <= 0:
            raise ValidationError("E_C and E_J must be positive")
        if self.e_j / self.e_c < MIN_EJ_EC_RATIO:
            raise ValidationError(
                f"E_J/E_C = {self.e_j / self.e_c:.2f} is outside the transmon "
                f"regime (>= {MIN_EJ_EC_RATIO:g})")
        if self.levels_kept < 3:
            raise ValidationError("levels_kept must be at least 3")
        if 2 * self.charge_cutoff + 1 < self.levels_kept:
            raise ValidationError("charge basis is smaller than levels_kept")

    @cached_property
    def _eigensystem(self):
        evals, evecs = charge_spectrum(self.e_c, self.e_j, self.charge_cutoff,
                                       self.levels_kept, vectors=True)
        k = np.arange(-self.charge_cutoff, self.charge_cutoff + 1, dtype=float)
        # sign gauge: <j|n|j+1> > 0
        for j in range(1, self.levels_kept):
            if evecs[:, j - 1] @ (k * evecs[:, j]) < 0:
                evecs[:, j] = -evecs[:, j]
        return evals - evals[0], evecs

    @property
    def energies(self):
        """The levels_kept lowest energies, ground state at zero."""
        return self._eigensystem[0].copy()

    @property
    def eigenvectors(self):
        """Charge-basis eigenvectors as columns."""
        return self._eigensystem[1].copy()

    @property
    def omega01(self):
        return float(self._eigensystem[0][1])

    @property
    def alpha(self):
        e = self._eigensystem[0]
        return float((e[2] - e[1]) - (e[1] - e[0]))

    @cached_property
    def _charge_matrix(self):
        evecs = self._eigensystem[1]
        k = np.arange(-self.charge_cutoff, self.charge_cutoff + 1, dtype=float)
        matrix = evecs.T @ (k[:, None] * evecs)
        matrix.setflags(write=False)
        return matrix

    def charge_matrix(self):
        """ The charge operator n projected onto the kept eigenstates.

        Returns:
            numpy.ndarray: Real symmetric levels_kept-square matrix with
            the gauge <j|n|j+1> > 0.
        """
        return self._charge_matrix

    def spectrum(self):
        return self.energies

    def with_levels(self, levels_kept):
        return TransmonSpec(self.e_c, self.e_j, self.charge_cutoff, levels_kept)


def single_transmon_hamiltonian(spec):
    """ Charge-basis Hamiltonian of a transmon with a cutoff convergence check.

    Doubling the cutoff must move the lowest levels_kept eigenvalues by less
    than 2 pi x 1e-6 rad/ns.

    Args:
        spec (TransmonSpec): The transmon.

    Returns:
        HermitianOperator: The (2 n_cut + 1)-square matrix.

    Raises:
        ValidationError: If charge_cutoff < 10.
        ConvergenceError: If the cutoff is too small, naming the one needed.
    """
    if spec.charge_cutoff < MIN_CHARGE_CUTOFF:
        raise ValidationError(f"charge_cutoff must be >= {MIN_CHARGE_CUTOFF}")
    change = _cutoff_sensitivity(spec.e_c, spec.e_j, spec.charge_cutoff, spec.levels_kept)
    if change >= SPECTRUM_TOL:
        required = spec.charge_cutoff
        while required < MAX_CHARGE_CUTOFF:
            required *= 2
            if _cutoff_sensitivity(spec.e_c, spec.e_j, required, spec.levels_kept) < SPECTRUM_TOL:
                break
        raise cutoff_exception_factory("charge_cutoff", spec.charge_cutoff, required, change)
    return HermitianOperator(charge_basis_hamiltonian(spec.e_c, spec.e_j, spec.charge_cutoff))


def _cutoff_sensitivity(e_c, e_j, cutoff, levels):
    low = charge_spectrum(e_c, e_j, cutoff, levels)
    high = charge_spectrum(e_c, e_j, 2 * cutoff, levels)
    return float(np.max(np.abs((low - low[0]) - (high - high[0]))))


def analytic_seed(target_omega01, target_alpha):
    """ First-order transmon estimates: alpha ~ -E_C, omega01 ~ sqrt(8 E_C E_J) - E_C.

    Returns:
        tuple(float, float): (E_C, E_J) in rad/ns.
    """
    e_c = -target_alpha
    e_j = (target_omega01 + e_c) ** 2 / (8.0 * e_c)
    return e_c, e_j


def calibrate_transmon(target_omega01, target_alpha, charge_cutoff=20, levels_kept=8):
    """ Find E_C, E_J whose exact spectrum has the requested omega01 and alpha.

    The analytic seed is refined by a 2-D root find on the exact
    charge-basis spectrum.

    Args:
        target_omega01 (float): E1 - E0 in rad/ns, positive.
        target_alpha (float): (E2 - E1) - (E1 - E0) in rad/ns, negative.
        charge_cutoff (int): Charge basis cutoff of the returned spec.
        levels_kept (int): levels_kept of the returned spec.

    Returns:
        TransmonSpec: The calibrated transmon.

    Raises:
        ValidationError: For non-physical targets.
        CalibrationError: If the root finder does not converge within
            100 evaluations.
    """
    if not target_omega01 > 0:
        raise ValidationError(f"omega01 must be positive, got {target_omega01}")
    if not target_alpha < 0:
        raise ValidationError(f"alpha must be negative, got {target_alpha}")
    seed = np.array(analytic_seed(target_omega01, target_alpha))
    target = np.array([target_omega01, target_alpha])

    def residual(x):
        e_c, e_j = seed * np.exp(x)
        e = charge_spectrum(e_c, e_j, charge_cutoff, 3)
        return np.array([e[1] - e[0], (e[2] - e[1]) - (e[1] - e[0])]) - target

    sol = root(residual, np.zeros(2), method="hybr",
               options={"maxfev": CALIBRATION_MAXFEV, "xtol": 1e-13})
    res = float(np.max(np.abs(residual(sol.x))))
    if res > CALIBRATION_TOL:
        raise CalibrationError(
            f"Transmon calibration failed ({sol.message.strip()}): residual "
            f"{res:.3e} rad/ns after {sol.nfev} evaluations", residual=res)
    e_c, e_j = seed * np.exp(sol.x)
    logger.debug("Calibrated transmon: E_C = %.9f, E_J = %.9f rad/ns (residual %.2e)",
                 e_c, e_j, res)
    return TransmonSpec(float(e_c), float(e_j), charge_cutoff, levels_kept)
