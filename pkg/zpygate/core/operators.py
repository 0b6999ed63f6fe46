# -*- coding: utf-8 -*-
"""
Dense Hermitian operators, state vectors and the handful of fixed matrices
(Pauli matrices, SU(2) generators) the physics modules are written in.

Energies are angular frequencies in rad/ns with hbar = 1.
"""

import numpy as np
import scipy.linalg

from ..errors import ValidationError, non_hermitian_exception_factory

HERMITICITY_TOL = 1e-12
NORM_TOL = 1e-10

IDENTITY2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SIGMA_X, SIGMA_Y, SIGMA_Z)

# Lie algebra generators T_j = sigma_j / 2
GENERATORS = tuple(0.5 * s for s in PAULI)


def _readonly(arr):
    arr = np.array(arr, dtype=complex, copy=True)
    arr.setflags(write=False)
    return arr


def max_asymmetry(matrix):
    """Largest elementwise |H - H^dagger|."""
    matrix = np.asarray(matrix)
    return float(np.max(np.abs(matrix - matrix.conj().T))) if matrix.size else 0.0


class HermitianOperator:
    """ A dense complex Hermitian matrix.

    The matrix is copied and frozen on construction, so an operator can be
    shared freely between threads and worker processes.

    Args:
        matrix (array_like): Square complex matrix, rad/ns.

    Raises:
        ValidationError: If the matrix is not square or not Hermitian within
            1e-12 relative to its largest entry.
    """

    __slots__ = ("_matrix",)

    def __init__(self, matrix):
        matrix = np.asarray(matrix)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] < 1:
            raise ValidationError(
                f"A Hermitian operator needs a non-empty square matrix, got shape {matrix.shape}")
        scale = max(1.0, float(np.max(np.abs(matrix))))
        asym = max_asymmetry(matrix)
        if asym > HERMITICITY_TOL * scale:
            raise non_hermitian_exception_factory(asym, HERMITICITY_TOL * scale)
        self._matrix = _readonly(matrix)

    @property
    def matrix(self):
        """The read-only complex matrix."""
        return self._matrix

    @property
    def dim(self):
        return self._matrix.shape[0]

    def norm(self):
        """Spectral norm."""
        return float(np.linalg.norm(self._matrix, 2))

    def __add__(self, other):
        return HermitianOperator(self._matrix + as_matrix(other))

    def __mul__(self, scalar):
        if np.iscomplexobj(scalar) and np.imag(scalar) != 0:
            raise ValidationError("Only real scalars preserve Hermiticity")
        return HermitianOperator(self._matrix * float(np.real(scalar)))

    __rmul__ = __mul__

    def __repr__(self):
        return f"HermitianOperator(dim={self.dim})"


class StateVector:
    """ A normalized complex state vector.

    Args:
        amplitudes (array_like): Complex amplitudes.
        normalize (bool): Rescale to unit norm instead of checking it.
        tol (float): Allowed |norm - 1| when not normalizing.

    Raises:
        ValidationError: If the norm is off by more than tol.
    """

    __slots__ = ("_amplitudes",)

    def __init__(self, amplitudes, normalize=False, tol=NORM_TOL):
        amps = np.asarray(amplitudes, dtype=complex).ravel()
        if amps.size < 1:
            raise ValidationError("A state vector needs at least one amplitude")
        norm = np.linalg.norm(amps)
        if normalize:
            if norm == 0:
                raise ValidationError("Cannot normalize the zero vector")
            amps = amps / norm
        elif abs(norm - 1.0) > tol:
            raise ValidationError(
                f"State norm {norm:.12f} differs from 1 by more than {tol:.1e}")
        self._amplitudes = _readonly(amps)

    @classmethod
    def basis(cls, dim, index):
        """The computational basis state |index> in a space of size dim."""
        amps = np.zeros(dim, dtype=complex)
        amps[index] = 1.0
        return cls(amps)

    @property
    def amplitudes(self):
        return self._amplitudes

    @property
    def dim(self):
        return self._amplitudes.size

    def norm(self):
        return float(np.linalg.norm(self._amplitudes))

    def populations(self):
        return np.abs(self._amplitudes) ** 2

    def overlap(self, other):
        """<self|other>."""
        return complex(np.vdot(self._amplitudes, as_vector(other)))

    def __repr__(self):
        return f"StateVector(dim={self.dim}, norm={self.norm():.12f})"


def as_matrix(operator):
    """Return the ndarray behind an operator-like value."""
    if isinstance(operator, HermitianOperator):
        return operator.matrix
    return np.asarray(operator, dtype=complex)


def as_vector(state):
    """Return the ndarray behind a state-like value."""
    if isinstance(state, StateVector):
        return state.amplitudes
    return np.asarray(state, dtype=complex).ravel()


def eig_hermitian(operator):
    """ Diagonalize a Hermitian operator.

    Args:
        operator (HermitianOperator or array_like): The operator. Raw arrays
            are validated the same way HermitianOperator validates them.

    Returns:
        tuple(numpy.ndarray, numpy.ndarray): Ascending real eigenvalues and
        the unitary matrix whose columns are the eigenvectors.
    """
    if not isinstance(operator, HermitianOperator):
        operator = HermitianOperator(operator)
    evals, evecs = scipy.linalg.eigh(operator.matrix)
    return evals, evecs


def commutator(a, b):
    """[a, b] for dense matrices."""
    a = as_matrix(a)
    b = as_matrix(b)
    return a @ b - b @ a


def global_phase_distance(a, b):
    """ Max-norm distance between a and b after removing one global phase.

    The phase minimizing the Frobenius distance, arg(<b, a>), is applied to b.
    Works for vectors and matrices alike.
    """
    a = np.asarray(as_matrix(a) if isinstance(a, HermitianOperator) else a, dtype=complex)
    b = np.asarray(as_matrix(b) if isinstance(b, HermitianOperator) else b, dtype=complex)
    inner = np.vdot(b.ravel(), a.ravel())
    phase = inner / abs(inner) if abs(inner) > 0 else 1.0
    return float(np.max(np.abs(a - phase * b)))


def unitarity_defect(u):
    """max |U^dagger U - I|."""
    u = np.asarray(u)
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[1]))))


def kron(*operators):
    """Kronecker product of several matrices, left factor most significant."""
    out = np.array([[1.0 + 0j]])
    for op in operators:
        out = np.kron(out, as_matrix(op))
    return out
