# -*- coding: utf-8 -*-
"""
Time-dependent Schroedinger propagation.

Two paths are provided. The default integrates i d/dt Y = H(t) Y with an
adaptive high-order Runge-Kutta scheme (scipy's DOP853); the second slices
[t0, t1] into equal steps and multiplies fourth-order Magnus exponentials,
and serves as an independent oracle.

A diagonal ``frame`` (a vector of energies E) moves the adaptive integration
into the interaction picture of diag(E), which removes the fast bare phases
of the full transmon model from what the integrator has to resolve. Results
are always returned in the lab frame.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from ..errors import PropagationError, ValidationError, step_underflow_exception_factory
from .operators import NORM_TOL, HermitianOperator, StateVector, as_matrix

logger = logging.getLogger(__name__)

METHOD_ADAPTIVE = "adaptive-integrator"
METHOD_PIECEWISE = "piecewise-exponential"
METHODS = (METHOD_ADAPTIVE, METHOD_PIECEWISE)
NORM_DRIFT_FACTOR = 100.0

_GAUSS_OFFSET = math.sqrt(3.0) / 6.0


@dataclass(frozen=True)
class PropagationConfig:
    """ Settings for propagate() and propagator_matrix().

    Args:
        abs_tol (float): Absolute tolerance of the adaptive integrator.
        rel_tol (float): Relative tolerance of the adaptive integrator.
        max_step (float): Largest integrator step in ns.
        method (str): ``adaptive-integrator`` or ``piecewise-exponential``.
        n_slices (int): Number of slices for the piecewise path.
        integrator (str): scipy ``solve_ivp`` method name.
    """
    abs_tol: float = 1e-12
    rel_tol: float = 1e-12
    max_step: float = math.inf
    method: str = METHOD_ADAPTIVE
    n_slices: int = 10000
    integrator: str = "DOP853"

    def __post_init__(self):
        for name in ("abs_tol", "rel_tol"):
            value = getattr(self, name)
            if not 0 < value <= 1e-6:
                raise ValidationError(f"{name} must lie in (0, 1e-6], got {value}")
        if not self.max_step > 0:
            raise ValidationError(f"max_step must be positive, got {self.max_step}")
        if self.method not in METHODS:
            raise ValidationError(f"Unknown propagation method {self.method!r}")
        if self.n_slices < 1:
            raise ValidationError("n_slices must be at least 1")

    def tightened(self, factor=0.5):
        """A copy with both tolerances scaled by factor."""
        return PropagationConfig(abs_tol=self.abs_tol * factor,
                                 rel_tol=self.rel_tol * factor,
                                 max_step=self.max_step,
                                 method=self.method,
                                 n_slices=int(math.ceil(self.n_slices / factor)),
                                 integrator=self.integrator)


DEFAULT_CONFIG = PropagationConfig()


def evolve_constant(hamiltonian, duration):
    """ Exact exp(-i H duration) of a constant Hermitian generator.

    Args:
        hamiltonian (HermitianOperator or array_like): H in rad/ns.
        duration (float): Evolution time in ns, may be negative.

    Returns:
        numpy.ndarray: The unitary.
    """
    matrix = as_matrix(hamiltonian)
    evals, evecs = np.linalg.eigh(matrix)
    return (evecs * np.exp(-1j * evals * duration)) @ evecs.conj().T


def _sampler(hamiltonian):
    """Wrap H(t) so it returns a plain complex ndarray."""
    def sample(t):
        return as_matrix(hamiltonian(t))
    return sample


def _check_interval(t0, t1):
    if not (math.isfinite(t0) and math.isfinite(t1)):
        raise ValidationError("Propagation bounds must be finite")
    if t1 < t0:
        raise ValidationError(f"Propagation needs t1 >= t0, got t0={t0}, t1={t1}")


def _adaptive(sample, y0, t0, t1, config, frame):
    dim, ncols = y0.shape
    if frame is None:
        def rhs(t, y):
            return (-1j * (sample(t) @ y.reshape(dim, ncols))).ravel()
        start = y0
    else:
        energies = np.asarray(frame, dtype=float)
        if energies.shape != (dim,):
            raise ValidationError(f"frame must hold {dim} energies, got shape {energies.shape}")
        diag = np.diag(energies)

        def rhs(t, y):
            rot = np.exp(1j * energies * t)
            coupling = (rot[:, None] * (sample(t) - diag)) * rot.conj()[None, :]
            return (-1j * (coupling @ y.reshape(dim, ncols))).ravel()
        start = np.exp(1j * energies * t0)[:, None] * y0

    sol = solve_ivp(rhs, (t0, t1), start.ravel(), method=config.integrator,
                    rtol=config.rel_tol, atol=config.abs_tol,
                    max_step=config.max_step, t_eval=[t1])
    if sol.status != 0 or sol.y.shape[1] == 0:
        reached = float(sol.t[-1]) if len(sol.t) else t0
        raise step_underflow_exception_factory(reached, sol.message)
    logger.debug("DOP853 over [%.6f, %.6f] ns: %d evaluations", t0, t1, sol.nfev)
    out = sol.y[:, -1].reshape(dim, ncols)
    if frame is not None:
        out = np.exp(-1j * energies * t1)[:, None] * out
    return out


def _magnus_step(sample, t, dt):
    """Fourth-order Magnus exponential over [t, t + dt] from two Gauss nodes."""
    h1 = sample(t + dt * (0.5 - _GAUSS_OFFSET))
    h2 = sample(t + dt * (0.5 + _GAUSS_OFFSET))
    comm = h2 @ h1 - h1 @ h2
    # Omega = -i K with K Hermitian
    kernel = 0.5 * dt * (h1 + h2) - 1j * (math.sqrt(3.0) * dt * dt / 12.0) * comm
    return evolve_constant(0.5 * (kernel + kernel.conj().T), 1.0)


def _piecewise(sample, y0, t0, t1, config):
    dt = (t1 - t0) / config.n_slices
    out = y0
    for k in range(config.n_slices):
        out = _magnus_step(sample, t0 + k * dt, dt) @ out
    return out


def _prepare(hamiltonian, dim, t0, t1):
    """Validate the interval and H(t0); return the ndarray sampler."""
    _check_interval(t0, t1)
    sample = _sampler(hamiltonian)
    first = sample(t0)
    if first.shape != (dim, dim):
        raise ValidationError(f"H(t) has shape {first.shape}, expected {(dim, dim)}")
    HermitianOperator(first)
    return sample


def propagate(hamiltonian, psi0, t0, t1, config=None, frame=None):
    """ Propagate one state under a time-dependent Hamiltonian.

    Args:
        hamiltonian (callable): t -> HermitianOperator or Hermitian ndarray.
        psi0 (StateVector or array_like): Initial state at t0.
        t0 (float): Start time in ns.
        t1 (float): End time in ns, t1 >= t0.
        config (PropagationConfig): Integration settings.
        frame (array_like): Optional diagonal rotating-frame energies.

    Returns:
        StateVector: The state at t1.

    Raises:
        ValidationError: If psi0 is not normalized.
        PropagationError: On step-size underflow, with the breakdown time, or
            when the norm drifts by more than max(1e-10, 100 abs_tol).
    """
    config = config or DEFAULT_CONFIG
    if not isinstance(psi0, StateVector):
        psi0 = StateVector(psi0)
    out = _run(hamiltonian, psi0.amplitudes[:, None], t0, t1, config, frame)[:, 0]
    limit = max(NORM_TOL, NORM_DRIFT_FACTOR * config.abs_tol)
    drift = abs(float(np.linalg.norm(out)) - 1.0)
    if drift > limit:
        raise PropagationError(
            f"Norm drifted by {drift:.2e} over [{t0}, {t1}] ns (limit {limit:.1e})", time=t1)
    return StateVector(out, tol=limit)


def propagator_matrix(hamiltonian, t0, t1, config=None, frame=None, columns=None):
    """ Propagator U(t1, t0), or a subset of its columns.

    Args:
        hamiltonian (callable): t -> HermitianOperator or Hermitian ndarray.
        t0 (float): Start time in ns.
        t1 (float): End time in ns.
        config (PropagationConfig): Integration settings.
        frame (array_like): Optional diagonal rotating-frame energies.
        columns (sequence of int): Basis states to propagate. All of them
            when omitted.

    Returns:
        numpy.ndarray: dim x len(columns) complex matrix; column k is the
        propagated basis state columns[k].
    """
    dim = as_matrix(hamiltonian(t0)).shape[0]
    cols = list(range(dim)) if columns is None else list(columns)
    y0 = np.zeros((dim, len(cols)), dtype=complex)
    y0[cols, range(len(cols))] = 1.0
    return _run(hamiltonian, y0, t0, t1, config, frame)


def propagate_columns(hamiltonian, y0, t0, t1, config=None, frame=None):
    """Propagate an arbitrary dim x k block of column states."""
    return _run(hamiltonian, np.asarray(y0, dtype=complex), t0, t1, config, frame)


def _run(hamiltonian, y0, t0, t1, config, frame):
    config = config or DEFAULT_CONFIG
    sample = _prepare(hamiltonian, y0.shape[0], t0, t1)
    if t1 == t0:
        return y0.copy()
    if config.method == METHOD_PIECEWISE:
        return _piecewise(sample, y0, t0, t1, config)
    return _adaptive(sample, y0, t0, t1, config, frame)


def check_convergence(hamiltonian, psi0, t0, t1, config=None, frame=None):
    """ Re-propagate with halved tolerances.

    Returns:
        float: max amplitude change between the two runs.
    """
    config = config or DEFAULT_CONFIG
    coarse = propagate(hamiltonian, psi0, t0, t1, config, frame)
    fine = propagate(hamiltonian, psi0, t0, t1, config.tightened(), frame)
    change = float(np.max(np.abs(coarse.amplitudes - fine.amplitudes)))
    logger.debug("Convergence check over [%.6f, %.6f] ns: change %.3e", t0, t1, change)
    return change


__all__ = ["PropagationConfig", "PropagationError", "DEFAULT_CONFIG", "METHOD_ADAPTIVE",
           "METHOD_PIECEWISE", "evolve_constant", "propagate", "propagator_matrix",
           "propagate_columns", "check_convergence"]
