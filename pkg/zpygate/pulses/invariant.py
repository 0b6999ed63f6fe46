# -*- coding: utf-8 -*-
"""
Invariant-engineered coupling ramps for the S2 two-level system.

The invariant I(t) = sum_j f_j(t) sigma_j / 2 of H2 = (alpha/2) sigma_z +
J~1(t) sigma_x is fixed by a polynomial f1(t): conservation requires

    f2 = -f1' / alpha,   f3 = +sqrt(c^2 - f1^2 - f2^2),   c = |alpha|,
    J~1 = (f1'' / alpha + alpha f1) / (2 f3).

f1 and its first two derivatives are pinned at both ramp ends so that I and
H2 commute there and the eigenstates of H2 are carried over exactly.
"""

import logging
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy.polynomial import Polynomial
from scipy.integrate import quad

from ..core.operators import GENERATORS, SIGMA_X, SIGMA_Z, commutator
from ..errors import (InfeasibleAnsatzError, ValidationError,
                      infeasible_ansatz_exception_factory)
from .faquad import INVARIANT, RampWaveform, _scalar

logger = logging.getLogger(__name__)

UP = "up"
DOWN = "down"
FEASIBILITY_POINTS = 10000
QUAD_TOL = 1e-12
SYSTEM_TOL = 1e-12


def boundary_value(h1, alpha_eff):
    """ f1 at a frictionless boundary where H2 has h1 = 2 J~1.

    f1 = -h1 sqrt(c^2 / (h1^2 + alpha^2)) puts I antiparallel to H2.
    """
    return -h1 * math.sqrt(alpha_eff ** 2 / (h1 ** 2 + alpha_eff ** 2))


def _boundary_system(degree):
    """Rows of the end-point conditions on coefficients of f1(s), s in [0, 1]."""
    orders = (degree + 1) // 2
    rows = []
    for s0 in (0.0, 1.0):
        for d in range(orders):
            row = np.zeros(degree + 1)
            for m in range(d, degree + 1):
                row[m] = math.perm(m, d) * (s0 ** (m - d) if m > d else 1.0)
            rows.append(row)
    return np.array(rows)


@dataclass(frozen=True)
class InvariantAnsatz:
    """ Polynomial f1 for an up or down ramp.

    The polynomial is stored in the scaled time s = t/T; ``coefficients``
    gives the same polynomial in t.

    Attributes:
        alpha_eff (float): S2 splitting, rad/ns, negative.
        j_target (float): J~1 at the coupled end, rad/ns.
        duration (float): Ramp time T, ns.
        direction (str): ``up`` (0 -> target) or ``down`` (target -> 0).
        scaled_coefficients (tuple): b_0..b_M of f1 in s, rad/ns.
    """
    alpha_eff: float
    j_target: float
    duration: float
    direction: str
    scaled_coefficients: tuple

    @property
    def c2(self):
        return self.alpha_eff ** 2

    @property
    def c(self):
        return abs(self.alpha_eff)

    @property
    def degree(self):
        return len(self.scaled_coefficients) - 1

    @property
    def coefficients(self):
        """a_0..a_M with f1(t) = sum a_m t^m, rad/ns."""
        T = self.duration
        return tuple(b / T ** m for m, b in enumerate(self.scaled_coefficients))

    @cached_property
    def _polys(self):
        p = Polynomial(self.scaled_coefficients)
        return p, p.deriv(1), p.deriv(2), p.deriv(3)

    def _s(self, t):
        return np.clip(np.asarray(t, dtype=float), 0.0, self.duration) / self.duration

    def f1(self, t, order=0):
        """d^order f1 / dt^order."""
        value = self._polys[order](self._s(t)) / self.duration ** order
        return _scalar(value, t)

    def f2(self, t):
        return _scalar(-np.asarray(self.f1(t, 1)) / self.alpha_eff, t)

    def radicand(self, t):
        f1 = np.asarray(self.f1(t))
        f2 = np.asarray(self.f2(t))
        return _scalar(self.c2 - f1 * f1 - f2 * f2, t)

    def f3(self, t):
        rad = np.asarray(self.radicand(t))
        if np.any(rad <= 0):
            times = np.broadcast_to(np.asarray(t, dtype=float), rad.shape)
            k = int(np.argmin(rad))
            raise infeasible_ansatz_exception_factory(float(times.flat[k]), float(rad.flat[k]))
        return _scalar(np.sqrt(rad), t)

    def f(self, t):
        """(f1, f2, f3) at t."""
        return self.f1(t), self.f2(t), self.f3(t)

    def h1(self, t):
        """2 J~1(t)."""
        a = self.alpha_eff
        f1 = np.asarray(self.f1(t))
        value = (np.asarray(self.f1(t, 2)) / a + a * f1) / np.asarray(self.f3(t))
        return _scalar(value, t)

    def check_feasible(self, points=FEASIBILITY_POINTS):
        """Raise InfeasibleAnsatzError unless the radicand is positive on the grid."""
        self.f3(np.linspace(0.0, self.duration, points))


def invariant_ansatz(alpha_eff, j_target, ramp_time, direction=UP, degree=5):
    """ Solve the frictionless end-point conditions for f1.

    f1 takes the boundary values fixed by J~1 at each end, and its first
    (degree - 1)/2 derivatives vanish there; degree 5 pins first and second
    derivatives, higher odd degrees add third, fourth, ... derivatives.

    Args:
        alpha_eff (float): Effective anharmonicity, rad/ns, < 0.
        j_target (float): J~1 at the coupled end, rad/ns, >= 0.
        ramp_time (float): T in ns.
        direction (str): ``up`` or ``down``.
        degree (int): Odd polynomial degree, at least 5.

    Returns:
        InvariantAnsatz

    Raises:
        InfeasibleAnsatzError: If c^2 - f1^2 - f2^2 <= 0 somewhere on a
            10^4-point grid.
    """
    if not alpha_eff < 0:
        raise ValidationError("alpha_eff must be negative")
    if j_target < 0:
        raise ValidationError("J~1 target must be non-negative")
    if not ramp_time > 0:
        raise ValidationError("Ramp time must be positive")
    if direction not in (UP, DOWN):
        raise ValidationError(f"direction must be 'up' or 'down', got {direction!r}")
    if degree < 5 or degree % 2 == 0:
        raise ValidationError("degree must be odd and at least 5")

    coupled = boundary_value(2.0 * j_target, alpha_eff)
    start, end = (0.0, coupled) if direction == UP else (coupled, 0.0)
    system = _boundary_system(degree)
    rhs = np.zeros(degree + 1)
    rhs[0] = start
    rhs[(degree + 1) // 2] = end
    coeffs = np.linalg.solve(system, rhs)
    residual = float(np.max(np.abs(system @ coeffs - rhs)))
    if residual > SYSTEM_TOL * max(1.0, abs(coupled)):
        raise ValidationError(f"Boundary system residual {residual:.3e} too large")

    ansatz = InvariantAnsatz(float(alpha_eff), float(j_target), float(ramp_time),
                             direction, tuple(float(b) for b in coeffs))
    ansatz.check_feasible()
    return ansatz


@dataclass(frozen=True)
class InvariantRamp(RampWaveform):
    """J~1(t) = (f1''/alpha + alpha f1) / (2 f3) of an invariant ansatz."""
    ansatz: InvariantAnsatz
    kind = INVARIANT

    @property
    def alpha_eff(self):
        return self.ansatz.alpha_eff

    @property
    def target(self):
        return self.ansatz.j_target

    @property
    def ramp_time(self):
        return self.ansatz.duration

    def __call__(self, t):
        return _scalar(0.5 * np.asarray(self.ansatz.h1(t)), t)

    def derivative(self, t):
        """dJ~1/dt from polynomial calculus."""
        an = self.ansatz
        a = an.alpha_eff
        f, df, ddf, dddf = (np.asarray(an.f1(t, k)) for k in range(4))
        f3 = np.asarray(an.f3(t))
        num = ddf / a + a * f
        dnum = dddf / a + a * df
        df3 = -(f * df + df * ddf / (a * a)) / f3
        return _scalar((dnum * f3 - num * df3) / (2.0 * f3 * f3), t)


def invariant_ramp(ansatz, alpha_eff=None, ramp_time=None):
    """ The coupling ramp of an invariant ansatz.

    alpha_eff and ramp_time, when given, must match the ansatz.
    """
    if alpha_eff is not None and alpha_eff != ansatz.alpha_eff:
        raise ValidationError("alpha_eff does not match the ansatz")
    if ramp_time is not None and ramp_time != ansatz.duration:
        raise ValidationError("ramp_time does not match the ansatz")
    ansatz.check_feasible()
    return InvariantRamp(ansatz)


def s2_hamiltonian(alpha_eff, j1):
    """Traceless H2 = (alpha/2) sigma_z + J~1 sigma_x."""
    return 0.5 * alpha_eff * SIGMA_Z + j1 * SIGMA_X


def invariant_operator(ansatz, t):
    """I(t) = sum_j f_j(t) sigma_j / 2 as a 2x2 matrix."""
    f = ansatz.f(t)
    return sum(fj * g for fj, g in zip(f, GENERATORS))


def invariant_residual(ansatz, t, step=1e-5):
    """ max |dI/dt + i [H2, I]| at time t, dI/dt by central differences."""
    ramp = InvariantRamp(ansatz)
    lo = max(t - step, 0.0)
    hi = min(t + step, ansatz.duration)
    d_inv = (invariant_operator(ansatz, hi) - invariant_operator(ansatz, lo)) / (hi - lo)
    h2 = s2_hamiltonian(ansatz.alpha_eff, ramp(t))
    return float(np.max(np.abs(d_inv + 1j * commutator(h2, invariant_operator(ansatz, t)))))


def frictionless_defect(ansatz):
    """max |[H2, I]| over the two ramp ends."""
    ramp = InvariantRamp(ansatz)
    return max(float(np.max(np.abs(commutator(s2_hamiltonian(ansatz.alpha_eff, ramp(tb)),
                                              invariant_operator(ansatz, tb)))))
               for tb in (0.0, ansatz.duration))


@dataclass(frozen=True)
class LRPhases:
    """ Lewis-Riesenfeld phases accumulated over a ramp up and its mirror down.

    Attributes:
        dynamic_plus (float): -(1/c) int (2 f1 J~1 + alpha f3) dt.
        geometric_plus (float): Solid-angle part of the closed path of the
            |01> mode, which the mirrored ramp down traverses on the other
            side of the x-z plane.
    """
    dynamic_plus: float
    geometric_plus: float

    @property
    def beta_plus(self):
        return self.dynamic_plus + self.geometric_plus

    @property
    def beta_minus(self):
        return -self.beta_plus

    @property
    def dynamic_minus(self):
        return -self.dynamic_plus


def lr_phases(ansatz, alpha_eff=None, ramp_time=None):
    """ Phases of the two invariant modes over ramp up, ramp down.

    The + mode starts and ends in |01>, the - mode in |10>.

    Args:
        ansatz (InvariantAnsatz): The ramp-up ansatz.

    Returns:
        LRPhases
    """
    ramp = invariant_ramp(ansatz, alpha_eff, ramp_time)
    a, c, T = ansatz.alpha_eff, ansatz.c, ansatz.duration

    def dynamic(t):
        return 2.0 * ansatz.f1(t) * ramp(t) + a * ansatz.f3(t)

    def geometric(t):
        f1, f2, f3 = ansatz.f(t)
        df1 = ansatz.f1(t, 1)
        df2 = -ansatz.f1(t, 2) / a
        return (f1 * df2 - f2 * df1) / (c * (c + f3))

    dyn, _ = quad(dynamic, 0.0, T, epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=200)
    geo, _ = quad(geometric, 0.0, T, epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=200)
    phases = LRPhases(dynamic_plus=-dyn / c, geometric_plus=-geo)
    logger.debug("LR phases for T = %.3f ns: dynamic %.12f, geometric %.3e",
                 T, phases.dynamic_plus, phases.geometric_plus)
    return phases


def predicted_s2_phases(ansatz, center, t_w, phases=None):
    """ phi_01 and phi_10 of an invariant gate in the six-level model.

    Args:
        ansatz (InvariantAnsatz): Ramp-up ansatz of the gate.
        center (float): (omega_a + omega_b)/2, rad/ns.
        t_w (float): Hold time, ns.
        phases (LRPhases): Precomputed phases.

    Returns:
        tuple(float, float): Unwrapped (phi_01, phi_10).
    """
    phases = phases or lr_phases(ansatz)
    t_g = 2.0 * ansatz.duration + t_w
    omega_p = math.sqrt((ansatz.alpha_eff / 2.0) ** 2 + ansatz.j_target ** 2)
    phi01 = -center * t_g + omega_p * t_w + phases.beta_plus
    phi10 = -center * t_g - omega_p * t_w + phases.beta_minus
    return phi01, phi10


__all__ = ["InvariantAnsatz", "InvariantRamp", "InfeasibleAnsatzError", "LRPhases", "UP",
           "DOWN", "boundary_value", "invariant_ansatz", "invariant_ramp",
           "invariant_operator", "invariant_residual", "frictionless_defect", "lr_phases",
           "predicted_s2_phases", "s2_hamiltonian"]
