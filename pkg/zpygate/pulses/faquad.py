# -*- coding: utf-8 -*-
"""
FAQUAD coupling ramps for the S2 two-level system

    H2 = (alpha/2) sigma_z + J~1(t) sigma_x.

The ramp keeps the adiabaticity parameter

    mu = |<+|dH2/dt|->| / (E+ - E-)^2

constant along the passage; with J~1(0) = 0 and J~1(T) = J_T this gives

    J~1(t) = -alpha J_T s / sqrt(alpha^2 + 4 J_T^2 (1 - s^2)),  s = t/T.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import ValidationError

FAQUAD = "faquad"
INVARIANT = "invariant"
KINDS = (FAQUAD, INVARIANT)


class RampWaveform:
    """ Base class of J~1(t) ramps on [0, T].

    Subclasses provide __call__ and derivative, both vectorized over t.
    Times outside [0, T] are clamped to the nearest endpoint.
    """
    kind = None

    def _clamp(self, t):
        return np.clip(np.asarray(t, dtype=float), 0.0, self.ramp_time)

    def sample(self, n=10000):
        """(t, J~1(t)) on an n-point uniform grid over [0, T]."""
        t = np.linspace(0.0, self.ramp_time, n)
        return t, self(t)

    @property
    def target(self):
        raise NotImplementedError

    @property
    def ramp_time(self):
        raise NotImplementedError


def _scalar(value, t):
    return float(value) if np.ndim(t) == 0 else value


@dataclass(frozen=True)
class FaquadRamp(RampWaveform):
    """ A FAQUAD ramp.

    Attributes:
        alpha_eff (float): S2 splitting alpha_a + Delta, rad/ns, negative.
        j_target (float): J~1(T), rad/ns.
        duration (float): Ramp time T, ns.
    """
    alpha_eff: float
    j_target: float
    duration: float
    kind = FAQUAD

    @property
    def target(self):
        return self.j_target

    @property
    def ramp_time(self):
        return self.duration

    def __call__(self, t):
        s = self._clamp(t) / self.duration
        a, jt = self.alpha_eff, self.j_target
        value = -a * jt * s / np.sqrt(a * a + 4.0 * jt * jt * (1.0 - s * s))
        return _scalar(value, t)

    def derivative(self, t):
        """dJ~1/dt, analytic."""
        s = self._clamp(t) / self.duration
        a, jt = self.alpha_eff, self.j_target
        d = a * a + 4.0 * jt * jt * (1.0 - s * s)
        value = -a * jt * (a * a + 4.0 * jt * jt) / (self.duration * d ** 1.5)
        return _scalar(value, t)


def faquad_ramp(alpha_eff, j_target, ramp_time):
    """ Build a FAQUAD ramp.

    Args:
        alpha_eff (float): Effective anharmonicity, rad/ns, < 0.
        j_target (float): Final coupling J~1(T), rad/ns, > 0.
        ramp_time (float): T in ns, > 0.

    Returns:
        FaquadRamp
    """
    if not alpha_eff < 0:
        raise ValidationError("alpha_eff must be negative")
    if not j_target > 0:
        raise ValidationError("J~1 target must be positive")
    if not ramp_time > 0:
        raise ValidationError("Ramp time must be positive")
    return FaquadRamp(float(alpha_eff), float(j_target), float(ramp_time))


def faquad_mu(ramp, t):
    """ Adiabaticity parameter mu(t) of any ramp in the S2 system.

    mu = |dJ~1/dt alpha| / (alpha^2 + 4 J~1^2)^(3/2)
    """
    j = np.asarray(ramp(t))
    dj = np.asarray(ramp.derivative(t))
    a = ramp.alpha_eff
    value = np.abs(dj * a) / (a * a + 4.0 * j * j) ** 1.5
    return _scalar(value, t)


def faquad_mu_constant(alpha_eff, j_target, ramp_time):
    """Closed-form mu of a FAQUAD ramp: J_T / (T |alpha| sqrt(alpha^2 + 4 J_T^2))."""
    return j_target / (ramp_time * abs(alpha_eff) * np.sqrt(alpha_eff ** 2 + 4.0 * j_target ** 2))
