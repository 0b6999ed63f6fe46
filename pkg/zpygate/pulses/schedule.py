# -*- coding: utf-8 -*-
"""
The on / hold / off coupling schedule of a CZ gate.

The ramp designs J~1; the physical knob is the single coupling
J(t) = J~1(t) / r1, from which J~2 = r2 J and J~3 = r3 J follow. The ramp
down is the time mirror of the ramp up.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy.integrate import quad

from ..errors import ValidationError
from ..utils.utils import rad_to_ghz
from .faquad import FAQUAD, INVARIANT, faquad_ramp
from .invariant import UP, invariant_ansatz, invariant_ramp

logger = logging.getLogger(__name__)

QUAD_TOL = 1e-12
PROTOCOLS = (FAQUAD, INVARIANT)


def waiting_time(ramp, j3_ratio):
    """ Hold time that completes the pi rotation of |11> in S3.

    t_w = (pi - 2 int_0^T J~3 dt) / J~3(T) with J~3 = j3_ratio * J~1.

    Args:
        ramp (RampWaveform): The J~1 ramp.
        j3_ratio (float): r3 / r1.

    Returns:
        float: t_w in ns.

    Raises:
        ValidationError: If J~3(T) <= 0 or the ramps alone exceed area pi/2.
    """
    j3_end = j3_ratio * ramp.target
    if not j3_end > 0:
        raise ValidationError("J~3(T) must be positive")
    area, err = quad(ramp, 0.0, ramp.ramp_time, epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=200)
    area *= j3_ratio
    t_w = (math.pi - 2.0 * area) / j3_end
    if t_w <= 0:
        raise ValidationError(
            f"Ramp area {area:.6f} rad reaches pi/2: no positive waiting time for "
            f"T = {ramp.ramp_time} ns")
    logger.debug("Waiting time for T = %.3f ns: %.9f ns (quad error %.1e)",
                 ramp.ramp_time, t_w, err)
    return t_w


@dataclass(frozen=True)
class ControlSchedule:
    """ J(t) over [0, T_g], T_g = 2 T + t_w.

    Attributes:
        ramp (RampWaveform): The J~1 ramp up.
        t_w (float): Hold time, ns.
        r1 (float): J~1 / J.
    """
    ramp: object
    t_w: float
    r1: float = 1.0

    @property
    def ramp_time(self):
        return self.ramp.ramp_time

    @property
    def total_time(self):
        return 2.0 * self.ramp.ramp_time + self.t_w

    @property
    def hold_coupling(self):
        """J on the hold window."""
        return self.ramp.target / self.r1

    def coupling(self, t):
        """ Physical coupling J(t), vectorized; zero outside [0, T_g]."""
        t_arr = np.asarray(t, dtype=float)
        T, t_g = self.ramp_time, self.total_time
        mirrored = np.where(t_arr > T + self.t_w, t_g - t_arr, t_arr)
        j = np.where(t_arr <= T, self.ramp(np.clip(t_arr, 0.0, T)), self.ramp.target)
        j = np.where(t_arr > T + self.t_w, self.ramp(np.clip(mirrored, 0.0, T)), j)
        j = np.where((t_arr < 0) | (t_arr > t_g), 0.0, j) / self.r1
        return float(j) if np.ndim(t) == 0 else j

    def __call__(self, t):
        return self.coupling(t)

    def segments(self):
        """((start, end, name), ...) of the ramp up, hold and ramp down."""
        T = self.ramp_time
        return ((0.0, T, "up"), (T, T + self.t_w, "hold"), (T + self.t_w, self.total_time, "down"))

    def to_frame(self, samples_per_ns=1000):
        """ Sampled waveform with columns t_ns, J_over_2pi_GHz."""
        if samples_per_ns <= 0:
            raise ValidationError("samples_per_ns must be positive")
        times = []
        for start, end, _ in self.segments():
            n = max(2, int(math.ceil((end - start) * samples_per_ns)) + 1)
            times.append(np.linspace(start, end, n)[:-1])
        times.append(np.array([self.total_time]))
        t = np.concatenate(times)
        return pd.DataFrame({"t_ns": t, "J_over_2pi_GHz": rad_to_ghz(self.coupling(t))})

    def to_csv(self, path, samples_per_ns=1000):
        self.to_frame(samples_per_ns).to_csv(path, index=False, float_format="%.12e")
        logger.info("Wrote waveform %s", path)


def build_schedule(ramp, t_w, r1=1.0):
    """ Assemble the symmetric schedule.

    Args:
        ramp (RampWaveform): Feasible J~1 ramp up.
        t_w (float): Hold time, ns, >= 0.
        r1 (float): J~1 / J of the device.

    Returns:
        ControlSchedule
    """
    if t_w < 0:
        raise ValidationError(f"t_w must be non-negative, got {t_w}")
    if not r1 > 0:
        raise ValidationError("r1 must be positive")
    return ControlSchedule(ramp, float(t_w), float(r1))


def design_ramp(protocol, alpha_eff, j_target, ramp_time, degree=5):
    """A FAQUAD or invariant ramp up by protocol name."""
    if protocol == FAQUAD:
        return faquad_ramp(alpha_eff, j_target, ramp_time)
    if protocol == INVARIANT:
        return invariant_ramp(invariant_ansatz(alpha_eff, j_target, ramp_time, UP, degree))
    raise ValidationError(f"Unknown protocol {protocol!r}")


def design_schedule(device, protocol, ramp_time, t_w=None):
    """ The gate schedule of a device.

    The ramp uses alpha_eff = alpha_a + Delta and ends at J~1 = r1 J_M;
    without an explicit t_w the analytic waiting time is used.
    """
    couplings = device.couplings
    ramp = design_ramp(protocol, device.alpha_eff, couplings.r1 * device.j_max, ramp_time)
    if t_w is None:
        t_w = waiting_time(ramp, couplings.r3 / couplings.r1)
    return build_schedule(ramp, t_w, couplings.r1)
