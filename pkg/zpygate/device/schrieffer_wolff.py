# -*- coding: utf-8 -*-
"""
Schrieffer-Wolff elimination of |02> from the S3 block.

In the basis (|02>, |11>, |20>) with energies measured from 2 omega_a +
alpha_a the block reads

    H3 = [[A, J2, 0], [J2, Delta, J3], [0, J3, 0]]   (A = alpha_a + alpha_b + 2 Delta)

and H0 (no J2) is perturbed by V = J2 (|02><11| + h.c.). The generator

    S = a1 (|02><11| - |11><02|) + a2 (|02><20| - |20><02|)

solves [S, H0] = -V, and H' = H0 + [S, V]/2 gives a Stark shift of |11>
together with a correction of the |11>-|20> coupling.
"""

import logging
from dataclasses import dataclass

import numpy as np

from ..core.operators import HermitianOperator
from ..errors import SchriefferWolffError, ValidationError

logger = logging.getLogger(__name__)

RESONANCE_TOL = 1e-6


@dataclass(frozen=True)
class StarkShiftData:
    """ Second-order corrections from the |02> level.

    Attributes:
        delta_omega (float): Stark shift of |11>, rad/ns.
        delta_j3 (float): Correction to the |11>-|20> coupling, rad/ns.
        a1 (float): Generator coefficient on |02><11|.
        a2 (float): Generator coefficient on |02><20|.
    """
    delta_omega: float
    delta_j3: float
    a1: float
    a2: float


def stark_shift(alpha_sum, detuning, j2, j3):
    """ Closed-form corrections; vectorized over j2 and j3.

    Args:
        alpha_sum (float): alpha_a + alpha_b, rad/ns.
        detuning (float): Delta, rad/ns.
        j2, j3 (float or numpy.ndarray): Dressed couplings, rad/ns.

    Returns:
        tuple: (delta_omega, delta_j3, a1, a2).

    Raises:
        SchriefferWolffError: If the denominator is within 1e-6 of zero.
    """
    j2 = np.asarray(j2, dtype=float)
    j3 = np.asarray(j3, dtype=float)
    big = alpha_sum + 2.0 * detuning
    small = alpha_sum + detuning
    denom = j3 ** 2 - small * big
    if np.any(np.abs(denom) < RESONANCE_TOL):
        raise SchriefferWolffError(
            "Schrieffer-Wolff denominator J3^2 - (alpha_sum + Delta)(alpha_sum + 2 Delta) "
            "vanishes: |02> is resonant with the S3 doublet")
    delta_omega = j2 ** 2 * big / denom
    delta_j3 = 0.5 * j2 ** 2 * j3 / denom
    a1 = -j2 * big / denom
    a2 = -j2 * j3 / denom
    if delta_omega.ndim == 0:
        return float(delta_omega), float(delta_j3), float(a1), float(a2)
    return delta_omega, delta_j3, a1, a2


def sw_reduction(device, j2, j3):
    """ Stark shift and coupling correction for one pair of couplings.

    Args:
        device (DeviceSpec): Supplies alpha_a + alpha_b and Delta.
        j2 (float): J~2 in rad/ns.
        j3 (float): J~3 in rad/ns, |J~3| < |alpha_a + alpha_b + Delta| / 4.

    Returns:
        StarkShiftData
    """
    alpha_sum = device.alpha_a + device.alpha_b
    if abs(j3) >= abs(alpha_sum + device.detuning) / 4.0:
        raise ValidationError(
            f"|J3| = {abs(j3):.4e} rad/ns is outside the perturbative range "
            f"|alpha_a + alpha_b + Delta|/4 = {abs(alpha_sum + device.detuning) / 4.0:.4e}")
    return StarkShiftData(*stark_shift(alpha_sum, device.detuning, j2, j3))


def s3_hamiltonian(alpha_sum, detuning, j2, j3):
    """H3 in (|02>, |11>, |20>), energies relative to |20>."""
    return HermitianOperator(np.array([
        [alpha_sum + 2.0 * detuning, j2, 0.0],
        [j2, detuning, j3],
        [0.0, j3, 0.0]]))


def sw_generator(data):
    """The anti-Hermitian generator S in (|02>, |11>, |20>)."""
    return np.array([[0.0, data.a1, data.a2],
                     [-data.a1, 0.0, 0.0],
                     [-data.a2, 0.0, 0.0]], dtype=complex)


def sw_effective_hamiltonian(data, detuning, j3):
    """The 2x2 block of H' in (|11>, |20>)."""
    return HermitianOperator(np.array([
        [detuning + data.delta_omega, j3 + data.delta_j3],
        [j3 + data.delta_j3, 0.0]]))
