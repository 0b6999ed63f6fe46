"""Unit conversions and phase helpers shared across zpygate.

All energies inside the package are angular frequencies in rad/ns (hbar = 1).
Laboratory inputs arrive in GHz or MHz and are converted here.
"""

import math

import numpy as np

from ..errors import ValidationError

TWO_PI = 2.0 * math.pi


def ghz_to_rad(f_ghz):
    """Convert an ordinary frequency in GHz to an angular frequency in rad/ns."""
    return TWO_PI * f_ghz


def rad_to_ghz(w):
    """Convert an angular frequency in rad/ns to GHz."""
    return w / TWO_PI


def mhz_to_rad(f_mhz):
    """Convert an ordinary frequency in MHz to an angular frequency in rad/ns."""
    return TWO_PI * f_mhz * 1e-3


def rad_to_mhz(w):
    """Convert an angular frequency in rad/ns to MHz."""
    return w / TWO_PI * 1e3


def wrap_phase(phi):
    """Map angles onto the principal branch (-pi, pi]."""
    wrapped = np.mod(np.negative(phi) + math.pi, TWO_PI)
    wrapped = math.pi - wrapped
    if np.ndim(wrapped) == 0:
        return float(wrapped)
    return wrapped


def reduce_phase(phi, period):
    """Representative of phi modulo period in (-period/2, period/2]."""
    half = period / 2.0
    r = phi - period * math.floor(phi / period)
    if r > half:
        r -= period
    return r


def ensure_ascending(values, name="values"):
    """Check that a sequence is strictly ascending and positive."""
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValidationError(f"{name} must be a non-empty 1-D sequence")
    if np.any(arr <= 0):
        raise ValidationError(f"{name} must be positive")
    if np.any(np.diff(arr) <= 0):
        raise ValidationError(f"{name} must be strictly ascending")
    return arr
