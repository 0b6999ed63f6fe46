"""
This file contains parameters of the supported devices.

Frequencies are given in laboratory units (GHz, MHz) exactly as quoted for
the device; conversion to rad/ns happens in zpygate.config.
"""


# Internal base class: Do not use.
class DevicePreset(object):
    CHARGE_CUTOFF = 20
    LEVELS_KEPT = 8


class GmonDevice(DevicePreset):
    """ Two Xmon transmons joined by a gmon tunable coupler.

    The qubit b frequency places |11> on resonance with |20>,
    i.e. omega_b = omega_a + alpha_a.
    """
    NAME = "xmon-gmon"
    OMEGA_A_GHZ = 6.00
    OMEGA_B_GHZ = 5.67
    ALPHA_A_GHZ = -0.33
    ALPHA_B_GHZ = -0.33
    J_MAX_MHZ = 16.0


PRESETS = {
    GmonDevice.NAME: GmonDevice,
}
