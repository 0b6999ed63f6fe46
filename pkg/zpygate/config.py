# -*- coding: utf-8 -*-
"""
Run configuration.

A run is described by an INI file with the sections [device], [protocol],
[propagation] and [output]. All physical inputs are laboratory units (GHz,
MHz, ns); they are converted to rad/ns once, in RunConfig.device_spec().
Every key is optional and defaults to the shipped device preset.

Example::

    [device]
    preset = xmon-gmon
    j_max_mhz = 16.0

    [protocol]
    kind = both
    ramp_times_ns = 1.0, 2.0, 4.0
    mode = uncorrected
"""

import configparser
import math
import re
from dataclasses import dataclass, fields

import numpy as np

from .core.propagation import METHODS, METHOD_ADAPTIVE, PropagationConfig
from .device.coupled import DeviceSpec
from .errors import ConfigError, config_exception_factory
from .gate import FULL, MODELS
from .presets import PRESETS, GmonDevice
from .pulses.schedule import PROTOCOLS
from .utils.utils import ghz_to_rad, mhz_to_rad

BOTH = "both"
MODES = ("uncorrected", "corrected")
DEFAULT_RAMP_TIMES = tuple(float(t) for t in np.arange(1.0, 8.0 + 1e-9, 0.5))

_SECTION_RE = re.compile(r"^\s*\[([^\]]+)\]")
_KEY_RE = re.compile(r"^\s*([^=:#;\s\[][^=:]*?)\s*[=:]")


@dataclass(frozen=True)
class DeviceConfig:
    omega_a_ghz: float = GmonDevice.OMEGA_A_GHZ
    omega_b_ghz: float = GmonDevice.OMEGA_B_GHZ
    alpha_a_ghz: float = GmonDevice.ALPHA_A_GHZ
    alpha_b_ghz: float = GmonDevice.ALPHA_B_GHZ
    j_max_mhz: float = GmonDevice.J_MAX_MHZ
    charge_cutoff: int = GmonDevice.CHARGE_CUTOFF
    levels_kept: int = GmonDevice.LEVELS_KEPT


@dataclass(frozen=True)
class ProtocolConfig:
    kind: str = BOTH
    ramp_times_ns: tuple = DEFAULT_RAMP_TIMES
    mode: str = "uncorrected"
    model: str = FULL


@dataclass(frozen=True)
class PropagationConfigBlock:
    abs_tol: float = 1e-12
    rel_tol: float = 1e-12
    max_step_ns: float = math.inf
    method: str = METHOD_ADAPTIVE


@dataclass(frozen=True)
class OutputConfig:
    directory: str = "zpygate-out"
    samples_per_ns: int = 1000
    j_grid_points: int = 101


_SECTIONS = {
    "device": DeviceConfig,
    "protocol": ProtocolConfig,
    "propagation": PropagationConfigBlock,
    "output": OutputConfig,
}


@dataclass(frozen=True)
class RunConfig:
    """ A validated run configuration.

    Attributes:
        device (DeviceConfig): Device block.
        protocol (ProtocolConfig): Protocol block.
        propagation (PropagationConfigBlock): Integrator block.
        output (OutputConfig): Output block.
    """
    device: DeviceConfig = DeviceConfig()
    protocol: ProtocolConfig = ProtocolConfig()
    propagation: PropagationConfigBlock = PropagationConfigBlock()
    output: OutputConfig = OutputConfig()

    @property
    def protocols(self):
        """Protocol names selected by protocol.kind."""
        return PROTOCOLS if self.protocol.kind == BOTH else (self.protocol.kind,)

    @property
    def modes(self):
        return MODES if self.protocol.mode == BOTH else (self.protocol.mode,)

    def device_spec(self):
        """ Calibrate the device in rad/ns.

        The detuning is omega_b - (omega_a + alpha_a) of the configured
        frequencies.
        """
        d = self.device
        omega_a = ghz_to_rad(d.omega_a_ghz)
        alpha_a = ghz_to_rad(d.alpha_a_ghz)
        detuning = ghz_to_rad(d.omega_b_ghz) - omega_a - alpha_a
        return DeviceSpec.from_frequencies(omega_a, alpha_a, ghz_to_rad(d.alpha_b_ghz),
                                           mhz_to_rad(d.j_max_mhz), detuning,
                                           d.charge_cutoff, d.levels_kept)

    def propagation_config(self):
        p = self.propagation
        return PropagationConfig(abs_tol=p.abs_tol, rel_tol=p.rel_tol,
                                 max_step=p.max_step_ns, method=p.method)

    def to_text(self):
        """ INI text that parse_config() reads back to an equal RunConfig."""
        lines = []
        for name, block in (("device", self.device), ("protocol", self.protocol),
                            ("propagation", self.propagation), ("output", self.output)):
            lines.append(f"[{name}]")
            for f in fields(block):
                lines.append(f"{f.name} = {_format(getattr(block, f.name))}")
            lines.append("")
        return "\n".join(lines)


def _format(value):
    if isinstance(value, tuple):
        return ", ".join(repr(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _line_numbers(text):
    """{(section, key): line} and {section: line} of an INI text, 1-based."""
    keys, sections = {}, {}
    section = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        match = _SECTION_RE.match(line)
        if match:
            section = match.group(1).strip()
            sections.setdefault(section, lineno)
            continue
        match = _KEY_RE.match(line)
        if match and section is not None:
            keys.setdefault((section, match.group(1).strip().lower()), lineno)
    return keys, sections


def _convert(section, key, raw, default, lineno):
    try:
        if isinstance(default, tuple):
            return tuple(float(v) for v in raw.split(",") if v.strip())
        if isinstance(default, bool):
            raise ValueError("booleans are not configurable")
        if isinstance(default, int):
            return int(raw)
        if isinstance(default, float):
            return float(raw)
        return raw.strip()
    except ValueError as err:
        raise config_exception_factory(section, key, f"cannot parse {raw!r} ({err})",
                                       lineno) from err


def parse_config(text):
    """ Parse and validate an INI run configuration.

    Args:
        text (str): INI text.

    Returns:
        RunConfig

    Raises:
        ConfigError: With the offending line number where known.
    """
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as err:
        raise ConfigError(f"Malformed configuration: {err}",
                          lineno=getattr(err, "lineno", None)) from err
    keys, sections = _line_numbers(text)

    for section in parser.sections():
        if section not in _SECTIONS:
            raise config_exception_factory(section, "*", "unknown section",
                                           sections.get(section))

    device_defaults = {}
    if parser.has_option("device", "preset"):
        name = parser.get("device", "preset").strip()
        if name not in PRESETS:
            raise config_exception_factory("device", "preset",
                                           f"unknown preset {name!r}",
                                           keys.get(("device", "preset")))
        preset = PRESETS[name]
        device_defaults = dict(
            omega_a_ghz=preset.OMEGA_A_GHZ, omega_b_ghz=preset.OMEGA_B_GHZ,
            alpha_a_ghz=preset.ALPHA_A_GHZ, alpha_b_ghz=preset.ALPHA_B_GHZ,
            j_max_mhz=preset.J_MAX_MHZ, charge_cutoff=preset.CHARGE_CUTOFF,
            levels_kept=preset.LEVELS_KEPT)

    blocks = {}
    for section, cls in _SECTIONS.items():
        base = cls(**device_defaults) if section == "device" else cls()
        values = {}
        known = {f.name for f in fields(cls)}
        if parser.has_section(section):
            for key, raw in parser.items(section):
                if section == "device" and key == "preset":
                    continue
                lineno = keys.get((section, key))
                if key not in known:
                    raise config_exception_factory(section, key, "unknown key", lineno)
                values[key] = _convert(section, key, raw, getattr(base, key), lineno)
        block = cls(**{**{f.name: getattr(base, f.name) for f in fields(cls)}, **values})
        blocks[section] = block

    config = RunConfig(**blocks)
    _validate(config, keys)
    return config


def load_config(path=None):
    """Read a configuration file; the defaults when path is None."""
    if path is None:
        return RunConfig()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as err:
        raise ConfigError(f"Cannot read configuration {path}: {err}") from err
    return parse_config(text)


def _validate(config, keys):
    def fail(section, key, message):
        raise config_exception_factory(section, key, message, keys.get((section, key)))

    d = config.device
    for key in ("omega_a_ghz", "omega_b_ghz", "j_max_mhz"):
        if not getattr(d, key) > 0:
            fail("device", key, "must be positive")
    for key in ("alpha_a_ghz", "alpha_b_ghz"):
        if not getattr(d, key) < 0:
            fail("device", key, "must be negative")
    if d.charge_cutoff < 10:
        fail("device", "charge_cutoff", "must be at least 10")
    if d.levels_kept < 3:
        fail("device", "levels_kept", "must be at least 3")

    p = config.protocol
    if p.kind not in PROTOCOLS + (BOTH,):
        fail("protocol", "kind", f"must be one of {PROTOCOLS + (BOTH,)}")
    if p.mode not in MODES + (BOTH,):
        fail("protocol", "mode", f"must be one of {MODES + (BOTH,)}")
    if p.model not in MODELS:
        fail("protocol", "model", f"must be one of {MODELS}")
    ramps = np.asarray(p.ramp_times_ns)
    if ramps.size == 0 or np.any(ramps <= 0) or np.any(np.diff(ramps) <= 0):
        fail("protocol", "ramp_times_ns", "must be positive and strictly ascending")

    g = config.propagation
    for key in ("abs_tol", "rel_tol"):
        if not 0 < getattr(g, key) <= 1e-6:
            fail("propagation", key, "must lie in (0, 1e-6]")
    if not g.max_step_ns > 0:
        fail("propagation", "max_step_ns", "must be positive")
    if g.method not in METHODS:
        fail("propagation", "method", f"must be one of {METHODS}")

    o = config.output
    if o.samples_per_ns <= 0:
        fail("output", "samples_per_ns", "must be positive")
    if o.j_grid_points < 2:
        fail("output", "j_grid_points", "must be at least 2")
    if not o.directory:
        fail("output", "directory", "must not be empty")


__all__ = ["RunConfig", "DeviceConfig", "ProtocolConfig", "PropagationConfigBlock",
           "OutputConfig", "parse_config", "load_config"]
