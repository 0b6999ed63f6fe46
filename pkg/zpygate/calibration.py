# -*- coding: utf-8 -*-
"""
Stark-shift correction of the CZ gate and sweeps over the ramp time.

The |02> level pushes |11> up by the Stark shift dOmega(t) while the
coupling is on. Detuning qubit b by Delta ~ <dOmega> restores the
|11>/|20> resonance on average; the residual is removed by a joint simplex
search over (t_w, Delta) on the full-model infidelity. Every candidate
Delta recalibrates qubit b and re-synthesizes the ramp with
alpha_eff = alpha_a + Delta.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from scipy.integrate import quad
from scipy.optimize import minimize

from .core.propagation import DEFAULT_CONFIG
from .device.schrieffer_wolff import stark_shift
from .errors import ValidationError, ZPyGateError
from .gate import FULL, REPORT_COLUMNS, simulate_gate
from .pulses.schedule import PROTOCOLS, design_schedule, waiting_time
from .utils.utils import ensure_ascending, mhz_to_rad, rad_to_mhz

logger = logging.getLogger(__name__)

UNCORRECTED = "uncorrected"
CORRECTED = "corrected"
MODES = (UNCORRECTED, CORRECTED)

MAX_DETUNING = mhz_to_rad(5.0)
MAX_EVALUATIONS = 500
T_W_XTOL = 1e-4
DELTA_XTOL = mhz_to_rad(1e-3)
F_TOL = 1e-9
QUAD_TOL = 1e-12

SWEEP_COLUMNS = REPORT_COLUMNS + ("mean_stark_over_2pi_MHz", "Delta_seed_over_2pi_MHz",
                                  "converged")


def mean_stark_shift(device, schedule, couplings=None):
    """ Time average of dOmega(t) over the schedule.

    Args:
        device (DeviceSpec): Supplies alpha_a + alpha_b and Delta.
        schedule (ControlSchedule): The coupling schedule.
        couplings (DressedCouplings): Overrides device.couplings.

    Returns:
        float: <dOmega> in rad/ns.
    """
    r = couplings or device.couplings
    alpha_sum = device.alpha_a + device.alpha_b

    def shift(j):
        return stark_shift(alpha_sum, device.detuning, r.r2 * j, r.r3 * j)[0]

    ramp_area, _ = quad(lambda t: shift(schedule.coupling(t)), 0.0, schedule.ramp_time,
                        epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=200)
    # the ramp down mirrors the ramp up
    total = 2.0 * ramp_area + shift(schedule.hold_coupling) * schedule.t_w
    return total / schedule.total_time


def seed_correction(device, schedule):
    """ Analytic starting point (t_w0, Delta0) of the correction.

    Returns:
        tuple(float, float): t_w0 in ns from the waiting-time formula and
        Delta0 = <dOmega> in rad/ns.
    """
    r = device.couplings
    t_w0 = waiting_time(schedule.ramp, r.r3 / r.r1)
    delta0 = mean_stark_shift(device, schedule)
    logger.info("Seed for T = %.3f ns: t_w0 = %.6f ns, Delta0/2pi = %.4f MHz",
                schedule.ramp_time, t_w0, rad_to_mhz(delta0))
    return t_w0, delta0


@dataclass(frozen=True)
class OptimizationProblem:
    """ Joint (t_w, Delta) minimization of 1 - F for one protocol and ramp time.

    Attributes:
        device (DeviceSpec): Template device; its detuning is replaced by
            each candidate.
        protocol (str): ``faquad`` or ``invariant``.
        ramp_time (float): T in ns.
        t_w_seed (float): Analytic waiting time, ns.
        delta_seed (float): Starting detuning, rad/ns.
        max_detuning (float): Bound on |Delta|, rad/ns.
        config (PropagationConfig): Integration settings of each evaluation.
        model (str): Simulation model of the objective.
        max_evaluations (int): Evaluation budget.
    """
    device: object
    protocol: str
    ramp_time: float
    t_w_seed: float
    delta_seed: float
    max_detuning: float = MAX_DETUNING
    config: object = DEFAULT_CONFIG
    model: str = FULL
    max_evaluations: int = MAX_EVALUATIONS

    def __post_init__(self):
        # evaluate() swallows ConvergenceError
        if self.model == FULL:
            logger.debug("Truncation change %.2e rad/ns", self.device.truncation_change)

    @classmethod
    def seeded(cls, device, protocol, ramp_time, **kwargs):
        """Build a problem whose seed comes from seed_correction()."""
        schedule = design_schedule(device, protocol, ramp_time)
        t_w0, delta0 = seed_correction(device, schedule)
        return cls(device, protocol, ramp_time, t_w0, delta0, **kwargs)

    @property
    def detuning_bound(self):
        """|Delta| is kept below both max_detuning and J_M/4."""
        return min(self.max_detuning, 0.999 * self.device.j_max / 4.0)

    @property
    def bounds(self):
        b = self.detuning_bound
        return ((0.5 * self.t_w_seed, 1.5 * self.t_w_seed), (-b, b))

    def evaluate(self, t_w, delta):
        """ 1 - F at one candidate; failures score 1."""
        try:
            device = self.device.with_detuning(delta)
            schedule = design_schedule(device, self.protocol, self.ramp_time, t_w)
            outcome = simulate_gate(device, schedule, self.model, self.config)
        except ZPyGateError as err:
            logger.debug("Objective failed at t_w = %.6f, Delta = %.3e: %s", t_w, delta, err)
            return 1.0, None
        return outcome.infidelity, outcome


@dataclass(frozen=True)
class OptimizationResult:
    t_w: float
    delta: float
    infidelity: float
    seed_infidelity: float
    converged: bool
    evaluations: int
    outcome: object = field(default=None, repr=False)


def optimize_gate(problem):
    """ Nelder-Mead search over (t_w, Delta) from the seed.

    Variables are scaled so that one unit equals the convergence threshold
    (1e-4 ns, 2 pi x 1 kHz); convergence needs both the simplex diameter
    below one unit and an objective spread below 1e-9.

    Args:
        problem (OptimizationProblem): The problem.

    Returns:
        OptimizationResult: The best point; converged is False when the
        evaluation budget ran out.
    """
    scale = np.array([T_W_XTOL, DELTA_XTOL])
    origin = np.array([problem.t_w_seed, problem.delta_seed])
    lo, hi = np.array(problem.bounds).T
    origin = np.clip(origin, lo, hi)
    steps = np.array([0.05, mhz_to_rad(0.05)]) / scale

    def objective(u):
        t_w, delta = origin + u * scale
        value, _ = problem.evaluate(t_w, delta)
        logger.debug("t_w = %.6f ns, Delta/2pi = %.6f MHz -> %.6e",
                     t_w, rad_to_mhz(delta), value)
        return value

    seed_value = objective(np.zeros(2))
    simplex = np.array([[0.0, 0.0], [steps[0], 0.0], [0.0, steps[1]]])
    res = minimize(objective, np.zeros(2), method="Nelder-Mead",
                   bounds=list(zip((lo - origin) / scale, (hi - origin) / scale)),
                   options={"xatol": 1.0, "fatol": F_TOL, "maxfev": problem.max_evaluations,
                            "initial_simplex": simplex})
    t_w, delta = origin + res.x * scale
    best, outcome = problem.evaluate(t_w, delta)
    # never worse than the seed or the uncorrected gate
    for candidate in (tuple(origin), (problem.t_w_seed, problem.device.detuning)):
        value, result = problem.evaluate(*candidate)
        if result is not None and value < best:
            (t_w, delta), best, outcome = candidate, value, result
    converged = bool(res.success)
    if not converged:
        logger.warning("Optimization for %s T = %.3f ns stopped after %d evaluations: %s",
                       problem.protocol, problem.ramp_time, res.nfev, res.message)
    else:
        logger.info("Optimized %s T = %.3f ns: infidelity %.3e (seed %.3e) in %d evaluations",
                    problem.protocol, problem.ramp_time, best, seed_value, res.nfev)
    return OptimizationResult(t_w=float(t_w), delta=float(delta), infidelity=float(best),
                              seed_infidelity=float(seed_value), converged=converged,
                              evaluations=int(res.nfev), outcome=outcome)


@dataclass(frozen=True)
class SweepRow:
    ramp_time: float
    t_w: float
    delta: float
    infidelity: float
    phase_deviation: float
    losses: tuple
    leakage: float
    mean_stark_shift: float
    delta_seed: float
    converged: bool
    protocol: str
    model: str
    error: str = ""

    @property
    def total_time(self):
        return 2.0 * self.ramp_time + self.t_w

    def to_row(self):
        values = (self.ramp_time, self.t_w, rad_to_mhz(self.delta), self.total_time,
                  self.protocol, self.model, self.infidelity, self.phase_deviation,
                  *self.losses, self.leakage, rad_to_mhz(self.mean_stark_shift),
                  rad_to_mhz(self.delta_seed), self.converged)
        return dict(zip(SWEEP_COLUMNS, values))


@dataclass(frozen=True)
class SweepResult:
    """Sweep rows ordered by total gate time."""
    rows: tuple
    protocol: str
    mode: str

    def to_frame(self):
        return pd.DataFrame([r.to_row() for r in self.rows], columns=list(SWEEP_COLUMNS))

    def to_csv(self, path):
        self.to_frame().to_csv(path, index=False, float_format="%.12e")
        logger.info("Wrote sweep %s", path)

    def best(self):
        """The row with the lowest finite infidelity."""
        finite = [r for r in self.rows if math.isfinite(r.infidelity)]
        return min(finite, key=lambda r: r.infidelity) if finite else None


def _failed_row(ramp_time, protocol, model, err):
    nan = float("nan")
    return SweepRow(ramp_time, nan, nan, nan, nan, (nan,) * 4, nan, nan, nan, False,
                    protocol, model, str(err))


def sweep_point(device, protocol, ramp_time, mode, config=DEFAULT_CONFIG, model=FULL):
    """ One sweep row; failures are recorded in the row, not raised."""
    try:
        schedule = design_schedule(device, protocol, ramp_time)
        t_w0, delta0 = seed_correction(device, schedule)
        stark = mean_stark_shift(device, schedule)
        if mode == UNCORRECTED:
            outcome = simulate_gate(device, schedule, model, config)
            t_w, delta, converged = schedule.t_w, device.detuning, True
        else:
            problem = OptimizationProblem(device, protocol, ramp_time, t_w0, delta0,
                                          config=config, model=model)
            result = optimize_gate(problem)
            if result.outcome is None:
                raise ValidationError("No feasible point found by the optimizer")
            outcome = result.outcome
            t_w, delta, converged = result.t_w, result.delta, result.converged
    except ZPyGateError as err:
        logger.warning("Sweep point %s T = %.3f ns failed: %s", protocol, ramp_time, err)
        return _failed_row(ramp_time, protocol, model, err)
    row = SweepRow(ramp_time, t_w, delta, outcome.infidelity, abs(outcome.phase_deviation),
                   outcome.losses, outcome.leakage, stark, delta0, converged, protocol, model)
    logger.info("Sweep point %s %s T = %.3f ns done: infidelity %.3e",
                mode, protocol, ramp_time, row.infidelity)
    return row


def _sweep_task(args):
    return sweep_point(*args)


def sweep(device, protocol, ramp_times, mode=UNCORRECTED, config=DEFAULT_CONFIG,
          workers=1, model=FULL):
    """ Gate figures of merit over a grid of ramp times.

    Args:
        device (DeviceSpec): Device at zero detuning.
        protocol (str): ``faquad`` or ``invariant``.
        ramp_times (sequence of float): Positive ascending T values, ns.
        mode (str): ``uncorrected`` (analytic t_w, Delta = 0) or
            ``corrected`` (optimize_gate per row).
        config (PropagationConfig): Integration settings.
        workers (int): Worker processes; 1 runs in-process.
        model (str): Simulation model.

    Returns:
        SweepResult

    Raises:
        ConvergenceError: If the full model is not converged in levels_kept;
            other failures are recorded per row.
    """
    if protocol not in PROTOCOLS:
        raise ValidationError(f"Unknown protocol {protocol!r}")
    if mode not in MODES:
        raise ValidationError(f"Unknown mode {mode!r}")
    if workers < 1:
        raise ValidationError("workers must be at least 1")
    ramp_times = ensure_ascending(ramp_times, "ramp times")
    if model == FULL:
        logger.debug("Truncation change %.2e rad/ns", device.truncation_change)
    tasks = [(device, protocol, float(T), mode, config, model) for T in ramp_times]
    if workers == 1:
        rows = [_sweep_task(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_task, tasks))
    rows.sort(key=lambda r: (not math.isfinite(r.total_time), r.total_time, r.ramp_time))
    return SweepResult(tuple(rows), protocol, mode)


def protocol_ratio(faquad, invariant):
    """Median FAQUAD / invariant infidelity ratio over rows present in both sweeps."""
    by_t = {r.ramp_time: r.infidelity for r in invariant.rows}
    ratios = [r.infidelity / by_t[r.ramp_time] for r in faquad.rows
              if r.ramp_time in by_t and by_t[r.ramp_time] > 0
              and math.isfinite(r.infidelity) and math.isfinite(by_t[r.ramp_time])]
    return float(np.median(ratios)) if ratios else float("nan")
