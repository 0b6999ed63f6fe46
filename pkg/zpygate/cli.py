# -*- coding: utf-8 -*-
"""
Command-line front door.

    zpygate spectrum [--config FILE] [--out DIR] [-v]
    zpygate ramp --protocol invariant
    zpygate gate --T 4 [--mode corrected] [--protocol invariant] [--model full]
    zpygate sweep [--mode corrected] [--workers 4]

Exit status is 0 on success, 1 on invalid input or unwritable output and 2 on
numerical failure.
Diagnostics go to stderr, run summaries to stdout.
"""

import argparse
import logging
import os
import sys
from dataclasses import replace

import numpy as np
import pandas as pd

from ._version import __version__
from .calibration import (CORRECTED, MODES, UNCORRECTED, OptimizationProblem,
                          optimize_gate, seed_correction, sweep)
from .config import load_config
from .device.coupled import coupled_hamiltonian, effective_hamiltonian, lowest_levels
from .errors import NumericalError, ValidationError
from .gate import MODELS, REPORT_COLUMNS, simulate_gate
from .pulses.faquad import faquad_mu
from .pulses.invariant import invariant_residual, lr_phases
from .pulses.schedule import PROTOCOLS, design_schedule
from .utils.utils import rad_to_ghz, rad_to_mhz

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2

ECHO_NAME = "config.echo.ini"
AUDIT_POINTS = 1000


class _ArgumentParser(argparse.ArgumentParser):
    """Report usage errors as ValidationError so they map to exit status 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise ValidationError(f"{self.prog}: {message}")


def _write(frame, out_dir, name):
    path = os.path.join(out_dir, name)
    frame.to_csv(path, index=False, float_format="%.12e", encoding="utf-8")
    logger.info("Wrote %s", path)
    return path


def cmd_spectrum(config, out_dir):
    """ Six lowest levels of the full and effective models over a J grid."""
    device = config.device_spec()
    grid = np.linspace(0.0, device.j_max, config.output.j_grid_points)
    rows = []
    for j in grid:
        full = lowest_levels(coupled_hamiltonian(device, j, check_truncation=j == grid[-1]))
        eff = lowest_levels(effective_hamiltonian(device, j))
        row = {"J_MHz": rad_to_mhz(j)}
        row.update({f"E{k + 1}_full_GHz": rad_to_ghz(e) for k, e in enumerate(full)})
        row.update({f"E{k + 1}_eff_GHz": rad_to_ghz(e) for k, e in enumerate(eff)})
        row["max_dev_MHz"] = rad_to_mhz(float(np.max(np.abs(full - eff))))
        rows.append(row)
    frame = pd.DataFrame(rows)
    path = _write(frame, out_dir, "spectrum.csv")
    print(f"spectrum: {len(frame)} J points, max deviation "
          f"{frame['max_dev_MHz'].max():.4f} MHz -> {path}")
    return frame


def _audit(device, protocol, ramp_time):
    row = {"T_ns": ramp_time, "protocol": protocol}
    schedule = design_schedule(device, protocol, ramp_time)
    ramp = schedule.ramp
    t = np.linspace(0.0, ramp_time, AUDIT_POINTS + 2)[1:-1]
    mu = np.asarray(faquad_mu(ramp, t))
    row.update({"t_w_ns": schedule.t_w, "Tg_ns": schedule.total_time,
                "mu_mean": float(mu.mean()), "mu_rel_spread": float(mu.std() / mu.mean())})
    if protocol == "invariant":
        ansatz = ramp.ansatz
        phases = lr_phases(ansatz)
        row.update({
            "invariant_residual": max(invariant_residual(ansatz, x) for x in t),
            "beta_plus": phases.beta_plus, "beta_minus": phases.beta_minus,
            "beta_dynamic_plus": phases.dynamic_plus,
            "beta_geometric_plus": phases.geometric_plus})
    return schedule, row


def cmd_ramp(config, out_dir, protocols=None):
    """ Waveform CSVs of both protocols per ramp time, plus a ramp audit."""
    device = config.device_spec()
    rows = []
    for ramp_time in config.protocol.ramp_times_ns:
        for protocol in protocols or config.protocols:
            try:
                schedule, row = _audit(device, protocol, ramp_time)
            except (ValidationError, NumericalError) as err:
                logger.warning("%s ramp T = %g ns: %s", protocol, ramp_time, err)
                rows.append({"T_ns": ramp_time, "protocol": protocol, "status": str(err)})
                continue
            name = f"waveform_{protocol}_T{ramp_time:g}ns.csv"
            schedule.to_csv(os.path.join(out_dir, name), config.output.samples_per_ns)
            row["status"] = "ok"
            rows.append(row)
    columns = ["T_ns", "protocol", "status", "t_w_ns", "Tg_ns", "mu_mean", "mu_rel_spread",
               "invariant_residual", "beta_plus", "beta_minus", "beta_dynamic_plus",
               "beta_geometric_plus"]
    frame = pd.DataFrame(rows, columns=columns)
    path = _write(frame, out_dir, "ramp_audit.csv")
    failed = int((frame["status"] != "ok").sum())
    print(f"ramp: {len(frame)} ramps, {failed} infeasible -> {path}")
    return frame


def cmd_gate(config, out_dir, ramp_time, mode=UNCORRECTED, protocol="invariant",
             model=None, seed_only=False):
    """ One gate report, optionally after the Stark-shift correction."""
    device = config.device_spec()
    model = model or config.protocol.model
    prop = config.propagation_config()
    schedule = design_schedule(device, protocol, ramp_time)
    if seed_only:
        t_w0, delta0 = seed_correction(device, schedule)
        print(f"seed {protocol} T = {ramp_time:g} ns: t_w0 = {t_w0:.9f} ns, "
              f"Delta0/2pi = {rad_to_mhz(delta0):.6f} MHz")
        return None
    if mode == CORRECTED:
        problem = OptimizationProblem.seeded(device, protocol, ramp_time, config=prop,
                                             model=model)
        result = optimize_gate(problem)
        device = device.with_detuning(result.delta)
        schedule = design_schedule(device, protocol, ramp_time, result.t_w)
    outcome = simulate_gate(device, schedule, model, prop)
    frame = pd.DataFrame([outcome.to_row()], columns=list(REPORT_COLUMNS))
    path = _write(frame, out_dir, "gate_report.csv")
    print(f"gate {protocol} {mode} ({model}) T = {ramp_time:g} ns, T_g = "
          f"{outcome.total_time:.4f} ns: infidelity {outcome.infidelity:.3e}, phase "
          f"deviation {outcome.phase_deviation:.3e} rad, leakage {outcome.leakage:.3e} -> {path}")
    return outcome


def cmd_sweep(config, out_dir, protocols=None, modes=None, workers=1):
    """ Uncorrected and/or corrected sweeps over the configured ramp times."""
    device = config.device_spec()
    prop = config.propagation_config()
    results = {}
    for mode in modes or config.modes:
        for protocol in protocols or config.protocols:
            result = sweep(device, protocol, config.protocol.ramp_times_ns, mode, prop,
                           workers=workers, model=config.protocol.model)
            path = os.path.join(out_dir, f"sweep_{mode}_{protocol}.csv")
            result.to_csv(path)
            best = result.best()
            summary = (f"best infidelity {best.infidelity:.3e} at T = {best.ramp_time:g} ns"
                       if best else "no successful rows")
            print(f"sweep {mode} {protocol}: {len(result.rows)} rows, {summary} -> {path}")
            results[(mode, protocol)] = result
    return results


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI run configuration")
    common.add_argument("--out", help="output directory (overrides [output] directory)")
    common.add_argument("--protocol", choices=PROTOCOLS, help="restrict to one protocol")
    common.add_argument("--mode", choices=MODES, help="uncorrected or Stark-shift corrected")
    common.add_argument("--workers", type=int, default=1, help="sweep worker processes")
    common.add_argument("--seed-only", action="store_true",
                        help="print the analytic t_w0 and Delta0 and exit")
    common.add_argument("-v", "--verbose", action="count", default=0,
                        help="-v for INFO, -vv for DEBUG logging")

    parser = _ArgumentParser(prog="zpygate", description="Fast CZ gate design for "
                             "tunable-coupling transmons.",
                             formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)
    sub.add_parser("spectrum", parents=[common], help="lowest levels versus J")
    sub.add_parser("ramp", parents=[common], help="waveforms and ramp audit")
    gate = sub.add_parser("gate", parents=[common], help="single gate report")
    gate.add_argument("--T", dest="ramp_time", type=float,
                      help="ramp time in ns (default: first configured value)")
    gate.add_argument("--model", choices=MODELS, help="simulation model")
    sub.add_parser("sweep", parents=[common], help="sweeps over the ramp time")
    return parser


def _configure_logging(verbosity):
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 \
        else logging.DEBUG
    logging.basicConfig(stream=sys.stderr, level=level,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")


def run(args):
    config = load_config(args.config)
    if args.out:
        config = replace(config, output=replace(config.output, directory=args.out))
    out_dir = config.output.directory
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, ECHO_NAME), "w", encoding="utf-8") as fh:
        fh.write(config.to_text())
    protocols = (args.protocol,) if args.protocol else None
    modes = (args.mode,) if args.mode else None

    if args.command == "spectrum":
        cmd_spectrum(config, out_dir)
    elif args.command == "ramp":
        cmd_ramp(config, out_dir, protocols)
    elif args.command == "gate":
        ramp_time = args.ramp_time or config.protocol.ramp_times_ns[0]
        if args.ramp_time is not None and args.ramp_time <= 0:
            raise ValidationError("--T must be positive")
        cmd_gate(config, out_dir, ramp_time, args.mode or config.modes[0],
                 args.protocol or "invariant", args.model, args.seed_only)
    elif args.command == "sweep":
        if args.seed_only:
            for protocol in protocols or config.protocols:
                for ramp_time in config.protocol.ramp_times_ns:
                    cmd_gate(config, out_dir, ramp_time, protocol=protocol, seed_only=True)
            return
        if args.workers < 1:
            raise ValidationError("--workers must be at least 1")
        cmd_sweep(config, out_dir, protocols, modes, args.workers)


def main(argv=None):
    """ Console entry point; returns the exit status."""
    try:
        args = build_parser().parse_args(argv)
    except ValidationError as err:
        print(err, file=sys.stderr)
        return EXIT_VALIDATION
    _configure_logging(args.verbose)
    try:
        run(args)
    except ValidationError as err:
        logger.error("%s", err)
        return EXIT_VALIDATION
    except OSError as err:
        logger.error("Cannot write output: %s", err)
        return EXIT_VALIDATION
    except NumericalError as err:
        logger.error("%s", err)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
