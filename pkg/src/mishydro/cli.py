"""
Copyright 2026 MISHydro Contributors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.

===

Command-line entry point.

Exit codes: 0 success, 1 a checked property failed, 2 invalid input or
inadmissible state.
"""

import argparse
import logging
import sys
from pathlib import Path

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from . import __version__
from .config import Configuration, load_config
from .errors import ConfigError, DomainError, MisError
from .fluxes import RelaxingFlow, smooth_entropy_audit
from .godunov import definiteness_audit, pencil_speeds
from .sampling import make_rng, reference_state, sample_states, spawn_rngs
from .shock import LaxStatus, fit_entropy_scaling, hugoniot_locus, weak_points
from .solver import defect_trend, entropy_audit, run, write_manifest, write_snapshot
from .state import PrimState
from .thermo import check_conditions

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2

MANUFACTURED_C0 = 0.1
MANUFACTURED_VELOCITY = 0.3
MANUFACTURED_SPACINGS = (0.04, 0.02, 0.01)
MANUFACTURED_MIN_ORDER = 1.7

CONDITION_COLUMNS = [
    "eps", "nu", "C", "hessian_eig_min", "hessian_eig_mid", "hessian_eig_max",
    "condition_1", "condition_2", "minor_condition_1", "minor_condition_2",
    "strict", "degenerate", "status",
]
SPEED_COLUMNS = [
    "u1", "u2", "u3", "eps", "nu", "C",
    "condition_1", "condition_2", "minor_condition_1", "minor_condition_2",
    "min_eigenvalue", "max_eigenvalue", "relative_margin", "symmetry_defect",
    "orientation", "max_speed", "causal",
    "lambda_1", "lambda_2", "lambda_3", "lambda_4", "lambda_5", "lambda_6",
    "at_rest", "parity_defect",
]
HUGONIOT_COLUMNS = [
    "kind", "branch", "family", "amplitude", "sigma", "E", "lax", "residual",
    "u1", "u2", "u3", "eps", "nu", "C", "slope",
]


def write_csv(frame: pd.DataFrame, path: Path) -> Path:
    frame.to_csv(path, index=False, float_format="%.17g")
    logger.info("Wrote %s (%d rows)", path, len(frame))
    return path


def _condition_row(eos, W) -> dict:
    return check_conditions(eos, W[3], W[4], W[5]).as_row()


def _speed_row(eos, W, covectors, rng) -> dict:
    U = PrimState.from_array(W)
    row = definiteness_audit(eos, U, covectors, rng)
    speeds = pencil_speeds(eos, W)
    row.update({f"lambda_{i + 1}": float(s) for i, s in enumerate(speeds)})
    row["at_rest"] = bool(not np.any(W[:3]))
    row["parity_defect"] = float(np.max(np.abs(speeds + speeds[::-1])))
    return row


def _parallel(jobs: int):
    return Parallel(n_jobs=jobs)


def check_eos(configuration: Configuration, args, out: Path) -> int:
    """Audit concavity and the subsidiary conditions on sampled states."""
    eos = configuration.make_eos()
    settings = configuration.run
    states = sample_states(configuration.sampling, settings.samples, make_rng(settings.seed))
    rows = _parallel(settings.jobs)(delayed(_condition_row)(eos, W) for W in states)
    frame = pd.DataFrame(rows, columns=CONDITION_COLUMNS)
    write_csv(frame, out / "check_eos.csv")
    failed = int(np.count_nonzero(frame["status"] != "pass"))
    if failed:
        logger.warning("%d of %d states failed the condition checks.", failed, len(frame))
        return EXIT_FAILED
    return EXIT_OK


def speeds(configuration: Configuration, args, out: Path) -> int:
    """Characteristic speeds and definiteness margins.

    The first row is the configured reference state at rest.
    """
    eos = configuration.make_eos()
    settings = configuration.run
    sampling = configuration.sampling
    count = settings.samples
    states = np.empty((0, 6))
    if count > 0:
        states = np.vstack(
            [reference_state(sampling), sample_states(sampling, count - 1, make_rng(settings.seed))]
        )
    rngs = spawn_rngs(settings.seed, count)
    rows = _parallel(settings.jobs)(
        delayed(_speed_row)(eos, W, sampling.covectors, rng) for W, rng in zip(states, rngs)
    )
    frame = pd.DataFrame(rows, columns=SPEED_COLUMNS)
    write_csv(frame, out / "speeds.csv")
    acausal = int(np.count_nonzero(~frame["causal"].astype(bool)))
    if acausal:
        logger.warning("%d of %d states are not causal.", acausal, len(frame))
        return EXIT_FAILED
    return EXIT_OK


def _locus_frame(eos, U_L, family, branch, settings):
    locus = hugoniot_locus(
        eos, U_L, family, steps=settings.steps, step_size=settings.step_size, branch=branch
    )
    frame = locus.to_frame()
    fit = {
        "kind": "fit",
        "branch": branch,
        "family": family,
        "slope": fit_entropy_scaling(locus, settings.fit_window),
    }
    bad = [
        p for p in weak_points(locus, settings.weak_threshold)
        if p.lax == LaxStatus.ADMISSIBLE and not p.entropy_production > 0
    ]
    return pd.concat([frame, pd.DataFrame([fit])], ignore_index=True), len(bad), locus.stalled


def hugoniot(configuration: Configuration, args, out: Path) -> int:
    """Hugoniot loci, one CSV per family with a fitted slope row per branch."""
    eos = configuration.make_eos()
    settings = configuration.hugoniot
    U_L = PrimState.from_array(settings.left_state)
    tasks = [(k, b) for k in settings.families for b in settings.branches]
    results = _parallel(configuration.run.jobs)(
        delayed(_locus_frame)(eos, U_L, k, b, settings) for k, b in tasks
    )
    violations = 0
    for family in settings.families:
        frames = [r[0] for (k, _), r in zip(tasks, results) if k == family]
        write_csv(
            pd.concat(frames, ignore_index=True).reindex(columns=HUGONIOT_COLUMNS),
            out / f"hugoniot_family{family}.csv",
        )
    for (family, branch), (_, bad, stalled) in zip(tasks, results):
        if stalled:
            logger.warning("Locus for family %d, branch %+d stalled.", family, branch)
        violations += bad
    if violations:
        logger.warning("%d weak Lax shocks with non-positive entropy production.", violations)
        return EXIT_FAILED
    return EXIT_OK


def simulate(configuration: Configuration, args, out: Path) -> int:
    """Run the solver and write snapshots and the run manifest.

    With ``--audit`` the exit status follows the mean snapshot entropy
    defect; the max trend is recorded in the manifest alongside.
    """
    config = configuration.simulation
    result = run(config)
    for step_index, grid in result.snapshots:
        write_snapshot(grid, out, config.run_name, step_index)
    summary = result.audit.summary()
    summary["failure"] = result.failure or ""
    status = EXIT_OK if result.completed and result.audit.entropy_non_decreasing() else EXIT_FAILED
    if config.audit:
        frame = entropy_audit(config)
        write_csv(frame, out / f"{config.run_name}_entropy_audit.csv")
        trend = defect_trend(frame)
        summary.update(trend)
        if not trend["entropy_defect_decreasing"]:
            status = EXIT_FAILED
    write_manifest(
        out / f"{config.run_name}.manifest", configuration.echo(), summary, __version__
    )
    return status


def entropy_audit_command(configuration: Configuration, args, out: Path) -> int:
    """Second-law audit on an exact relaxing flow and on solver snapshots."""
    config = configuration.simulation
    eos = configuration.make_eos()
    left = config.left_state
    flow = RelaxingFlow(
        eos,
        config.make_relaxation(),
        eps=left[3],
        nu=left[4],
        C0=left[5] if left[5] != 0 else MANUFACTURED_C0,
        velocity=MANUFACTURED_VELOCITY,
    )
    manufactured = smooth_entropy_audit(flow, spacings=MANUFACTURED_SPACINGS)
    rows = [
        {"kind": "manufactured", "spacing": h, "max_defect": d, "mean_defect": d}
        for h, d in zip(manufactured.spacings, manufactured.defects)
    ]
    solver_frame = entropy_audit(config)
    solver_frame.insert(0, "kind", "solver")
    frame = pd.concat([pd.DataFrame(rows), solver_frame], ignore_index=True)
    write_csv(frame, out / "entropy_audit.csv")

    orders_ok = bool(np.all(manufactured.orders >= MANUFACTURED_MIN_ORDER))
    trend = defect_trend(solver_frame)
    logger.info(
        "Manufactured orders %s; solver mean defects %s, max defects %s",
        manufactured.orders,
        solver_frame["mean_defect"].to_numpy(),
        solver_frame["max_defect"].to_numpy(),
    )
    if not trend["entropy_max_defect_decreasing"]:
        logger.info("Max snapshot defect does not fall under refinement; the gate uses the mean.")
    return EXIT_OK if orders_ok and trend["entropy_defect_decreasing"] else EXIT_FAILED


COMMANDS = {
    "check-eos": check_eos,
    "speeds": speeds,
    "hugoniot": hugoniot,
    "simulate": simulate,
    "entropy-audit": entropy_audit_command,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="Configuration file.")
    common.add_argument("--out", type=Path, default=Path("."), help="Output directory.")
    common.add_argument("--seed", type=int, help="Seed of the Philox generator.")
    common.add_argument("--samples", type=int, help="Number of sampled states.")
    common.add_argument("--jobs", type=int, help="Parallel workers for batch audits.")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="Debug logging.")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="Warnings only.")

    parser = argparse.ArgumentParser(
        prog="mishydro",
        description="Generalized Mueller-Israel-Stewart bulk viscosity audits and solver.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("check-eos", parents=[common], help="Concavity and condition audit.")
    commands.add_parser("speeds", parents=[common], help="Characteristic speeds and causality.")
    commands.add_parser("hugoniot", parents=[common], help="Hugoniot loci and entropy production.")
    simulate_parser = commands.add_parser("simulate", parents=[common], help="Run the solver.")
    simulate_parser.add_argument(
        "--audit", action="store_true", help="Snapshot entropy audit under refinement."
    )
    commands.add_parser(
        "entropy-audit", parents=[common], help="Smooth-flow second-law audit."
    )
    return parser


def configure_logging(verbose: bool, quiet: bool):
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(name)s %(levelname)s: %(message)s",
        force=True,
    )


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    configure_logging(args.verbose, args.quiet)

    overrides = {
        "run": {"seed": args.seed, "samples": args.samples, "jobs": args.jobs},
    }
    if getattr(args, "audit", False):
        overrides["simulation"] = {"audit": True}
    try:
        configuration = load_config(args.config, overrides)
    except ConfigError as e:
        logger.error("%s", e)
        return EXIT_INPUT

    try:
        args.out.mkdir(parents=True, exist_ok=True)
        return COMMANDS[args.command](configuration, args, args.out)
    except (ConfigError, DomainError) as e:
        logger.error("%s", e)
        return EXIT_INPUT
    except MisError as e:
        logger.error("%s failed: %s", args.command, e)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
