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

One-dimensional finite-volume evolution along x1.

The hyperbolic part uses Rusanov interface fluxes, optionally with
minmod-limited reconstruction of the primitive fields and Heun time
stepping. The relaxation source is Strang-split: half a step of source,
a full hyperbolic step, half a step of source. The source half-step
freezes ``(u, eps, nu)`` per cell and integrates ``dC/dtau = -M nu pi``
over the proper time ``dt / (2 u0)`` with the implicit midpoint rule.
"""

import hashlib
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
import pandas as pd
import param
from configobj import ConfigObj

from .errors import (
    DomainError,
    PencilDegeneracyError,
    RecoveryError,
    SingularJacobianError,
    StepError,
)
from .fluxes import ConstantRelaxation, RelaxationCoefficient, all_fluxes, entropy_flux_array
from .fluxes import entropy_production_smooth
from .godunov import max_signal_speed
from .numerics import fd_step
from .state import admissible_fields, conserved_array, lorentz_factor, recover_fields
from .thermo import EquationOfState, derived, get_eos

logger = logging.getLogger(__name__)

SOURCE_TOLERANCE = 1e-14
SOURCE_MAX_ITERATIONS = 30
ENTROPY_TOLERANCE = 1e-10
SNAPSHOT_COLUMNS = ("t", "x", "eps", "nu", "C", "u1", "pi", "theta", "p")


class SimConfig(param.Parameterized):
    """Settings of a one-dimensional run.

    States are given as ``(u1, u2, u3, eps, nu, C)``.

    Attributes
    ----------
    eos : param.String
        Registry name of the equation of state.
    eos_parameters : param.Dict
        Keyword arguments of the registry entry.
    tau : param.Number
        Relaxation time, ``M = 1/tau``.
    cfl : param.Number
        Courant number in ``(0, 1)``.
    end_time : param.Number
    cells : param.Integer
        At least four cells.
    boundary : param.Selector
        ``periodic`` or zeroth-order ``outflow``.
    initial_condition : param.Selector
        ``riemann`` splits the domain at its midpoint into
        ``left_state`` and ``right_state``; ``pulse`` adds
        ``pulse_amplitude * sin(2 pi x / L)`` to ``u1`` and the relative
        energy of ``left_state``; ``uniform`` fills ``left_state``.
    output_cadence : param.Integer
        Snapshot every this many steps, 0 for first and last only.
    audit : param.Boolean
        Run the snapshot entropy audit.
    reconstruction : param.Selector
        ``first-order`` or ``muscl``.
    """

    eos = param.String(default="ideal-gas")
    eos_parameters = param.Dict(default={})
    tau = param.Number(default=0.1, bounds=(0, None), inclusive_bounds=(False, True))
    cfl = param.Number(default=0.4, bounds=(0, 1), inclusive_bounds=(False, False))
    end_time = param.Number(default=0.2, bounds=(0, None))
    cells = param.Integer(default=200, bounds=(4, None))
    x_lo = param.Number(default=0.0)
    x_hi = param.Number(default=1.0)
    boundary = param.Selector(default="periodic", objects=["periodic", "outflow"])
    initial_condition = param.Selector(
        default="riemann", objects=["riemann", "pulse", "uniform"]
    )
    left_state = param.NumericTuple(default=(0.0, 0.0, 0.0, 3.0, 0.8, 0.0), length=6)
    right_state = param.NumericTuple(default=(0.0, 0.0, 0.0, 3.0, 1.0, 0.0), length=6)
    pulse_amplitude = param.Number(default=0.1, bounds=(0, None))
    output_cadence = param.Integer(default=0, bounds=(0, None))
    max_steps = param.Integer(default=100000, bounds=(1, None))
    audit = param.Boolean(default=False)
    reconstruction = param.Selector(default="first-order", objects=["first-order", "muscl"])
    run_name = param.String(default="run")

    def __init__(self, **params):
        super().__init__(**params)
        if not self.x_hi > self.x_lo:
            raise ValueError(f"Domain must satisfy x_hi > x_lo, got [{self.x_lo}, {self.x_hi}].")

    def values(self) -> dict:
        """Parameter values without param's automatic ``name``."""
        out = dict(self.param.values())
        out.pop("name", None)
        return out

    def clone(self, **overrides) -> "SimConfig":
        return SimConfig(**{**self.values(), **overrides})

    def make_eos(self) -> EquationOfState:
        return get_eos(self.eos, **self.eos_parameters)

    def make_relaxation(self) -> RelaxationCoefficient:
        return ConstantRelaxation(tau=self.tau)


@dataclass(frozen=True)
class Grid1D:
    """Cell averages on a uniform grid with cached primitive fields.

    Attributes
    ----------
    eos : EquationOfState
    relaxation : RelaxationCoefficient
    x_lo, x_hi : float
    cons : np.ndarray
        Conserved densities, shape ``(cells, 6)``.
    prim : np.ndarray
        Primitive fields recovered from ``cons``.
    boundary : str
    time : float
    reconstruction : str
    """

    eos: EquationOfState
    relaxation: RelaxationCoefficient
    x_lo: float
    x_hi: float
    cons: np.ndarray
    prim: np.ndarray
    boundary: str = "periodic"
    time: float = 0.0
    reconstruction: str = "first-order"

    @property
    def cells(self) -> int:
        return self.cons.shape[0]

    @property
    def dx(self) -> float:
        return (self.x_hi - self.x_lo) / self.cells

    @property
    def centers(self) -> np.ndarray:
        return self.x_lo + (np.arange(self.cells) + 0.5) * self.dx

    def totals(self) -> np.ndarray:
        """``sum(cons) dx`` per component."""
        return np.sum(self.cons, axis=0) * self.dx

    def total_entropy(self) -> float:
        return float(np.sum(entropy_flux_array(self.eos, self.prim)[:, 0]) * self.dx)


def initial_fields(config: SimConfig, x: np.ndarray) -> np.ndarray:
    left = np.asarray(config.left_state, dtype=float)
    if config.initial_condition == "uniform":
        return np.tile(left, (x.size, 1))
    if config.initial_condition == "riemann":
        right = np.asarray(config.right_state, dtype=float)
        middle = 0.5 * (config.x_lo + config.x_hi)
        return np.where((x < middle)[:, None], left, right)
    phase = np.sin(2.0 * np.pi * (x - config.x_lo) / (config.x_hi - config.x_lo))
    W = np.tile(left, (x.size, 1))
    W[:, 0] += config.pulse_amplitude * phase
    W[:, 3] *= 1.0 + config.pulse_amplitude * phase
    return W


def initial_grid(config: SimConfig) -> Grid1D:
    """Grid holding the initial condition of ``config``.

    Raises
    ------
    DomainError
        If an initial state is inadmissible.
    """
    eos = config.make_eos()
    dx = (config.x_hi - config.x_lo) / config.cells
    x = config.x_lo + (np.arange(config.cells) + 0.5) * dx
    W = initial_fields(config, x)
    if not np.all(admissible_fields(eos, W)):
        raise DomainError("Initial condition contains inadmissible states.")
    return Grid1D(
        eos=eos,
        relaxation=config.make_relaxation(),
        x_lo=config.x_lo,
        x_hi=config.x_hi,
        cons=conserved_array(eos, W),
        prim=W,
        boundary=config.boundary,
        reconstruction=config.reconstruction,
    )


def cfl_dt(grid: Grid1D, cfl: float = 0.4) -> float:
    """``cfl * dx / max|lambda|`` over all cells.

    Raises
    ------
    StepError
        If the characteristic speeds cannot be computed.
    """
    try:
        speeds = max_signal_speed(grid.eos, grid.prim)
    except (PencilDegeneracyError, DomainError) as e:
        raise StepError(f"Characteristic speeds failed: {e}") from e
    fastest = float(np.max(speeds))
    if not np.isfinite(fastest) or fastest <= 0:
        raise StepError(f"Invalid maximum signal speed {fastest}.")
    return cfl * grid.dx / fastest


def _pad(a: np.ndarray, width: int, boundary: str) -> np.ndarray:
    mode = "wrap" if boundary == "periodic" else "edge"
    return np.pad(a, [(width, width)] + [(0, 0)] * (a.ndim - 1), mode=mode)


def _minmod(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.where(a * b > 0, np.sign(a) * np.minimum(np.abs(a), np.abs(b)), 0.0)


def _interface_states(grid: Grid1D, cons: np.ndarray, prim: np.ndarray):
    """Primitive and conserved values on both sides of the ``cells + 1`` interfaces."""
    if grid.reconstruction == "first-order":
        W = _pad(prim, 1, grid.boundary)
        c = _pad(cons, 1, grid.boundary)
        return W[:-1], W[1:], c[:-1], c[1:]

    W = _pad(prim, 2, grid.boundary)
    c = _pad(cons, 2, grid.boundary)
    slope = _minmod(W[1:-1] - W[:-2], W[2:] - W[1:-1])
    # cells -1 .. N, interfaces -1/2 .. N+1/2
    minus = W[1:-2] + 0.5 * slope[:-1]
    plus = W[2:-1] - 0.5 * slope[1:]
    fallback = ~(admissible_fields(grid.eos, minus) & admissible_fields(grid.eos, plus))
    minus[fallback] = W[1:-2][fallback]
    plus[fallback] = W[2:-1][fallback]
    c_minus = conserved_array(grid.eos, minus)
    c_plus = conserved_array(grid.eos, plus)
    c_minus[fallback] = c[1:-2][fallback]
    c_plus[fallback] = c[2:-1][fallback]
    return minus, plus, c_minus, c_plus


def flux_divergence(grid: Grid1D, cons: np.ndarray, prim: np.ndarray) -> np.ndarray:
    """Rusanov approximation of ``-d_x F^1`` per cell."""
    minus, plus, c_minus, c_plus = _interface_states(grid, cons, prim)
    F_minus = all_fluxes(grid.eos, minus)[:, 1, :]
    F_plus = all_fluxes(grid.eos, plus)[:, 1, :]
    a = np.maximum(max_signal_speed(grid.eos, minus), max_signal_speed(grid.eos, plus))
    interface = 0.5 * (F_minus + F_plus) - 0.5 * a[:, None] * (c_plus - c_minus)
    return -(interface[1:] - interface[:-1]) / grid.dx


def _recover(grid: Grid1D, cons: np.ndarray, guess: np.ndarray) -> np.ndarray:
    try:
        return recover_fields(grid.eos, cons, guess)
    except RecoveryError as e:
        cell = int(e.cells[0]) if e.cells.size else -1
        raise StepError(
            f"Recovery failed in cell {cell}: {e}", cell=cell, residual=e.residual
        ) from e
    except SingularJacobianError as e:
        raise StepError(f"Recovery Jacobian singular: {e}") from e


def hyperbolic_update(grid: Grid1D, dt: float) -> Grid1D:
    """Advance the source-free system by ``dt``."""
    try:
        if grid.reconstruction == "first-order":
            cons = grid.cons + dt * flux_divergence(grid, grid.cons, grid.prim)
            prim = _recover(grid, cons, grid.prim)
        else:
            stage_cons = grid.cons + dt * flux_divergence(grid, grid.cons, grid.prim)
            stage_prim = _recover(grid, stage_cons, grid.prim)
            cons = 0.5 * grid.cons + 0.5 * (
                stage_cons + dt * flux_divergence(grid, stage_cons, stage_prim)
            )
            prim = _recover(grid, cons, stage_prim)
    except (PencilDegeneracyError, DomainError) as e:
        raise StepError(f"Hyperbolic update failed: {e}") from e
    return replace(grid, cons=cons, prim=prim)


def relax_nonequilibrium(
    eos: EquationOfState, relaxation: RelaxationCoefficient, W: np.ndarray, dtau: np.ndarray
) -> np.ndarray:
    """Implicit midpoint step of ``dC/dtau = -M nu pi`` with ``(u, eps, nu)`` frozen.

    Returns
    -------
    np.ndarray
        New ``C`` per cell; cells with ``pi = 0`` are returned unchanged.

    Raises
    ------
    StepError
        If the scalar Newton iteration does not converge.
    """
    eps, nu, C0 = W[:, 3], W[:, 4], W[:, 5]
    C1 = C0.copy()

    def midpoint(C):
        mid = W.copy()
        mid[:, 5] = 0.5 * (C0 + C)
        return mid

    def residual(C, rows):
        mid = midpoint(C)[rows]
        pi = derived(eos, mid[:, 3], mid[:, 4], mid[:, 5]).pi
        return C[rows] - C0[rows] + dtau[rows] * relaxation(mid) * nu[rows] * pi

    rows = np.arange(W.shape[0])
    g = residual(C1, rows)
    tolerance = SOURCE_TOLERANCE * (1.0 + np.abs(C0))
    active = np.abs(g) > tolerance
    for _ in range(SOURCE_MAX_ITERATIONS):
        if not active.any():
            return C1
        idx = np.flatnonzero(active)
        mid_C = 0.5 * (C0[idx] + C1[idx])
        h = fd_step(mid_C)
        dpi = (
            derived(eos, eps[idx], nu[idx], mid_C + h).pi
            - derived(eos, eps[idx], nu[idx], mid_C - h).pi
        ) / (2.0 * h)
        mid = midpoint(C1)[idx]
        slope = 1.0 + 0.5 * dtau[idx] * relaxation(mid) * nu[idx] * dpi
        C1[idx] -= g[active] / slope
        g_new = residual(C1, idx)
        g = np.zeros_like(C0)
        g[idx] = g_new
        active = np.zeros_like(active)
        active[idx] = np.abs(g_new) > tolerance[idx]
    if active.any():
        cell = int(np.flatnonzero(active)[0])
        raise StepError(
            f"Relaxation step did not converge in cell {cell}.",
            cell=cell,
            residual=float(abs(g[cell])),
        )
    return C1


def source_update(grid: Grid1D, dt: float) -> Grid1D:
    """Relaxation sub-step over coordinate time ``dt``.

    Only the last conserved component changes, by ``n u0 (C_new - C)``
    with ``n`` and ``u0`` frozen; the primitive fields are then recovered.
    """
    W = grid.prim
    u0 = lorentz_factor(W[:, :3])
    try:
        C1 = relax_nonequilibrium(grid.eos, grid.relaxation, W, dt / u0)
    except DomainError as e:
        raise StepError(f"Relaxation step left the admissible domain: {e}") from e
    if np.array_equal(C1, W[:, 5]):
        return grid
    cons = grid.cons.copy()
    cons[:, 5] += (1.0 / W[:, 4]) * u0 * (C1 - W[:, 5])
    guess = W.copy()
    guess[:, 5] = C1
    return replace(grid, cons=cons, prim=_recover(grid, cons, guess))


def step(grid: Grid1D, dt: float) -> Grid1D:
    """Strang-split step: source ``dt/2``, hyperbolic ``dt``, source ``dt/2``.

    Raises
    ------
    StepError
        With the first failing cell and its recovery residual.
    """
    grid = source_update(grid, 0.5 * dt)
    grid = hyperbolic_update(grid, dt)
    grid = source_update(grid, 0.5 * dt)
    return replace(grid, time=grid.time + dt)


@dataclass
class AuditReport:
    """Per-step totals collected during a run."""

    times: list = field(default_factory=list)
    totals: list = field(default_factory=list)
    scales: list = field(default_factory=list)
    entropy: list = field(default_factory=list)
    max_pi: list = field(default_factory=list)

    def record(self, grid: Grid1D):
        self.times.append(grid.time)
        self.totals.append(grid.totals())
        self.scales.append(np.sum(np.abs(grid.cons), axis=0) * grid.dx)
        self.entropy.append(grid.total_entropy())
        pi = derived(grid.eos, grid.prim[:, 3], grid.prim[:, 4], grid.prim[:, 5]).pi
        self.max_pi.append(float(np.max(np.abs(pi))))

    def conservation_drift(self) -> float:
        """Largest per-step relative change of the totals of components 0-4."""
        if len(self.totals) < 2:
            return 0.0
        totals = np.array(self.totals)[:, :5]
        scales = np.array(self.scales)[:, :5]
        # components that start at zero are measured against their later size
        scales = np.maximum(np.maximum(scales[:-1], scales[1:]), np.finfo(float).tiny)
        return float(np.max(np.abs(np.diff(totals, axis=0)) / scales))

    def entropy_min_change(self) -> float:
        """Smallest per-step change of total entropy relative to its size."""
        if len(self.entropy) < 2:
            return 0.0
        entropy = np.array(self.entropy)
        scale = np.maximum(np.abs(entropy[:-1]), np.finfo(float).tiny)
        return float(np.min(np.diff(entropy) / scale))

    def entropy_non_decreasing(self, tolerance: float = ENTROPY_TOLERANCE) -> bool:
        return self.entropy_min_change() >= -tolerance

    def summary(self) -> dict:
        return {
            "steps": len(self.times) - 1,
            "final_time": self.times[-1] if self.times else 0.0,
            "conservation_drift": self.conservation_drift(),
            "entropy_min_change": self.entropy_min_change(),
            "entropy_non_decreasing": self.entropy_non_decreasing(),
            "max_abs_pi": max(self.max_pi) if self.max_pi else 0.0,
            "final_max_abs_pi": self.max_pi[-1] if self.max_pi else 0.0,
        }


@dataclass
class RunResult:
    """Outcome of :func:`run`.

    ``snapshots`` holds ``(step, grid)`` pairs. ``failure`` is the error
    message when a step aborted, in which case the trajectory is partial.
    """

    config: SimConfig
    grid: Grid1D
    snapshots: list
    audit: AuditReport
    steps: int
    failure: str | None = None

    @property
    def completed(self) -> bool:
        return self.failure is None


def run(config: SimConfig) -> RunResult:
    """Evolve the initial condition of ``config`` to ``end_time``.

    Step failures end the run with a partial trajectory and the failure
    message; they are not raised.

    Raises
    ------
    DomainError
        If the initial condition is inadmissible.
    """
    grid = initial_grid(config)
    audit = AuditReport()
    audit.record(grid)
    snapshots = [(0, grid)]
    steps = 0
    failure = None
    end = config.end_time
    while grid.time < end * (1.0 - 1e-14) and steps < config.max_steps:
        try:
            dt = min(cfl_dt(grid, config.cfl), end - grid.time)
            new_grid = step(grid, dt)
        except StepError as e:
            failure = str(e)
            logger.error("Run '%s' stopped at step %d: %s", config.run_name, steps, e)
            break
        grid = replace(new_grid, time=end) if end - new_grid.time < 1e-14 * end else new_grid
        steps += 1
        audit.record(grid)
        if config.output_cadence and steps % config.output_cadence == 0:
            snapshots.append((steps, grid))
    if snapshots[-1][0] != steps:
        snapshots.append((steps, grid))
    logger.info(
        "Run '%s' finished %d steps at t=%.6g with %d cells.",
        config.run_name, steps, grid.time, grid.cells,
    )
    return RunResult(
        config=config, grid=grid, snapshots=snapshots, audit=audit, steps=steps, failure=failure
    )


def restrict(values: np.ndarray) -> np.ndarray:
    """Average pairs of fine cells onto the next coarser grid."""
    return 0.5 * (values[0::2] + values[1::2])


def self_convergence_order(config: SimConfig, levels: int = 3) -> tuple:
    """Self-convergence order from runs with ``cells * 2**l`` cells.

    Returns
    -------
    tuple[np.ndarray, np.ndarray]
        L1 differences between consecutive levels of the conserved
        densities, and the observed orders ``log2(e_l / e_{l+1})``.
    """
    if levels < 3:
        raise ValueError("Self-convergence needs at least three levels.")
    grids = []
    for level in range(levels):
        result = run(config.clone(cells=config.cells * 2**level))
        if not result.completed:
            raise StepError(f"Convergence run failed: {result.failure}")
        grids.append(result.grid)
    errors = []
    for coarse, fine in zip(grids[:-1], grids[1:]):
        difference = coarse.cons - restrict(fine.cons)
        errors.append(float(np.sum(np.abs(difference)) * coarse.dx))
    errors = np.array(errors)
    orders = np.log2(errors[:-1] / errors[1:])
    logger.info("Self-convergence errors %s, orders %s", errors, orders)
    return errors, orders


def snapshot_entropy_defect(before: Grid1D, after: Grid1D) -> np.ndarray:
    """Pointwise ``|d_alpha S^alpha - M pi**2 / theta|`` from two snapshots.

    Time derivatives are one-sided between the snapshots and space
    derivatives centered on ``after``. Boundary cells of outflow grids
    are excluded.
    """
    dt = after.time - before.time
    if not dt > 0:
        raise ValueError("Snapshots must be ordered in time.")
    W = after.prim
    d_t = (after.prim - before.prim) / dt
    padded = _pad(W, 1, after.boundary)
    d_x = (padded[2:] - padded[:-2]) / (2.0 * after.dx)
    cells = range(W.shape[0]) if after.boundary == "periodic" else range(1, W.shape[0] - 1)
    defects = []
    for i in cells:
        gradients = np.zeros((4, 6))
        gradients[0] = d_t[i]
        gradients[1] = d_x[i]
        production = entropy_production_smooth(after.eos, after.relaxation, W[i], gradients)
        defects.append(production.defect)
    return np.array(defects)


def entropy_audit(config: SimConfig, levels: int = 3) -> pd.DataFrame:
    """Snapshot entropy defect at ``end_time`` for ``cells * 2**l`` cells.

    Each level runs to ``end_time`` and takes one further CFL step to
    form the time derivative.
    """
    rows = []
    for level in range(levels):
        level_config = config.clone(cells=config.cells * 2**level)
        result = run(level_config)
        if not result.completed:
            raise StepError(f"Entropy audit run failed: {result.failure}")
        before = result.grid
        after = step(before, cfl_dt(before, level_config.cfl))
        defect = snapshot_entropy_defect(before, after)
        rows.append(
            {
                "cells": level_config.cells,
                "dx": before.dx,
                "max_defect": float(np.max(defect)),
                "mean_defect": float(np.mean(defect)),
            }
        )
    return pd.DataFrame(rows)


def defect_trend(frame: pd.DataFrame) -> dict:
    """Whether the snapshot defects of :func:`entropy_audit` fall under refinement.

    ``entropy_defect_decreasing`` uses the mean over cells and is the
    audit gate. The max is reported as ``entropy_max_defect_decreasing``
    only: it sits in the cells of the steepest gradients and need not
    fall with the mean.
    """
    return {
        "entropy_defect_decreasing": bool(np.all(np.diff(frame["mean_defect"].to_numpy()) < 0)),
        "entropy_max_defect_decreasing": bool(
            np.all(np.diff(frame["max_defect"].to_numpy()) < 0)
        ),
    }


def snapshot_frame(grid: Grid1D) -> pd.DataFrame:
    W = grid.prim
    q = derived(grid.eos, W[:, 3], W[:, 4], W[:, 5])
    return pd.DataFrame(
        {
            "t": np.full(grid.cells, grid.time),
            "x": grid.centers,
            "eps": W[:, 3],
            "nu": W[:, 4],
            "C": W[:, 5],
            "u1": W[:, 0],
            "pi": q.pi,
            "theta": q.theta,
            "p": q.p,
        },
        columns=list(SNAPSHOT_COLUMNS),
    )


def write_snapshot(grid: Grid1D, directory, run_name: str, step_index: int) -> Path:
    """Write ``<run_name>_<step>.csv`` with round-trip float precision."""
    path = Path(directory) / f"{run_name}_{step_index}.csv"
    snapshot_frame(grid).to_csv(path, index=False, float_format="%.17g")
    return path


def config_hash(echo: dict) -> str:
    """SHA-256 of the configuration echo in sorted ``key = value`` form."""

    def lines(section, prefix=""):
        for key in sorted(section):
            value = section[key]
            if isinstance(value, dict):
                yield from lines(value, f"{prefix}{key}.")
            else:
                yield f"{prefix}{key} = {value!r}"

    return hashlib.sha256("\n".join(lines(echo)).encode()).hexdigest()


def write_manifest(path, echo: dict, summary: dict, version: str) -> Path:
    """Write the run manifest: version, config hash, config echo and audit summary."""
    manifest = ConfigObj()
    manifest.filename = str(path)
    manifest["mishydro"] = {"version": version, "config_hash": config_hash(echo)}
    manifest["config"] = echo
    manifest["audit"] = summary
    manifest.write()
    return Path(path)
