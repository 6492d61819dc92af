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

Finite differences and batched Newton iteration.

All routines operate on arrays whose last axis holds the unknowns, so
the same code serves a single state and a whole grid of cells.
"""

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import SingularJacobianError

logger = logging.getLogger(__name__)

FD_RELATIVE_STEP = 1e-6


def fd_step(x, relative: float = FD_RELATIVE_STEP) -> np.ndarray:
    """Central-difference step ``h = max(rel, rel*|x|)``."""
    return np.maximum(relative, relative * np.abs(x))


def jacobian(
    func: Callable[[np.ndarray], np.ndarray],
    x: np.ndarray,
    relative: float = FD_RELATIVE_STEP,
) -> np.ndarray:
    """Central finite-difference Jacobian of a batched function.

    Parameters
    ----------
    func : Callable
        Maps an array of shape ``(..., n)`` to shape ``(..., m)``.
    x : np.ndarray
        Evaluation points, shape ``(..., n)``.
    relative : float, default 1e-6
        Relative step passed to :func:`fd_step`.

    Returns
    -------
    np.ndarray
        Jacobian with shape ``(..., m, n)``.
    """
    x = np.asarray(x, dtype=float)
    h = fd_step(x, relative)
    columns = []
    for k in range(x.shape[-1]):
        forward = x.copy()
        backward = x.copy()
        forward[..., k] += h[..., k]
        backward[..., k] -= h[..., k]
        # the actual spacing, which differs from 2h by rounding
        spacing = forward[..., k] - backward[..., k]
        columns.append((func(forward) - func(backward)) / spacing[..., None])
    return np.stack(columns, axis=-1)


@dataclass
class NewtonResult:
    """Outcome of a batched Newton solve.

    Attributes
    ----------
    solution : np.ndarray
        Last iterate, shape ``(batch, n)``.
    iterations : np.ndarray
        Newton steps taken per row.
    residual : np.ndarray
        Infinity norm of the final residual per row.
    converged : np.ndarray
        Boolean mask of rows meeting their tolerance.
    """

    solution: np.ndarray
    iterations: np.ndarray
    residual: np.ndarray
    converged: np.ndarray


def newton_solve(
    func: Callable[[np.ndarray], np.ndarray],
    target: np.ndarray,
    guess: np.ndarray,
    tolerance: np.ndarray,
    max_iterations: int = 50,
    admissible: Callable[[np.ndarray], np.ndarray] | None = None,
    max_halvings: int = 40,
) -> NewtonResult:
    """Solve ``func(x) = target`` row by row with a damped Newton method.

    Rows that already meet their tolerance are never touched, so a fixed
    point is returned bit-for-bit. Steps leaving the admissible set are
    halved until they land inside it.

    Parameters
    ----------
    func : Callable
        Batched map ``(batch, n) -> (batch, n)``.
    target : np.ndarray
        Right-hand side, shape ``(batch, n)``.
    guess : np.ndarray
        Initial iterate, shape ``(batch, n)``.
    tolerance : np.ndarray
        Per-row bound on the residual infinity norm.
    max_iterations : int, default 50
    admissible : Callable, optional
        Returns a boolean mask of admissible rows.
    max_halvings : int, default 40

    Raises
    ------
    SingularJacobianError
        If a Newton Jacobian is singular or produces a non-finite step.
    """
    x = np.array(guess, dtype=float, copy=True)
    target = np.asarray(target, dtype=float)
    tolerance = np.broadcast_to(np.asarray(tolerance, dtype=float), x.shape[:1])
    residual = func(x) - target
    norm = np.max(np.abs(residual), axis=-1)
    done = norm <= tolerance
    iterations = np.zeros(x.shape[0], dtype=int)

    for _ in range(max_iterations):
        active = np.flatnonzero(~done)
        if active.size == 0:
            break
        xa = x[active]
        jac = jacobian(func, xa)
        try:
            step = np.linalg.solve(jac, -residual[active][..., None])[..., 0]
        except np.linalg.LinAlgError as e:
            raise SingularJacobianError(f"Newton Jacobian is singular: {e}") from e
        if not np.all(np.isfinite(step)):
            raise SingularJacobianError("Newton Jacobian is singular: non-finite step.")

        trial = xa + step
        if admissible is not None:
            scale = np.ones(active.size)
            for _ in range(max_halvings):
                bad = ~admissible(trial)
                if not bad.any():
                    break
                scale[bad] *= 0.5
                trial[bad] = xa[bad] + scale[bad, None] * step[bad]
            else:
                logger.debug("Newton damping exhausted for %d rows.", int(bad.sum()))
                trial[bad] = xa[bad]

        x[active] = trial
        residual[active] = func(trial) - target[active]
        iterations[active] += 1
        norm[active] = np.max(np.abs(residual[active]), axis=-1)
        done = norm <= tolerance

    return NewtonResult(
        solution=x, iterations=iterations, residual=norm, converged=done
    )
