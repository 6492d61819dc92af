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

Rankine-Hugoniot analysis of planar discontinuities along x1.

A discontinuity with left state ``U_L`` (``x < sigma t``) and right state
``U_R`` satisfies ``[F^1] = sigma [F^0]`` with ``[q] = q(U_R) - q(U_L)``.
The relaxation source is bounded and does not enter the jump conditions.

Hugoniot loci are traced by pseudo-arclength continuation of the jump
conditions divided by the amplitude, ``U_R = U_L + a d``, which removes
the trivial branch and starts the locus at ``(d, sigma, a) = (r_k,
lambda_k, 0)``.
"""

import enum
import logging
from dataclasses import dataclass, field, replace

import numpy as np
import pandas as pd
from scipy.optimize import brentq

from .errors import DomainError, SingularJacobianError
from .fluxes import all_fluxes, entropy_flux_array
from .godunov import pencil_speeds
from .numerics import jacobian, newton_solve
from .state import PrimState, admissible_fields
from .thermo import EquationOfState, derived

logger = logging.getLogger(__name__)

RH_TOLERANCE = 1e-10
JUMP_TOLERANCE = 1e-14
LAX_BAND = 1e-10
MAX_HALVINGS = 6
SIMPLE_GAP = 1e-6
WEAK_THRESHOLD = 0.1

STATE_COLUMNS = ("u1", "u2", "u3", "eps", "nu", "C")


class LaxStatus(str, enum.Enum):
    ADMISSIBLE = "admissible"
    NOT_ADMISSIBLE = "not-admissible"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class HugoniotPoint:
    """A discontinuity satisfying the jump conditions.

    Attributes
    ----------
    left, right : PrimState
        States on either side, ``left`` at ``x < sigma t``.
    sigma : float
        Shock speed.
    family : int
        Characteristic family, 1-based in ascending speed order.
    amplitude : float
        Euclidean norm of the primitive jump.
    entropy_production : float
        ``[S^1] - sigma [S^0]``.
    residual : float
        Infinity norm of the jump-condition residual.
    lax : LaxStatus
    """

    left: PrimState
    right: PrimState
    sigma: float
    family: int
    amplitude: float
    entropy_production: float = 0.0
    residual: float = 0.0
    lax: LaxStatus = LaxStatus.UNDETERMINED

    def as_row(self) -> dict:
        row = {
            "family": self.family,
            "amplitude": self.amplitude,
            "sigma": self.sigma,
            "E": self.entropy_production,
            "lax": self.lax.value,
            "residual": self.residual,
        }
        row.update(dict(zip(STATE_COLUMNS, self.right.array)))
        return row


@dataclass
class HugoniotLocus:
    """One branch of a Hugoniot locus.

    ``points[0]`` is the trivial point ``(U_L, lambda_k(U_L))``.
    ``stalled`` is set when continuation stopped before the requested
    number of steps.
    """

    family: int
    branch: int
    points: list = field(default_factory=list)
    stalled: bool = False

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([p.amplitude for p in self.points])

    @property
    def entropy_productions(self) -> np.ndarray:
        return np.array([p.entropy_production for p in self.points])

    @property
    def speeds(self) -> np.ndarray:
        return np.array([p.sigma for p in self.points])

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame([p.as_row() for p in self.points])
        frame.insert(0, "branch", self.branch)
        frame.insert(0, "kind", "point")
        return frame


def _fields(U) -> np.ndarray:
    return U.array if isinstance(U, PrimState) else np.asarray(U, dtype=float)


def rh_residual(eos: EquationOfState, U_L, U_R, sigma: float) -> np.ndarray:
    """``[F^1] - sigma [F^0]`` with right-minus-left jumps."""
    F_L = all_fluxes(eos, _fields(U_L))
    F_R = all_fluxes(eos, _fields(U_R))
    return (F_R[..., 1, :] - F_L[..., 1, :]) - np.asarray(sigma)[..., None] * (
        F_R[..., 0, :] - F_L[..., 0, :]
    )


def rh_tolerance(eos: EquationOfState, U_L) -> float:
    """Accepted residual ``1e-10 (1 + max|F^0(U_L)|)``."""
    return RH_TOLERANCE * (1.0 + float(np.max(np.abs(all_fluxes(eos, _fields(U_L))[0]))))


def shock_entropy_production(eos: EquationOfState, point: HugoniotPoint) -> float:
    """Strength ``[S^1] - sigma [S^0]`` of the entropy production at the front."""
    S_L = entropy_flux_array(eos, point.left.array)
    S_R = entropy_flux_array(eos, point.right.array)
    return float((S_R[1] - S_L[1]) - point.sigma * (S_R[0] - S_L[0]))


def lax_classify(eos: EquationOfState, point: HugoniotPoint) -> LaxStatus:
    """Lax inequalities for a ``k``-shock.

    ``lambda_k(U_R) < sigma < lambda_k(U_L)`` together with
    ``lambda_{k-1}(U_L) < sigma < lambda_{k+1}(U_R)`` where those
    families exist. Margins within ``1e-10`` give ``UNDETERMINED``.
    """
    k = point.family - 1
    left = pencil_speeds(eos, point.left.array)
    right = pencil_speeds(eos, point.right.array)
    sigma = point.sigma
    margins = [sigma - right[k], left[k] - sigma]
    if k + 1 < left.size:
        margins.append(right[k + 1] - sigma)
    if k > 0:
        margins.append(sigma - left[k - 1])
    margins = np.array(margins)
    if np.all(margins > LAX_BAND):
        return LaxStatus.ADMISSIBLE
    if np.any(margins < -LAX_BAND):
        return LaxStatus.NOT_ADMISSIBLE
    return LaxStatus.UNDETERMINED


def _complete(eos: EquationOfState, point: HugoniotPoint) -> HugoniotPoint:
    point = replace(point, entropy_production=shock_entropy_production(eos, point))
    return replace(point, lax=lax_classify(eos, point))


def make_point(
    eos: EquationOfState, U_L: PrimState, U_R: PrimState, sigma: float, family: int
) -> HugoniotPoint:
    """Assemble a point with residual, entropy production and Lax status."""
    residual = float(np.max(np.abs(rh_residual(eos, U_L, U_R, sigma))))
    amplitude = float(np.linalg.norm(U_R.array - U_L.array))
    point = HugoniotPoint(
        left=U_L, right=U_R, sigma=float(sigma), family=family,
        amplitude=amplitude, residual=residual,
    )
    return _complete(eos, point)


def family_eigenvector(eos: EquationOfState, U_L: PrimState, family: int):
    """Speed and unit right eigenvector of a simple family at ``U_L``.

    The eigenvector is oriented so that ``lambda_k`` increases along it.

    Raises
    ------
    DomainError
        If the family index is out of range or its speed is not simple.
    """
    if family not in range(1, 7):
        raise DomainError(f"Family index must lie in 1..6, got {family}.")
    k = family - 1
    W = U_L.array
    speeds = pencil_speeds(eos, W)
    lam = speeds[k]
    gap = np.min(np.abs(np.delete(speeds, k) - lam))
    if not gap > SIMPLE_GAP * (1.0 + abs(lam)):
        raise DomainError(f"Family {family} is not simple at U_L: speed gap {gap:.3e}.")

    flux_jac = jacobian(lambda x: all_fluxes(eos, x)[..., :2, :].reshape(x.shape[:-1] + (12,)), W)
    flux_jac = flux_jac.reshape(2, 6, 6)
    values, vectors = np.linalg.eig(np.linalg.solve(flux_jac[0], flux_jac[1]))
    r = vectors[:, np.argmin(np.abs(values - lam))].real
    r /= np.linalg.norm(r)

    delta = 1e-5
    slope = (
        pencil_speeds(eos, W + delta * r)[k] - pencil_speeds(eos, W - delta * r)[k]
    ) / (2 * delta)
    if slope < 0:
        r = -r
    return float(lam), r


def hugoniot_locus(
    eos: EquationOfState,
    U_L: PrimState,
    family: int,
    steps: int = 200,
    step_size: float = 1e-3,
    branch: int = 1,
) -> HugoniotLocus:
    """Trace one branch of the Hugoniot locus of ``U_L`` for a family.

    Parameters
    ----------
    eos : EquationOfState
    U_L : PrimState
        Left state.
    family : int
        Characteristic family ``1..6``; its speed must be simple.
    steps : int, default 200
    step_size : float, default 1e-3
        Arclength step in ``(d, sigma, a)``.
    branch : {1, -1}, default 1
        Sign of the amplitude. ``lambda_k`` increases along the
        ``branch=1`` direction, so for a genuinely nonlinear family
        ``branch=-1`` is the compressive branch.

    Returns
    -------
    HugoniotLocus
        With ``stalled`` set when the corrector failed after halving the
        step to ``step_size / 64``.

    Raises
    ------
    DomainError
        If the family is not simple at ``U_L``.
    """
    if branch not in (1, -1):
        raise ValueError(f"Branch must be 1 or -1, got {branch}.")
    lam, r = family_eigenvector(eos, U_L, family)
    W_L = U_L.array
    F_L = all_fluxes(eos, W_L)[:2]
    rh_tol = rh_tolerance(eos, U_L)
    jump_tol = JUMP_TOLERANCE * (1.0 + float(np.max(np.abs(F_L[0]))))

    def jump_equations(Y):
        d, sigma, a = Y[..., :6], Y[..., 6], Y[..., 7]
        F = all_fluxes(eos, W_L + a[..., None] * d)
        jump = (F[..., 1, :] - F_L[1]) - sigma[..., None] * (F[..., 0, :] - F_L[0])
        return np.concatenate([jump / a[..., None], (d @ r - 1.0)[..., None]], axis=-1)

    def admissible(Y):
        return admissible_fields(eos, W_L + Y[..., 7, None] * Y[..., :6])

    locus = HugoniotLocus(family=family, branch=branch)
    locus.points.append(
        HugoniotPoint(left=U_L, right=U_L, sigma=lam, family=family, amplitude=0.0)
    )

    Y = np.concatenate([r, [lam, 0.0]])
    tangent = np.zeros(8)
    tangent[7] = float(branch)
    h = step_size
    for i in range(steps):
        while True:
            def system(x, Y=Y, tangent=tangent, h=h):
                arclength = (x - Y) @ tangent - h
                return np.concatenate([jump_equations(x), arclength[..., None]], axis=-1)

            predictor = Y + h * tangent
            # the divided jump carries roundoff of order 1/|a|
            corrector_tol = jump_tol / max(abs(predictor[7]), h)
            accepted = None
            try:
                result = newton_solve(
                    system, np.zeros((1, 8)), predictor[None], corrector_tol,
                    admissible=admissible,
                )
                if result.converged[0]:
                    candidate = result.solution[0]
                    W_R = W_L + candidate[7] * candidate[:6]
                    residual = np.max(np.abs(rh_residual(eos, W_L, W_R, candidate[6])))
                    if residual <= rh_tol and abs(candidate[6]) < 1:
                        accepted = candidate
            except (SingularJacobianError, DomainError) as e:
                logger.debug("Corrector failed at step %d: %s", i, e)
            if accepted is not None:
                break
            h *= 0.5
            logger.debug("Halving continuation step to %.3e at step %d.", h, i)
            if h < step_size / 2**MAX_HALVINGS:
                logger.warning(
                    "Hugoniot continuation for family %d stalled after %d points.",
                    family, len(locus.points),
                )
                locus.stalled = True
                return locus

        U_R = PrimState.from_array(W_L + accepted[7] * accepted[:6])
        locus.points.append(make_point(eos, U_L, U_R, accepted[6], family))

        _, _, vt = np.linalg.svd(jacobian(jump_equations, accepted))
        new_tangent = vt[-1]
        if new_tangent @ tangent < 0:
            new_tangent = -new_tangent
        tangent = new_tangent / np.linalg.norm(new_tangent)
        Y = accepted
        h = min(step_size, 2.0 * h)
    return locus


def mirror_point(eos: EquationOfState, point: HugoniotPoint) -> HugoniotPoint:
    """Image of a discontinuity under ``x1 -> -x1``.

    The mirrored right state becomes the left state, ``sigma -> -sigma``
    and family ``k -> 7 - k``.
    """
    mirrored = HugoniotPoint(
        left=point.right.mirrored(),
        right=point.left.mirrored(),
        sigma=-point.sigma,
        family=7 - point.family,
        amplitude=point.amplitude,
        residual=point.residual,
    )
    return _complete(eos, mirrored)


def fit_entropy_scaling(locus: HugoniotLocus, window=(1e-3, 1e-1)) -> float:
    """Log-log slope of ``|E|`` against amplitude within ``window``.

    Returns NaN when fewer than three points fall inside the window.
    """
    a = locus.amplitudes
    E = np.abs(locus.entropy_productions)
    keep = (a >= window[0]) & (a <= window[1]) & (E > 0)
    if np.count_nonzero(keep) < 3:
        return np.nan
    slope, _ = np.polyfit(np.log(a[keep]), np.log(E[keep]), 1)
    return float(slope)


def weak_points(locus: HugoniotLocus, threshold: float = WEAK_THRESHOLD) -> list:
    """Points with amplitude at most ``threshold * |U_L|``, excluding the trivial one."""
    if not locus.points:
        return []
    bound = threshold * float(np.linalg.norm(locus.points[0].left.array))
    return [p for p in locus.points[1:] if 0 < p.amplitude <= bound]


def contact_jump(
    eos: EquationOfState, U_L: PrimState, u2: float, eps: float | None = None
) -> HugoniotPoint:
    """Contact discontinuity moving with the fluid.

    The right state shares the normal three-velocity and ``p + pi`` of
    ``U_L`` and carries the transverse component ``u2``. When ``eps`` is
    given the right state takes that energy per particle and the volume
    per particle is found by root finding on the pressure.

    Raises
    ------
    DomainError
        If no volume per particle matches the pressure.
    """
    v1 = U_L.u[0] / U_L.u0
    transverse = u2**2 + U_L.u[2] ** 2
    u0 = np.sqrt((1.0 + transverse) / (1.0 - v1**2))
    u = (v1 * u0, u2, U_L.u[2])
    nu, C = U_L.nu, U_L.C
    if eps is not None:
        q = derived(eos, U_L.eps, U_L.nu, U_L.C)
        target = float(q.p + q.pi)

        def pressure_gap(x):
            r = derived(eos, eps, x, C)
            return float(r.p + r.pi) - target

        lo, hi = U_L.nu, U_L.nu
        for _ in range(60):
            lo, hi = 0.5 * lo, 2.0 * hi
            try:
                if pressure_gap(lo) * pressure_gap(hi) < 0:
                    break
            except DomainError:
                continue
        else:
            raise DomainError("No volume per particle matches the contact pressure.")
        nu = brentq(pressure_gap, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    else:
        eps = U_L.eps
    U_R = PrimState(u=u, eps=eps, nu=nu, C=C)
    sigma = float(v1)
    return make_point(eos, U_L, U_R, sigma, family=3)
