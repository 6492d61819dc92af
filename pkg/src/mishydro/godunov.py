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

Main field, potentials and characteristic analysis.

In the main field ``psi = -(u_0, u_1, u_2, u_3, G, pi) / theta`` the fluxes
are gradients of the potentials ``X^alpha = psi . F^alpha - S^alpha``,
so that ``A^alpha = dF^alpha/dpsi`` are symmetric Hessians. The system
is causal and symmetric hyperbolic when ``xi_alpha A^alpha`` is definite
for every timelike covector ``xi``.

Lowered indices use the metric ``diag(-1, 1, 1, 1)``, hence
``u_0 = -u^0`` and ``psi_0 = u^0 / theta > 0``.
"""

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    ChartInversionError,
    DomainError,
    PencilDegeneracyError,
    SingularJacobianError,
)
from .fluxes import all_fluxes, entropy_flux_array
from .numerics import jacobian, newton_solve
from .state import PrimState, admissible_fields, boost_velocity
from .thermo import EquationOfState, check_conditions, derived

logger = logging.getLogger(__name__)

LOWER = np.array([-1.0, 1.0, 1.0, 1.0])
CHART_TOLERANCE = 1e-12
POTENTIAL_GRADIENT_STEP = 1e-5
POTENTIAL_HESSIAN_STEP = 1e-3
DEFINITENESS_MARGIN = 1e-8


def main_field_array(eos: EquationOfState, W: np.ndarray) -> np.ndarray:
    """Main field for primitive arrays of shape ``(..., 6)``."""
    W = np.asarray(W, dtype=float)
    q = derived(eos, W[..., 3], W[..., 4], W[..., 5])
    lowered = boost_velocity(W[..., :3]) * LOWER
    fields = np.concatenate([lowered, q.G[..., None], q.pi[..., None]], axis=-1)
    return -fields / q.theta[..., None]


@dataclass(frozen=True)
class MainField:
    """Main field ``psi`` and the primitive state it was computed from."""

    psi: np.ndarray
    state: PrimState

    @property
    def time_component(self) -> float:
        """``psi_0 = u^0 / theta``, always positive."""
        return float(self.psi[0])


def main_field(eos: EquationOfState, U: PrimState) -> MainField:
    """Main field of a state.

    Examples
    --------
    At rest in the ideal-gas MIS gas with ``(eps, nu, C) = (1, 1, 0)``,
    ``theta = 2/3`` and ``G = 5/3`` give ``psi = (1.5, 0, 0, 0, -2.5, 0)``.
    """
    return MainField(psi=main_field_array(eos, U.array), state=U)


def potential_array(eos: EquationOfState, W: np.ndarray) -> np.ndarray:
    """``X^alpha = psi . F^alpha - S^alpha`` for ``alpha = 0..3``, shape ``(..., 4)``."""
    W = np.asarray(W, dtype=float)
    psi = main_field_array(eos, W)
    return np.einsum("...i,...ai->...a", psi, all_fluxes(eos, W)) - entropy_flux_array(eos, W)


def potential_closed_form_array(eos: EquationOfState, W: np.ndarray) -> np.ndarray:
    """``X^alpha = -(p + pi) u^alpha / theta``, shape ``(..., 4)``."""
    W = np.asarray(W, dtype=float)
    q = derived(eos, W[..., 3], W[..., 4], W[..., 5])
    return -((q.p + q.pi) / q.theta)[..., None] * boost_velocity(W[..., :3])


def potential(eos: EquationOfState, U: PrimState, alpha: int) -> float:
    """Potential ``X^alpha`` from its definition."""
    return float(potential_array(eos, U.array)[alpha])


def potential_closed_form(eos: EquationOfState, U: PrimState, alpha: int) -> float:
    """Potential ``X^alpha`` from the closed form ``-(p + pi) u^alpha / theta``."""
    return float(potential_closed_form_array(eos, U.array)[alpha])


def invert_main_field(eos: EquationOfState, psi: np.ndarray, guess: np.ndarray) -> np.ndarray:
    """Primitive fields whose main field is ``psi``.

    Parameters
    ----------
    psi : np.ndarray
        Target main fields, shape ``(..., 6)``.
    guess : np.ndarray
        Admissible primitive iterates broadcastable to ``psi``.

    Raises
    ------
    ChartInversionError
        If Newton fails or the chart is singular.
    """
    psi = np.asarray(psi, dtype=float)
    shape = psi.shape
    target = psi.reshape(-1, 6)
    x0 = np.broadcast_to(np.asarray(guess, dtype=float), shape).reshape(-1, 6)
    tolerance = CHART_TOLERANCE * (1.0 + np.max(np.abs(target), axis=-1))
    try:
        result = newton_solve(
            lambda W: main_field_array(eos, W),
            target,
            x0,
            tolerance,
            admissible=lambda W: admissible_fields(eos, W),
        )
    except (SingularJacobianError, DomainError) as e:
        raise ChartInversionError(f"Main field is not a chart here: {e}") from e
    if not np.all(result.converged):
        raise ChartInversionError(
            f"Main field inversion did not converge, residual {np.max(result.residual):.3e}."
        )
    return result.solution.reshape(shape)


def verify_potential_gradient(eos: EquationOfState, U: PrimState, alpha: int) -> float:
    """Worst relative error of ``F^alpha_i = dX^alpha/dpsi_i``.

    Each ``psi_i`` is perturbed by ``1e-5 (1 + |psi_i|)`` with the other
    components fixed and the chart inverted at every shifted point. Errors
    are relative to the largest flux component.

    Raises
    ------
    ChartInversionError
    """
    W = U.array
    psi = main_field_array(eos, W)
    F = all_fluxes(eos, W)[alpha]
    scale = max(float(np.max(np.abs(F))), np.finfo(float).tiny)
    errors = np.empty(6)
    for i in range(6):
        h = POTENTIAL_GRADIENT_STEP * (1.0 + abs(psi[i]))
        shifted = np.array([psi, psi])
        shifted[0, i] += h
        shifted[1, i] -= h
        spacing = shifted[0, i] - shifted[1, i]
        X = potential_array(eos, invert_main_field(eos, shifted, W))[:, alpha]
        errors[i] = abs((X[0] - X[1]) / spacing - F[i]) / scale
    logger.debug("Potential gradient errors for alpha=%d: %s", alpha, errors)
    return float(np.max(errors))


def check_timelike(xi) -> np.ndarray:
    xi = np.asarray(xi, dtype=float)
    if xi.shape != (4,):
        raise DomainError(f"Covector must have four components, got {xi.shape}.")
    if not -xi[0] ** 2 + np.sum(xi[1:] ** 2) < 0:
        raise DomainError(f"Covector must be timelike, xi.xi < 0, got {xi}.")
    return xi


def flux_hessians(eos: EquationOfState, W: np.ndarray) -> np.ndarray:
    """``A^alpha = dF^alpha/dpsi`` from flux and main-field Jacobians.

    Returns
    -------
    np.ndarray
        Shape ``(..., 4, 6, 6)``.

    Raises
    ------
    SingularJacobianError
        If the main field Jacobian is singular.
    """
    W = np.asarray(W, dtype=float)
    flux_jac = jacobian(
        lambda x: all_fluxes(eos, x).reshape(x.shape[:-1] + (24,)), W
    ).reshape(W.shape[:-1] + (4, 6, 6))
    psi_jac = jacobian(lambda x: main_field_array(eos, x), W)
    try:
        # A^alpha = J_F^alpha J_psi^{-1}
        inverse = np.linalg.inv(psi_jac)
    except np.linalg.LinAlgError as e:
        raise SingularJacobianError(f"Main field Jacobian is singular: {e}") from e
    return flux_jac @ inverse[..., None, :, :]


def _potential_hessian(eos: EquationOfState, W: np.ndarray, xi: np.ndarray) -> np.ndarray:
    psi = main_field_array(eos, W)
    h = POTENTIAL_HESSIAN_STEP * (1.0 + np.abs(psi))
    shifted = []
    for i in range(6):
        for j in range(6):
            for si, sj in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
                p = psi.copy()
                p[i] += si * h[i]
                p[j] += sj * h[j]
                shifted.append(p)
    shifted = np.array(shifted)
    X = potential_array(eos, invert_main_field(eos, shifted, W)) @ xi
    X = X.reshape(6, 6, 4)
    hess = (X[..., 0] - X[..., 1] - X[..., 2] + X[..., 3]) / (4.0 * np.outer(h, h))
    return hess


@dataclass(frozen=True)
class ContractedHessian:
    """``xi_alpha A^alpha`` and its spectrum.

    Attributes
    ----------
    xi : np.ndarray
        Timelike covector.
    matrix : np.ndarray
        Symmetrized contraction, shape ``(6, 6)``.
    eigenvalues : np.ndarray
        Ascending eigenvalues of ``matrix``.
    symmetry_defect : float
        ``max|A - A.T| / max|A|`` before symmetrization.
    """

    xi: np.ndarray
    matrix: np.ndarray
    eigenvalues: np.ndarray
    symmetry_defect: float

    @property
    def margin(self) -> float:
        return DEFINITENESS_MARGIN * float(np.max(np.abs(self.matrix)))

    @property
    def orientation(self) -> str:
        """``positive``, ``negative`` or ``indefinite``."""
        if np.min(self.eigenvalues) > self.margin:
            return "positive"
        if np.max(self.eigenvalues) < -self.margin:
            return "negative"
        return "indefinite"

    @property
    def definite(self) -> bool:
        return self.orientation != "indefinite"


def contracted_hessian(
    eos: EquationOfState, U: PrimState, xi, method: str = "flux"
) -> ContractedHessian:
    """Contracted Hessian ``d^2 (xi_alpha X^alpha) / dpsi^2`` at a state.

    Parameters
    ----------
    eos : EquationOfState
    U : PrimState
    xi : array_like
        Timelike covector ``xi_alpha``.
    method : {"flux", "potential"}, default "flux"
        ``flux`` differentiates the fluxes along the chart,
        ``potential`` takes second differences of ``xi_alpha X^alpha`` with
        chart inversion at every shifted point.

    Raises
    ------
    DomainError
        If ``xi`` is not timelike.
    """
    xi = check_timelike(xi)
    W = U.array
    if method == "flux":
        raw = np.einsum("a,aij->ij", xi, flux_hessians(eos, W))
    elif method == "potential":
        raw = _potential_hessian(eos, W, xi)
    else:
        raise ValueError(f"Unknown contraction method '{method}'.")
    scale = max(float(np.max(np.abs(raw))), np.finfo(float).tiny)
    defect = float(np.max(np.abs(raw - raw.T)) / scale)
    matrix = 0.5 * (raw + raw.T)
    return ContractedHessian(
        xi=xi,
        matrix=matrix,
        eigenvalues=scipy.linalg.eigvalsh(matrix),
        symmetry_defect=defect,
    )


def characteristic_speeds(eos: EquationOfState, U: PrimState, direction) -> np.ndarray:
    """Roots of ``det(n_k A^k - lambda A^0) = 0``, sorted.

    The generalized problem is reduced with the definite matrix ``A^0``.

    Raises
    ------
    PencilDegeneracyError
        If ``A^0`` is not definite.
    """
    direction = np.asarray(direction, dtype=float)
    direction = direction / np.linalg.norm(direction)
    A = flux_hessians(eos, U.array)
    A = 0.5 * (A + np.swapaxes(A, -1, -2))
    spatial = np.einsum("k,kij->ij", direction, A[1:])
    for sign in (-1.0, 1.0):
        try:
            return np.sort(scipy.linalg.eigh(sign * spatial, sign * A[0], eigvals_only=True))
        except np.linalg.LinAlgError:
            continue
    raise PencilDegeneracyError("Time-component Hessian A0 is not definite.")


def pencil_speeds(eos: EquationOfState, W: np.ndarray, direction=(1.0, 0.0, 0.0)) -> np.ndarray:
    """Characteristic speeds for primitive arrays, shape ``(..., 6)``.

    Roots of ``det(n_k dF^k/dW - lambda dF^0/dW) = 0``, the same as the
    main-field pencil since ``dpsi/dW`` is invertible. Complex roots mark
    a loss of hyperbolicity; their real parts are returned.
    """
    W = np.asarray(W, dtype=float)
    direction = np.asarray(direction, dtype=float)
    direction = direction / np.linalg.norm(direction)
    flux_jac = jacobian(
        lambda x: all_fluxes(eos, x).reshape(x.shape[:-1] + (24,)), W
    ).reshape(W.shape[:-1] + (4, 6, 6))
    spatial = np.einsum("k,...kij->...ij", direction, flux_jac[..., 1:, :, :])
    try:
        speeds = np.linalg.eigvals(np.linalg.solve(flux_jac[..., 0, :, :], spatial))
    except np.linalg.LinAlgError as e:
        raise PencilDegeneracyError(f"Conserved-variable Jacobian is singular: {e}") from e
    if np.any(np.abs(speeds.imag) > 1e-6 * (1.0 + np.abs(speeds.real))):
        logger.warning("Complex characteristic speeds encountered.")
    return np.sort(speeds.real, axis=-1)


def max_signal_speed(eos: EquationOfState, W: np.ndarray) -> np.ndarray:
    """Largest ``|lambda|`` along x1 per cell."""
    return np.max(np.abs(pencil_speeds(eos, W)), axis=-1)


def random_timelike_covector(rng: np.random.Generator, max_speed: float = 0.9) -> np.ndarray:
    """Future-directed timelike covector ``scale * (-u^0, u)``.

    The boost three-velocity has magnitude below ``max_speed`` and the
    scale lies in ``[0.5, 2]``.
    """
    direction = rng.normal(size=3)
    direction /= np.linalg.norm(direction)
    speed = max_speed * rng.uniform()
    gamma = 1.0 / np.sqrt(1.0 - speed**2)
    scale = rng.uniform(0.5, 2.0)
    return scale * np.concatenate([[-gamma], gamma * speed * direction])


def definiteness_audit(
    eos: EquationOfState, U: PrimState, n_covectors: int, rng: np.random.Generator
) -> dict:
    """One CSV row auditing hyperbolicity and causality at a state.

    Probes ``xi = (-1, 0, 0, 0)`` and ``n_covectors`` random timelike
    covectors and records the extreme contracted-Hessian eigenvalues,
    the shared orientation and the largest characteristic speed along
    each axis.
    """
    report = check_conditions(eos, U.eps, U.nu, U.C)
    covectors = [np.array([-1.0, 0.0, 0.0, 0.0])]
    covectors += [random_timelike_covector(rng) for _ in range(n_covectors)]
    orientations = set()
    min_margin = np.inf
    worst_defect = 0.0
    extremes = []
    for xi in covectors:
        hessian = contracted_hessian(eos, U, xi)
        orientations.add(hessian.orientation)
        scale = float(np.max(np.abs(hessian.matrix)))
        min_margin = min(min_margin, float(np.min(np.abs(hessian.eigenvalues))) / scale)
        worst_defect = max(worst_defect, hessian.symmetry_defect)
        extremes.append(hessian.eigenvalues[[0, -1]])
    extremes = np.array(extremes)

    try:
        speeds = np.concatenate(
            [characteristic_speeds(eos, U, axis) for axis in np.eye(3)]
        )
        max_speed = float(np.max(np.abs(speeds)))
    except PencilDegeneracyError:
        max_speed = np.nan
    orientation = orientations.pop() if len(orientations) == 1 else "mixed"
    return {
        "u1": U.u[0],
        "u2": U.u[1],
        "u3": U.u[2],
        "eps": U.eps,
        "nu": U.nu,
        "C": U.C,
        "condition_1": report.condition_1,
        "condition_2": report.condition_2,
        "minor_condition_1": report.minor_condition_1,
        "minor_condition_2": report.minor_condition_2,
        "min_eigenvalue": float(np.min(extremes[:, 0])),
        "max_eigenvalue": float(np.max(extremes[:, 1])),
        "relative_margin": min_margin,
        "symmetry_defect": worst_defect,
        "orientation": orientation,
        "max_speed": max_speed,
        "causal": bool(
            orientation in ("positive", "negative") and max_speed <= 1.0 + 1e-8
        ),
    }


def main_field_jacobian(eos: EquationOfState, U: PrimState) -> np.ndarray:
    """``dpsi/dW`` at a state, shape ``(6, 6)``."""
    return jacobian(lambda x: main_field_array(eos, x), U.array)

