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

Fluxes, relaxation source and entropy flux of the bulk-viscous system

    d_alpha F^alpha(U) = Q(U),
    F^alpha = (T^{alpha beta}, n u^alpha, (n C + 1) u^alpha),
    Q = (0, 0, 0, 0, 0, -M(U) pi),

together with the smooth-flow entropy balance.
"""

import logging
from dataclasses import dataclass

import numpy as np
import param
from scipy.integrate import solve_ivp

from .errors import DomainError
from .numerics import jacobian
from .state import PrimState, boost_velocity, tensor_flux
from .thermo import EquationOfState, derived

logger = logging.getLogger(__name__)


def flux_array(eos: EquationOfState, W: np.ndarray, alpha: int) -> np.ndarray:
    """``F^alpha`` for primitive arrays of shape ``(..., 6)``."""
    if alpha not in (0, 1, 2, 3):
        raise ValueError(f"Spacetime index must be 0, 1, 2 or 3, got {alpha}.")
    W = np.asarray(W, dtype=float)
    quantities = derived(eos, W[..., 3], W[..., 4], W[..., 5])
    return tensor_flux(W, quantities, alpha)


def all_fluxes(eos: EquationOfState, W: np.ndarray) -> np.ndarray:
    """``F^0 .. F^3`` stacked, shape ``(..., 4, 6)``."""
    W = np.asarray(W, dtype=float)
    quantities = derived(eos, W[..., 3], W[..., 4], W[..., 5])
    return np.stack([tensor_flux(W, quantities, a) for a in range(4)], axis=-2)


def directional_flux_array(eos: EquationOfState, W: np.ndarray, direction) -> np.ndarray:
    """Spatial flux ``n_k F^k`` along a unit direction."""
    direction = np.asarray(direction, dtype=float)
    return np.einsum("k,...ki->...i", direction, all_fluxes(eos, W)[..., 1:, :])


def flux(eos: EquationOfState, U: PrimState, alpha: int) -> np.ndarray:
    """Flux ``F^alpha(U)`` of a single state.

    Examples
    --------
    At rest in the ideal-gas MIS gas with ``(eps, nu, C) = (1, 1, 0)``,
    ``flux(eos, U, 1)`` is ``(0, 2/3, 0, 0, 0, 0)``.
    """
    return flux_array(eos, U.array, alpha)


def nonequilibrium_flux_from_v(W: np.ndarray, alpha: int) -> np.ndarray:
    """Last flux component written as ``(C + nu) v^alpha`` with ``v = n u``."""
    W = np.asarray(W, dtype=float)
    v = boost_velocity(W[..., :3])[..., alpha] / W[..., 4]
    return (W[..., 5] + W[..., 4]) * v


def entropy_flux_array(eos: EquationOfState, W: np.ndarray) -> np.ndarray:
    """Entropy flux ``S^alpha = n u^alpha s``, shape ``(..., 4)``."""
    W = np.asarray(W, dtype=float)
    eos.check_domain(W[..., 3], W[..., 4], W[..., 5])
    s = np.asarray(eos.entropy(W[..., 3], W[..., 4], W[..., 5]), dtype=float)
    return (s / W[..., 4])[..., None] * boost_velocity(W[..., :3])


def entropy_flux(eos: EquationOfState, U: PrimState) -> np.ndarray:
    return entropy_flux_array(eos, U.array)


class RelaxationCoefficient(param.Parameterized):
    """Inverse relaxation scale ``M(U) > 0``.

    Subclasses implement :meth:`rate` for primitive arrays.
    """

    def rate(self, W: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, W) -> np.ndarray:
        if isinstance(W, PrimState):
            W = W.array
        M = np.asarray(self.rate(np.asarray(W, dtype=float)), dtype=float)
        if np.any(~(M > 0)):
            raise DomainError(f"Relaxation coefficient must satisfy M > 0, got {np.min(M)}.")
        return M


class ConstantRelaxation(RelaxationCoefficient):
    """``M = 1/tau`` with a constant relaxation time.

    Attributes
    ----------
    tau : param.Number, default 0.1
        Relaxation time.
    """

    tau = param.Number(default=0.1, bounds=(0, None), inclusive_bounds=(False, True))

    def rate(self, W):
        return np.full(np.shape(W)[:-1], 1.0 / self.tau)


class CallableRelaxation(RelaxationCoefficient):
    """``M`` given by a function of primitive arrays ``(..., 6)``."""

    function = param.Callable(default=None)

    def rate(self, W):
        return self.function(W)


def source_array(eos: EquationOfState, M: RelaxationCoefficient, W: np.ndarray) -> np.ndarray:
    """Source ``Q = (0, 0, 0, 0, 0, -M pi)`` for primitive arrays."""
    W = np.asarray(W, dtype=float)
    pi = derived(eos, W[..., 3], W[..., 4], W[..., 5]).pi
    out = np.zeros(W.shape)
    out[..., 5] = -M(W) * pi
    return out


def source(eos: EquationOfState, M: RelaxationCoefficient, U: PrimState) -> np.ndarray:
    """Relaxation source of a single state.

    Examples
    --------
    For the ideal-gas MIS gas at rest with ``(eps, nu, C) = (1, 1, 0.1)``
    and ``M = 2`` the last component is about ``-0.19900``.
    """
    return source_array(eos, M, U.array)


@dataclass(frozen=True)
class FluxSet:
    """Fluxes ``F^0..F^3`` (shape ``(4, 6)``), source ``Q`` and entropy flux ``S``."""

    F: np.ndarray
    Q: np.ndarray
    S: np.ndarray


def flux_set(eos: EquationOfState, M: RelaxationCoefficient, U: PrimState) -> FluxSet:
    W = U.array
    return FluxSet(
        F=all_fluxes(eos, W), Q=source_array(eos, M, W), S=entropy_flux_array(eos, W)
    )


@dataclass(frozen=True)
class EntropyProduction:
    """Two evaluations of the entropy production at a smooth point.

    Attributes
    ----------
    divergence : float
        ``d_alpha S^alpha`` from the supplied gradients by the chain rule.
    closed_form : float
        ``M pi**2 / theta``, the production on solutions.
    residual_work : float
        ``psi . (d_alpha F^alpha - Q)``; zero on solutions, and
        ``divergence = closed_form + residual_work`` holds for any field.
    """

    divergence: float
    closed_form: float
    residual_work: float

    @property
    def defect(self) -> float:
        return abs(self.divergence - self.closed_form)


def entropy_production_smooth(
    eos: EquationOfState, M: RelaxationCoefficient, U, gradients
) -> EntropyProduction:
    """Entropy production of a smooth field at one event.

    Parameters
    ----------
    eos : EquationOfState
    M : RelaxationCoefficient
    U : PrimState or np.ndarray
        Fields at the event.
    gradients : np.ndarray
        ``d_alpha`` of the primitive fields, shape ``(4, 6)``, rows
        ordered ``(t, x, y, z)``.
    """
    from .godunov import main_field_array

    W = U.array if isinstance(U, PrimState) else np.asarray(U, dtype=float)
    gradients = np.asarray(gradients, dtype=float)
    if gradients.shape != (4, 6):
        raise ValueError(f"Expected gradients of shape (4, 6), got {gradients.shape}.")

    # d S^alpha / d W, shape (4, 6)
    entropy_jac = jacobian(lambda x: entropy_flux_array(eos, x), W)
    divergence = float(np.einsum("ak,ak->", entropy_jac, gradients))

    flux_jac = jacobian(lambda x: all_fluxes(eos, x).reshape(x.shape[:-1] + (24,)), W)
    flux_jac = flux_jac.reshape(4, 6, 6)
    flux_divergence = np.einsum("aik,ak->i", flux_jac, gradients)
    residual = flux_divergence - source_array(eos, M, W)
    psi = main_field_array(eos, W)

    quantities = derived(eos, W[3], W[4], W[5])
    closed_form = float(M(W) * quantities.pi**2 / quantities.theta)
    return EntropyProduction(
        divergence=divergence,
        closed_form=closed_form,
        residual_work=float(psi @ residual),
    )


class RelaxingFlow:
    """Exact smooth solution: a uniform fluid relaxing in proper time.

    In the rest frame ``eps``, ``nu`` and the velocity are constant while
    ``dC/dtau = -M nu pi``. Viewed from a frame in which the fluid moves
    with ``velocity`` along x1, the fields depend on
    ``tau = u0 t - u1 x``.

    Parameters
    ----------
    eos : EquationOfState
    relaxation : RelaxationCoefficient
    eps, nu, C0 : float
        Rest-frame state at ``tau = 0``.
    velocity : float, default 0.0
        Three-velocity of the fluid in the observer frame.
    duration : float, default 1.0
        Proper-time window ``[-duration, duration]`` with dense output.
    """

    def __init__(
        self,
        eos: EquationOfState,
        relaxation: RelaxationCoefficient,
        eps: float,
        nu: float,
        C0: float,
        velocity: float = 0.0,
        duration: float = 1.0,
    ):
        if not abs(velocity) < 1:
            raise DomainError(f"Flow velocity must satisfy |v| < 1, got {velocity}.")
        self.eos = eos
        self.relaxation = relaxation
        self.eps = float(eps)
        self.nu = float(nu)
        self.C0 = float(C0)
        gamma = 1.0 / np.sqrt(1.0 - velocity**2)
        self.u = np.array([gamma * velocity, 0.0, 0.0])
        self.u0 = gamma

        def rhs(_, y):
            W = np.array([*self.u, self.eps, self.nu, y[0]])
            pi = derived(eos, self.eps, self.nu, y[0]).pi
            return [-float(relaxation(W)) * self.nu * float(pi)]

        self._forward = solve_ivp(
            rhs, (0.0, duration), [self.C0], method="DOP853",
            rtol=1e-13, atol=1e-15, dense_output=True,
        )
        self._backward = solve_ivp(
            rhs, (0.0, -duration), [self.C0], method="DOP853",
            rtol=1e-13, atol=1e-15, dense_output=True,
        )
        if not (self._forward.success and self._backward.success):
            raise DomainError("Relaxation trajectory left the admissible domain.")
        self.duration = float(duration)

    def proper_time(self, t, x):
        return self.u0 * np.asarray(t, dtype=float) - self.u[0] * np.asarray(x, dtype=float)

    def C(self, tau):
        tau = np.asarray(tau, dtype=float)
        if np.any(np.abs(tau) > self.duration):
            raise DomainError("Event lies outside the integrated proper-time window.")
        forward = self._forward.sol(np.maximum(tau, 0.0))[0]
        backward = self._backward.sol(np.minimum(tau, 0.0))[0]
        return np.where(tau >= 0, forward, backward)

    def fields(self, t, x) -> np.ndarray:
        """Primitive fields at events, shape ``(..., 6)``."""
        C = self.C(self.proper_time(t, x))
        out = np.empty(np.shape(C) + (6,))
        out[..., :3] = self.u
        out[..., 3] = self.eps
        out[..., 4] = self.nu
        out[..., 5] = C
        return out

    def gradients(self, t: float, x: float, spacing: float) -> np.ndarray:
        """Centered-difference ``d_alpha W`` at one event, shape ``(4, 6)``."""
        out = np.zeros((4, 6))
        out[0] = (self.fields(t + spacing, x) - self.fields(t - spacing, x)) / (2 * spacing)
        out[1] = (self.fields(t, x + spacing) - self.fields(t, x - spacing)) / (2 * spacing)
        return out


@dataclass(frozen=True)
class SmoothAudit:
    """Convergence of the stencil-based entropy production to the closed form."""

    spacings: np.ndarray
    defects: np.ndarray
    closed_form: float

    @property
    def orders(self) -> np.ndarray:
        """Observed orders between consecutive spacings."""
        return np.log(self.defects[:-1] / self.defects[1:]) / np.log(
            self.spacings[:-1] / self.spacings[1:]
        )


def smooth_entropy_audit(
    flow: RelaxingFlow, t: float = 0.0, x: float = 0.0, spacings=(0.04, 0.02, 0.01)
) -> SmoothAudit:
    """Compare the stencil divergence of ``S^alpha`` with ``M pi**2 / theta``.

    The defect is expected to shrink like ``spacing**2``.
    """
    W = flow.fields(t, x)
    defects = []
    closed_form = np.nan
    for h in spacings:
        production = entropy_production_smooth(
            flow.eos, flow.relaxation, W, flow.gradients(t, x, h)
        )
        closed_form = production.closed_form
        defects.append(production.defect)
    audit = SmoothAudit(
        spacings=np.asarray(spacings, dtype=float),
        defects=np.asarray(defects),
        closed_form=closed_form,
    )
    logger.debug("Smooth entropy audit orders: %s", audit.orders)
    return audit
