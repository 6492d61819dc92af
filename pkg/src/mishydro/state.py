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

Field coordinates, four-velocity kinematics and primitive recovery.

Primitive fields are stored as ``(u1, u2, u3, eps, nu, C)`` where
``u1..u3`` are the spatial components of the four-velocity. The metric
is ``diag(-1, 1, 1, 1)`` and ``u0 = sqrt(1 + |u|**2)``.
"""

import logging
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, RecoveryError
from .numerics import newton_solve
from .thermo import DerivedQuantities, EquationOfState, derived

logger = logging.getLogger(__name__)

MAX_SPATIAL_VELOCITY = 1e6
RECOVERY_TOLERANCE = 1e-12
RECOVERY_MAX_ITERATIONS = 50

METRIC = np.diag([-1.0, 1.0, 1.0, 1.0])


def lorentz_factor(u) -> np.ndarray:
    """``u0`` from the spatial components, shape ``(...,)``."""
    u = np.asarray(u, dtype=float)
    return np.sqrt(1.0 + np.sum(np.square(u), axis=-1))


def boost_velocity(u) -> np.ndarray:
    """Complete the spatial components to a unit timelike four-velocity.

    Examples
    --------
    >>> boost_velocity([0.75, 0.0, 0.0])
    array([1.25, 0.75, 0.  , 0.  ])
    """
    u = np.asarray(u, dtype=float)
    return np.concatenate([lorentz_factor(u)[..., None], u], axis=-1)


def tensor_flux(W: np.ndarray, quantities: DerivedQuantities, alpha: int) -> np.ndarray:
    """Flux ``F^alpha`` for primitive arrays with precomputed thermodynamics.

    Parameters
    ----------
    W : np.ndarray
        Primitive fields, shape ``(..., 6)``.
    quantities : DerivedQuantities
        Output of :func:`mishydro.thermo.derived` at the same points.
    alpha : int
        Spacetime index in ``{0, 1, 2, 3}``.

    Returns
    -------
    np.ndarray
        ``(T^{alpha beta} for beta = 0..3, n u^alpha, (n C + 1) u^alpha)``.
    """
    four = boost_velocity(W[..., :3])
    n = 1.0 / W[..., 4]
    eps = W[..., 3]
    C = W[..., 5]
    pressure = quantities.p + quantities.pi
    u_alpha = four[..., alpha]
    # Delta^{alpha beta} = g^{alpha beta} + u^alpha u^beta
    projector = METRIC[alpha] + u_alpha[..., None] * four
    stress = (n * eps * u_alpha)[..., None] * four + pressure[..., None] * projector
    return np.concatenate(
        [stress, (n * u_alpha)[..., None], ((n * C + 1.0) * u_alpha)[..., None]], axis=-1
    )


def conserved_array(eos: EquationOfState, W: np.ndarray) -> np.ndarray:
    """Time-component flux ``F^0`` for primitive arrays of shape ``(..., 6)``."""
    W = np.asarray(W, dtype=float)
    quantities = derived(eos, W[..., 3], W[..., 4], W[..., 5])
    return tensor_flux(W, quantities, 0)


def admissible_fields(eos: EquationOfState, W: np.ndarray) -> np.ndarray:
    """Boolean mask of admissible primitive rows."""
    W = np.asarray(W, dtype=float)
    speed = np.sqrt(np.sum(np.square(W[..., :3]), axis=-1))
    return (speed <= MAX_SPATIAL_VELOCITY) & eos.admissible(W[..., 3], W[..., 4], W[..., 5])


@dataclass(frozen=True)
class PrimState:
    """Primitive state ``U = (u, eps, nu, C)``.

    Attributes
    ----------
    u : tuple[float, float, float]
        Spatial four-velocity components, ``|u| <= 1e6``.
    eps : float
        Internal energy per particle, positive.
    nu : float
        Volume per particle, positive.
    C : float
        Non-equilibrium variable, any real.
    """

    u: tuple
    eps: float
    nu: float
    C: float = 0.0

    def __post_init__(self):
        u = tuple(float(x) for x in self.u)
        if len(u) != 3:
            raise DomainError(f"Expected three spatial velocity components, got {len(u)}.")
        object.__setattr__(self, "u", u)
        for name in ("eps", "nu", "C"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not np.all(np.isfinite(self.array)):
            raise DomainError("Primitive state is not finite.")
        if self.eps <= 0:
            raise DomainError(f"Energy per particle must satisfy eps > 0, got {self.eps}.")
        if self.nu <= 0:
            raise DomainError(f"Volume per particle must satisfy nu > 0, got {self.nu}.")
        if np.linalg.norm(u) > MAX_SPATIAL_VELOCITY:
            raise DomainError(
                f"Spatial velocity must satisfy |u| <= {MAX_SPATIAL_VELOCITY:g}."
            )

    @property
    def u0(self) -> float:
        return float(lorentz_factor(self.u))

    @property
    def n(self) -> float:
        """Particle density ``1/nu``."""
        return 1.0 / self.nu

    @property
    def four_velocity(self) -> np.ndarray:
        return boost_velocity(self.u)

    @property
    def array(self) -> np.ndarray:
        return np.array([*self.u, self.eps, self.nu, self.C])

    @classmethod
    def from_array(cls, W) -> "PrimState":
        W = np.asarray(W, dtype=float)
        return cls(u=tuple(W[:3]), eps=W[3], nu=W[4], C=W[5])

    @classmethod
    def at_rest(cls, eps: float, nu: float, C: float = 0.0) -> "PrimState":
        return cls(u=(0.0, 0.0, 0.0), eps=eps, nu=nu, C=C)

    def mirrored(self) -> "PrimState":
        """Image under the parity ``x1 -> -x1``."""
        return PrimState(u=(-self.u[0], self.u[1], self.u[2]), eps=self.eps, nu=self.nu, C=self.C)

    def boosted(self, velocity: float) -> "PrimState":
        """The same state seen from a frame moving with ``velocity`` along x1."""
        if not abs(velocity) < 1:
            raise DomainError(f"Boost velocity must satisfy |v| < 1, got {velocity}.")
        gamma = 1.0 / np.sqrt(1.0 - velocity**2)
        u1 = gamma * (self.u[0] - velocity * self.u0)
        return PrimState(u=(u1, self.u[1], self.u[2]), eps=self.eps, nu=self.nu, C=self.C)


@dataclass(frozen=True)
class ConsState:
    """Conserved densities ``F^0(U)``.

    The components are ``(T^00, T^01, T^02, T^03, J^0, (n C + 1) u^0)``.
    """

    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != (6,):
            raise DomainError(f"Conserved state must have six components, got {values.shape}.")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def energy_density(self) -> float:
        return float(self.values[0])

    @property
    def particle_density(self) -> float:
        """``J^0 = n u^0``."""
        return float(self.values[4])

    @property
    def array(self) -> np.ndarray:
        return self.values.copy()


def to_conserved(eos: EquationOfState, U: PrimState) -> ConsState:
    """Conserved densities of a primitive state.

    Raises
    ------
    DomainError
        If ``U`` is thermodynamically inadmissible.
    """
    return ConsState(conserved_array(eos, U.array))


def recover_fields(
    eos: EquationOfState,
    cons: np.ndarray,
    guess: np.ndarray,
    max_iterations: int = RECOVERY_MAX_ITERATIONS,
) -> np.ndarray:
    """Invert :func:`conserved_array` cell by cell.

    Parameters
    ----------
    eos : EquationOfState
    cons : np.ndarray
        Conserved densities, shape ``(..., 6)``.
    guess : np.ndarray
        Primitive initial iterates, same shape, each admissible.
    max_iterations : int, default 50

    Returns
    -------
    np.ndarray
        Primitive fields. Cells already within tolerance at ``guess`` are
        returned unchanged.

    Raises
    ------
    RecoveryError
        If a cell has no admissible preimage or Newton does not
        converge; ``cells`` lists the flat indices.
    SingularJacobianError
        If a Newton Jacobian degenerates.
    """
    cons = np.asarray(cons, dtype=float)
    guess = np.asarray(guess, dtype=float)
    shape = cons.shape
    c = cons.reshape(-1, 6)
    x0 = np.broadcast_to(guess, shape).reshape(-1, 6)

    bad = np.flatnonzero(~np.all(np.isfinite(c), axis=-1) | ~(c[:, 4] > 0))
    if bad.size:
        raise RecoveryError(
            "No admissible preimage: particle density J0 must be positive.",
            iterate=x0[bad],
            cells=bad,
        )
    bad = np.flatnonzero(~admissible_fields(eos, x0))
    if bad.size:
        raise RecoveryError("Recovery guess is inadmissible.", iterate=x0[bad], cells=bad)

    tolerance = RECOVERY_TOLERANCE * (1.0 + np.max(np.abs(c), axis=-1))
    result = newton_solve(
        lambda W: conserved_array(eos, W),
        c,
        x0,
        tolerance,
        max_iterations=max_iterations,
        admissible=lambda W: admissible_fields(eos, W),
    )
    failed = np.flatnonzero(~result.converged)
    if failed.size:
        worst = float(np.max(result.residual[failed]))
        raise RecoveryError(
            f"Primitive recovery failed in {failed.size} cell(s) after "
            f"{max_iterations} iterations, residual {worst:.3e}.",
            iterate=result.solution[failed],
            residual=worst,
            cells=failed,
        )
    logger.debug(
        "Recovered %d cells in at most %d Newton steps.",
        c.shape[0],
        int(np.max(result.iterations, initial=0)),
    )
    return result.solution.reshape(shape)


def recover_primitive(eos: EquationOfState, c: ConsState, guess: PrimState) -> PrimState:
    """Primitive state whose conserved densities are ``c``.

    Newton iteration on ``to_conserved(X) - c`` starting at ``guess``,
    converged when the residual infinity norm is at most
    ``1e-12 * (1 + max|c|)``.

    Raises
    ------
    RecoveryError
        On non-convergence or when ``J0 <= 0``.
    SingularJacobianError
        If the Newton Jacobian is singular.
    """
    return PrimState.from_array(recover_fields(eos, c.values, guess.array))
