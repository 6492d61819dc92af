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

Generalized equation of state ``s(eps, nu, C)`` and derived thermodynamics.

``eps`` is the internal energy per particle, ``nu`` the volume per
particle and ``C`` the non-equilibrium variable conjugate to the bulk
viscous pressure. Units are c = k_B = 1.

The entropy is required to be strictly concave. The non-equilibrium
variable ranges over all reals so that equilibrium ``C = 0`` is
admissible and the bulk pressure takes both signs.

All functions accept scalars or arrays and broadcast over them.
"""

import logging
from dataclasses import dataclass, field

import numpy as np
import param

from .errors import DomainError, SingularJacobianError
from .numerics import FD_RELATIVE_STEP, jacobian

logger = logging.getLogger(__name__)

# nested differences use the square root of the first-derivative step
FD_SECOND_STEP = np.sqrt(FD_RELATIVE_STEP)
CONDITION_TOLERANCE = 1e-8
CHART_TOLERANCE = 1e-10

THERMO_VARIABLES = ("eps", "nu", "C")


def _stack(*arrays) -> np.ndarray:
    return np.stack(np.broadcast_arrays(*[np.asarray(a, dtype=float) for a in arrays]), axis=-1)


class EquilibriumEntropy(param.Parameterized):
    """Equilibrium entropy per particle ``s_eq(eps, nu)``.

    Subclasses implement :meth:`value`. Derivatives default to central
    finite differences and should be overridden when closed forms exist.
    """

    def value(self, eps, nu):
        raise NotImplementedError

    def gradient(self, eps, nu) -> np.ndarray:
        """First derivatives ``(d_eps, d_nu)``, shape ``(..., 2)``."""
        x = _stack(eps, nu)
        return jacobian(lambda y: self.value(y[..., 0], y[..., 1])[..., None], x)[
            ..., 0, :
        ]

    def hessian(self, eps, nu) -> np.ndarray:
        """Second derivatives, shape ``(..., 2, 2)``."""
        x = _stack(eps, nu)
        h = jacobian(lambda y: self.gradient(y[..., 0], y[..., 1]), x, FD_SECOND_STEP)
        return 0.5 * (h + np.swapaxes(h, -1, -2))

    def hessian_eps(self, eps, nu) -> np.ndarray:
        """Derivative of :meth:`hessian` with respect to ``eps``."""
        x = _stack(eps, nu)
        h = jacobian(
            lambda y: self.hessian(y[..., 0], y[..., 1]).reshape(y.shape[:-1] + (4,)),
            x,
            FD_SECOND_STEP,
        )
        return h[..., 0].reshape(h.shape[:-2] + (2, 2))


class IdealGasEntropy(EquilibriumEntropy):
    """Ideal-gas-like equilibrium entropy ``c_v ln(eps) + ln(nu)``.

    Attributes
    ----------
    c_v : param.Number, default 1.5
        Heat capacity per particle.
    """

    c_v = param.Number(default=1.5, bounds=(0, None), inclusive_bounds=(False, True))

    def value(self, eps, nu):
        return self.c_v * np.log(eps) + np.log(nu)

    def gradient(self, eps, nu):
        eps, nu = np.broadcast_arrays(np.asarray(eps, float), np.asarray(nu, float))
        return np.stack([self.c_v / eps, 1.0 / nu], axis=-1)

    def hessian(self, eps, nu):
        eps, nu = np.broadcast_arrays(np.asarray(eps, float), np.asarray(nu, float))
        out = np.zeros(eps.shape + (2, 2))
        out[..., 0, 0] = -self.c_v / eps**2
        out[..., 1, 1] = -1.0 / nu**2
        return out

    def hessian_eps(self, eps, nu):
        eps, nu = np.broadcast_arrays(np.asarray(eps, float), np.asarray(nu, float))
        out = np.zeros(eps.shape + (2, 2))
        out[..., 0, 0] = 2.0 * self.c_v / eps**3
        return out


class CallableEntropy(EquilibriumEntropy):
    """Equilibrium entropy given by a plain function of ``(eps, nu)``."""

    function = param.Callable(default=None)

    def value(self, eps, nu):
        return np.asarray(self.function(eps, nu), dtype=float)


class EquationOfState(param.Parameterized):
    """Generalized entropy per particle ``s(eps, nu, C)``.

    Subclasses implement :meth:`entropy`; first derivatives default to
    central differences with ``h = max(1e-6, 1e-6*|x|)`` and second
    derivatives to central differences of the gradient with the square
    root of that step.

    Attributes
    ----------
    name : param.String
        Registry name, echoed in run manifests.
    """

    name = param.String(default="custom")

    def entropy(self, eps, nu, C):
        raise NotImplementedError

    def gradient(self, eps, nu, C) -> np.ndarray:
        """``(d_eps s, d_nu s, d_C s)``, shape ``(..., 3)``."""
        x = _stack(eps, nu, C)
        return jacobian(
            lambda y: np.asarray(self.entropy(y[..., 0], y[..., 1], y[..., 2]))[..., None],
            x,
        )[..., 0, :]

    def hessian(self, eps, nu, C) -> np.ndarray:
        """Hessian of ``s`` in ``(eps, nu, C)``, shape ``(..., 3, 3)``."""
        x = _stack(eps, nu, C)
        h = jacobian(
            lambda y: self.gradient(y[..., 0], y[..., 1], y[..., 2]), x, FD_SECOND_STEP
        )
        return 0.5 * (h + np.swapaxes(h, -1, -2))

    def admissible(self, eps, nu, C, gradient=None) -> np.ndarray:
        """Boolean mask of admissible points."""
        eps, nu, C = np.broadcast_arrays(
            np.asarray(eps, float), np.asarray(nu, float), np.asarray(C, float)
        )
        ok = (eps > 0) & (nu > 0) & np.isfinite(eps) & np.isfinite(nu) & np.isfinite(C)
        if not ok.any():
            return ok
        if gradient is None:
            gradient = np.full(eps.shape + (3,), np.nan)
            gradient[ok] = self.gradient(eps[ok], nu[ok], C[ok])
        with np.errstate(invalid="ignore"):
            return ok & (gradient[..., 0] > 0)

    def check_domain(self, eps, nu, C, gradient=None):
        """Raise :class:`DomainError` naming the first failing inequality."""
        eps, nu, C = np.broadcast_arrays(
            np.asarray(eps, float), np.asarray(nu, float), np.asarray(C, float)
        )
        if not np.all(np.isfinite(eps) & np.isfinite(nu) & np.isfinite(C)):
            raise DomainError("State is not finite.")
        if np.any(eps <= 0):
            raise DomainError(f"Energy per particle must satisfy eps > 0, got {np.min(eps)}.")
        if np.any(nu <= 0):
            raise DomainError(f"Volume per particle must satisfy nu > 0, got {np.min(nu)}.")
        if gradient is None:
            gradient = self.gradient(eps, nu, C)
        if np.any(~(gradient[..., 0] > 0)):
            raise DomainError(
                "Temperature must satisfy theta > 0, i.e. d_eps s > 0; "
                f"got d_eps s = {np.min(gradient[..., 0])}."
            )


class CallableEos(EquationOfState):
    """Equation of state given by a plain function ``s(eps, nu, C)``.

    All derivatives are taken by finite differences.
    """

    function = param.Callable(default=None)

    def entropy(self, eps, nu, C):
        return np.asarray(self.function(eps, nu, C), dtype=float)


class MisEntropyEos(EquationOfState):
    """Mueller-Israel-Stewart entropy ``s_eq - C**2 / (2*theta_eq)``.

    With ``1/theta_eq = d_eps s_eq`` all derivatives follow in closed
    form from those of the equilibrium entropy.

    Attributes
    ----------
    equilibrium : EquilibriumEntropy
        The equilibrium entropy ``s_eq(eps, nu)``.
    """

    equilibrium = param.ClassSelector(class_=EquilibriumEntropy)

    def entropy(self, eps, nu, C):
        g = self.equilibrium.gradient(eps, nu)
        return self.equilibrium.value(eps, nu) - 0.5 * np.square(C) * g[..., 0]

    def gradient(self, eps, nu, C):
        C = np.asarray(C, dtype=float)
        g = self.equilibrium.gradient(eps, nu)
        h = self.equilibrium.hessian(eps, nu)
        half_c2 = 0.5 * np.square(C)
        return np.stack(
            np.broadcast_arrays(
                g[..., 0] - half_c2 * h[..., 0, 0],
                g[..., 1] - half_c2 * h[..., 0, 1],
                -C * g[..., 0],
            ),
            axis=-1,
        )

    def hessian(self, eps, nu, C):
        C = np.asarray(C, dtype=float)
        g = self.equilibrium.gradient(eps, nu)
        h = self.equilibrium.hessian(eps, nu)
        d = self.equilibrium.hessian_eps(eps, nu)
        half_c2 = 0.5 * np.square(C)
        shape = np.broadcast_shapes(g.shape[:-1], C.shape)
        out = np.zeros(shape + (3, 3))
        out[..., :2, :2] = h - half_c2[..., None, None] * d
        out[..., 0, 2] = out[..., 2, 0] = -C * h[..., 0, 0]
        out[..., 1, 2] = out[..., 2, 1] = -C * h[..., 0, 1]
        out[..., 2, 2] = -g[..., 0]
        return out

    def admissible(self, eps, nu, C, gradient=None):
        ok = super().admissible(eps, nu, C, gradient)
        if ok.any():
            eps_b = np.broadcast_to(np.asarray(eps, float), ok.shape)
            nu_b = np.broadcast_to(np.asarray(nu, float), ok.shape)
            theta_eq_inv = np.full(ok.shape, np.nan)
            theta_eq_inv[ok] = self.equilibrium.gradient(eps_b[ok], nu_b[ok])[..., 0]
            with np.errstate(invalid="ignore"):
                ok = ok & (theta_eq_inv > 0)
        return ok

    def check_domain(self, eps, nu, C, gradient=None):
        eps_a, nu_a = np.asarray(eps, float), np.asarray(nu, float)
        if np.all(eps_a > 0) and np.all(nu_a > 0):
            g = self.equilibrium.gradient(eps_a, nu_a)
            if np.any(~(g[..., 0] > 0)):
                raise DomainError(
                    "Equilibrium temperature must satisfy theta_eq > 0, "
                    f"got d_eps s_eq = {np.min(g[..., 0])}."
                )
        super().check_domain(eps, nu, C, gradient)


def mis_standard_eos(s_eq, name: str = "mis") -> MisEntropyEos:
    """Build the standard MIS equation of state from ``s_eq``.

    Parameters
    ----------
    s_eq : EquilibriumEntropy or Callable
        Equilibrium entropy. A plain function of ``(eps, nu)`` is
        differentiated numerically.
    name : str, default "mis"

    Returns
    -------
    MisEntropyEos
        ``s = s_eq - C**2 / (2*theta_eq)`` with ``theta_eq = 1/d_eps s_eq``.
    """
    if not isinstance(s_eq, EquilibriumEntropy):
        s_eq = CallableEntropy(function=s_eq)
    return MisEntropyEos(equilibrium=s_eq, name=name)


def _ideal_gas(c_v: float = 1.5) -> MisEntropyEos:
    return mis_standard_eos(IdealGasEntropy(c_v=float(c_v)), name="ideal-gas")


def _quadratic() -> MisEntropyEos:
    return mis_standard_eos(lambda eps, nu: np.square(eps), name="quadratic")


eos_registry = {
    "ideal-gas": _ideal_gas,
    "quadratic": _quadratic,
}


def get_eos(name: str, **parameters) -> EquationOfState:
    """Look up an equation of state by registry name.

    Raises
    ------
    KeyError
        If the name is unknown.
    TypeError
        If a parameter is not accepted by that equation of state.
    """
    try:
        factory = eos_registry[name]
    except KeyError:
        raise KeyError(
            f"Unknown equation of state '{name}'. Available: {sorted(eos_registry)}"
        ) from None
    return factory(**parameters)


@dataclass(frozen=True)
class DerivedQuantities:
    """Thermodynamic quantities derived from ``s`` at one or more points.

    ``G`` is the free enthalpy ``eps - theta*s + nu*p - C*pi`` and
    ``f = eps + nu*(p + pi)``.
    """

    theta: np.ndarray
    p: np.ndarray
    pi: np.ndarray
    G: np.ndarray
    f: np.ndarray
    s: np.ndarray


def derived(eos: EquationOfState, eps, nu, C) -> DerivedQuantities:
    """Temperature, pressures, free enthalpy and ``f`` from the entropy.

    Raises
    ------
    DomainError
        If the point is inadmissible, including non-positive temperature.
    """
    eps = np.asarray(eps, dtype=float)
    nu = np.asarray(nu, dtype=float)
    C = np.asarray(C, dtype=float)
    gradient = eos.gradient(eps, nu, C)
    eos.check_domain(eps, nu, C, gradient)
    s = np.asarray(eos.entropy(eps, nu, C), dtype=float)
    theta = 1.0 / gradient[..., 0]
    p = theta * gradient[..., 1]
    pi = -theta * gradient[..., 2]
    G = eps - theta * s + nu * p - C * pi
    f = eps + nu * (p + pi)
    return DerivedQuantities(theta=theta, p=p, pi=pi, G=G, f=f, s=s)


def thermo_gradients(eos: EquationOfState, eps, nu, C) -> dict:
    """Gradients of thermodynamic functions with respect to ``(eps, nu, C)``.

    Returns
    -------
    dict
        Rows of shape ``(..., 3)`` keyed by ``theta``, ``p``, ``pi``,
        ``s``, ``G`` and the coordinates ``eps``, ``nu``, ``C``.
    """
    eps = np.asarray(eps, dtype=float)
    nu = np.asarray(nu, dtype=float)
    C = np.asarray(C, dtype=float)
    grad = eos.gradient(eps, nu, C)
    hess = eos.hessian(eps, nu, C)
    theta = 1.0 / grad[..., 0]
    d_theta = -np.square(theta)[..., None] * hess[..., 0, :]
    d_p = grad[..., 1, None] * d_theta + theta[..., None] * hess[..., 1, :]
    d_pi = -grad[..., 2, None] * d_theta - theta[..., None] * hess[..., 2, :]
    shape = grad.shape
    unit = np.eye(3)
    s = np.asarray(eos.entropy(eps, nu, C), dtype=float)
    # dG = -s dtheta + nu dp - C dpi
    d_G = -s[..., None] * d_theta + nu[..., None] * d_p - C[..., None] * d_pi
    return {
        "theta": d_theta,
        "p": d_p,
        "pi": d_pi,
        "s": grad,
        "G": d_G,
        "eps": np.broadcast_to(unit[0], shape),
        "nu": np.broadcast_to(unit[1], shape),
        "C": np.broadcast_to(unit[2], shape),
    }


def constrained_partial(gradients: dict, of: str, wrt: str, fixed: tuple) -> np.ndarray:
    """Partial derivative ``d(of)/d(wrt)`` holding two other functions fixed.

    Evaluated as the Jacobian determinant ratio
    ``D(of, a, b) / D(wrt, a, b)`` with every determinant taken with
    respect to ``(eps, nu, C)``.

    Parameters
    ----------
    gradients : dict
        Output of :func:`thermo_gradients`.
    of, wrt : str
        Names of the differentiated function and the free variable.
    fixed : tuple[str, str]
        Names of the two functions held fixed.

    Raises
    ------
    SingularJacobianError
        If ``(wrt, *fixed)`` is not a chart of the thermodynamic state space.
    """
    a, b = fixed
    numerator = np.linalg.det(
        np.stack([gradients[of], gradients[a], gradients[b]], axis=-2)
    )
    rows = np.stack([gradients[wrt], gradients[a], gradients[b]], axis=-2)
    denominator = np.linalg.det(rows)
    scale = np.prod(np.linalg.norm(rows, axis=-1), axis=-1)
    if np.any(~(np.abs(denominator) > CHART_TOLERANCE * scale)):
        raise SingularJacobianError(f"({wrt}, {a}, {b}) is not a chart here.")
    return numerator / denominator


def free_enthalpy_hessian(gradients: dict) -> np.ndarray:
    """Hessian of ``G`` in its natural variables ``(theta, p, pi)``.

    Since ``dG = -s dtheta + nu dp - C dpi`` this is the Jacobian
    ``D(-s, nu, -C) / D(theta, p, pi)``.

    Raises
    ------
    SingularJacobianError
        If ``(theta, p, pi)`` do not provide coordinates.
    """
    natural = np.stack([gradients["theta"], gradients["p"], gradients["pi"]], axis=-2)
    conjugate = np.stack([-gradients["s"], gradients["nu"], -gradients["C"]], axis=-2)
    scale = np.prod(np.linalg.norm(natural, axis=-1), axis=-1)
    if np.any(~(np.abs(np.linalg.det(natural)) > CHART_TOLERANCE * scale)):
        raise SingularJacobianError("(theta, p, pi) is not a chart here.")
    hess = conjugate @ np.linalg.inv(natural)
    return 0.5 * (hess + np.swapaxes(hess, -1, -2))


def _flag(value: float, tol: float = CONDITION_TOLERANCE) -> bool:
    return bool(np.isfinite(value) and value >= -tol * (1.0 + abs(value)))


def _strict(value: float, tol: float = CONDITION_TOLERANCE) -> bool:
    return bool(np.isfinite(value) and value > tol * (1.0 + abs(value)))


@dataclass(frozen=True)
class ConditionReport:
    """Concavity and subsidiary-condition audit at one thermodynamic point.

    ``condition_1`` and ``condition_2`` are the quantities exactly as
    stated (``1 + nu**2/f * dp/dnu|theta,C`` and the three-term form);
    they are NaN when a chart they need degenerates, with the chart
    named in ``degenerate``. ``minor_condition_1`` and
    ``minor_condition_2`` are the second and third leading principal
    minors of ``G~`` divided by the matching minors of ``-D^2 G``; they
    decide ``passed``.
    """

    eps: float
    nu: float
    C: float
    hessian_eigenvalues: np.ndarray
    concave: bool
    condition_1: float
    condition_2: float
    minor_condition_1: float
    minor_condition_2: float
    gtilde_minors: np.ndarray
    passed_condition_1: bool
    passed_condition_2: bool
    strict_condition_1: bool
    strict_condition_2: bool
    stated_passed_1: bool
    stated_passed_2: bool
    singular: bool = False
    degenerate: tuple = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return (
            self.concave
            and not self.singular
            and self.passed_condition_1
            and self.passed_condition_2
        )

    @property
    def strict(self) -> bool:
        return self.passed and self.strict_condition_1 and self.strict_condition_2

    @property
    def status(self) -> str:
        if self.singular:
            return "singular"
        if not self.concave:
            return "not-concave"
        return "pass" if self.passed else "condition-failed"

    def as_row(self) -> dict:
        """Flatten for CSV output."""
        eig = self.hessian_eigenvalues
        return {
            "eps": self.eps,
            "nu": self.nu,
            "C": self.C,
            "hessian_eig_min": float(np.min(eig)),
            "hessian_eig_mid": float(np.median(eig)),
            "hessian_eig_max": float(np.max(eig)),
            "condition_1": self.condition_1,
            "condition_2": self.condition_2,
            "minor_condition_1": self.minor_condition_1,
            "minor_condition_2": self.minor_condition_2,
            "strict": self.strict,
            "degenerate": ";".join(self.degenerate),
            "status": self.status,
        }


def _stated_conditions(gradients, k):
    """Conditions exactly as stated, with degenerate charts collected."""
    degenerate = []

    def partial(of, wrt, fixed):
        try:
            return float(constrained_partial(gradients, of, wrt, fixed))
        except SingularJacobianError:
            degenerate.append(f"({wrt},{fixed[0]},{fixed[1]})")
            return np.nan

    condition_1 = 1.0 + k * partial("p", "nu", ("theta", "C"))
    condition_2 = 1.0 + k * (
        -partial("pi", "C", ("theta", "p"))
        + partial("p", "nu", ("theta", "pi"))
        + 2.0 * partial("pi", "nu", ("theta", "p"))
    )
    return condition_1, condition_2, tuple(degenerate)


def check_conditions(
    eos: EquationOfState, eps: float, nu: float, C: float, tol: float = CONDITION_TOLERANCE
) -> ConditionReport:
    """Audit strict concavity and the two subsidiary conditions at a point.

    Parameters
    ----------
    eos : EquationOfState
    eps, nu, C : float
        Admissible thermodynamic point.
    tol : float, default 1e-8
        Flags are set when ``value >= -tol*(1 + |value|)``.

    Returns
    -------
    ConditionReport
        A degenerate change of variables to ``(theta, p, pi)`` is
        reported through ``singular`` rather than raised.

    Raises
    ------
    DomainError
        If the point is inadmissible.
    """
    eps, nu, C = float(eps), float(nu), float(C)
    quantities = derived(eos, eps, nu, C)
    k = nu**2 / float(quantities.f)
    eigenvalues = np.linalg.eigvalsh(eos.hessian(eps, nu, C))
    concave = bool(np.max(eigenvalues) < -tol * (1.0 + np.max(np.abs(eigenvalues))))
    gradients = thermo_gradients(eos, eps, nu, C)

    condition_1, condition_2, degenerate = _stated_conditions(gradients, k)

    singular = False
    minors = np.full(3, np.nan)
    minor_1 = minor_2 = np.nan
    try:
        hess_g = free_enthalpy_hessian(gradients)
        coupling = np.array([[0.0, 0.0, 0.0], [0.0, 1.0, 1.0], [0.0, 1.0, 1.0]])
        g_tilde = -hess_g - k * coupling
        minors = np.array([np.linalg.det(g_tilde[:j, :j]) for j in (1, 2, 3)])
        base = np.array([np.linalg.det(-hess_g[:j, :j]) for j in (1, 2, 3)])
        minor_1 = float(minors[1] / base[1])
        minor_2 = float(minors[2] / base[2])
    except SingularJacobianError:
        logger.debug("Singular (theta, p, pi) chart at (%g, %g, %g).", eps, nu, C)
        singular = True

    return ConditionReport(
        eps=eps,
        nu=nu,
        C=C,
        hessian_eigenvalues=eigenvalues,
        concave=concave,
        condition_1=condition_1,
        condition_2=condition_2,
        minor_condition_1=minor_1,
        minor_condition_2=minor_2,
        gtilde_minors=minors,
        passed_condition_1=_flag(minor_1, tol),
        passed_condition_2=_flag(minor_2, tol),
        strict_condition_1=_strict(minor_1, tol),
        strict_condition_2=_strict(minor_2, tol),
        stated_passed_1=_flag(condition_1, tol),
        stated_passed_2=_flag(condition_2, tol),
        singular=singular,
        degenerate=degenerate,
    )
