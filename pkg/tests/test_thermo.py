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
"""

import numpy as np
import pytest
from scipy.optimize import brentq

from mishydro.config import SamplingConfig
from mishydro.errors import DomainError, SingularJacobianError
from mishydro.numerics import jacobian
from mishydro.sampling import sample_states
from mishydro.thermo import (
    CallableEos,
    check_conditions,
    constrained_partial,
    derived,
    get_eos,
    mis_standard_eos,
    thermo_gradients,
)


class TestDerived:
    def test_unit_state(self, ideal_gas):
        q = derived(ideal_gas, 1.0, 1.0, 0.0)
        assert q.theta == pytest.approx(2.0 / 3.0, rel=1e-12)
        assert q.p == pytest.approx(2.0 / 3.0, rel=1e-12)
        assert q.pi == pytest.approx(0.0, abs=1e-14)
        assert q.s == pytest.approx(0.0, abs=1e-14)
        assert q.G == pytest.approx(5.0 / 3.0, rel=1e-12)
        assert q.f == pytest.approx(5.0 / 3.0, rel=1e-12)

    def test_nonequilibrium_pressure_sign(self, ideal_gas):
        # pi = theta * C * c_v / eps has the sign of C
        assert derived(ideal_gas, 1.0, 1.0, 0.1).pi > 0
        assert derived(ideal_gas, 1.0, 1.0, -0.1).pi < 0

    def test_vectorised(self, ideal_gas):
        eps = np.array([1.0, 2.0, 3.0])
        q = derived(ideal_gas, eps, 1.0, 0.0)
        np.testing.assert_allclose(q.theta, eps / 1.5, rtol=1e-12)

    @pytest.mark.parametrize("eps,nu", [(0.0, 1.0), (-1.0, 1.0), (1.0, 0.0), (1.0, -2.0)])
    def test_inadmissible_point(self, ideal_gas, eps, nu):
        with pytest.raises(DomainError):
            derived(ideal_gas, eps, nu, 0.0)

    @pytest.mark.parametrize(
        "point,quantity,expected",
        [
            ((1.0, 1.0, 0.1), "s", -0.0075),
            ((np.e, 1.0, 0.0), "s", 1.5),
            ((1.0, 1.0, 0.1), "theta", 0.66335),
            ((1.0, 1.0, 0.1), "pi", 0.09950),
        ],
    )
    def test_worked_values(self, ideal_gas, point, quantity, expected):
        value = float(getattr(derived(ideal_gas, *point), quantity))
        assert value == pytest.approx(expected, abs=5e-6)

    @pytest.mark.parametrize("c_v", [1.5, 3.0])
    def test_conjugate_pressure(self, rng, c_v):
        eos = get_eos("ideal-gas", c_v=c_v)
        eps, nu, C = sample_states(SamplingConfig(), 100, rng)[:, 3:].T
        q = derived(eos, eps, nu, C)
        d_C = eos.gradient(eps, nu, C)[:, 2]
        assert np.all(np.abs(q.pi + q.theta * d_C) <= 1e-9 * (1.0 + np.abs(q.pi)))

    @pytest.mark.parametrize("c_v", [1.5, 3.0])
    def test_free_enthalpy_identity(self, rng, c_v):
        eos = get_eos("ideal-gas", c_v=c_v)
        eps, nu, C = sample_states(SamplingConfig(), 100, rng)[:, 3:].T
        q = derived(eos, eps, nu, C)
        G = eps - q.theta * q.s + nu * q.p - C * q.pi
        np.testing.assert_allclose(q.G, G, rtol=1e-10)

    def test_negative_temperature(self):
        eos = CallableEos(function=lambda eps, nu, C: -np.log(eps) + np.log(nu))
        with pytest.raises(DomainError, match="theta > 0"):
            derived(eos, 1.0, 1.0, 0.0)


class TestEquationOfState:
    def test_closed_form_matches_finite_differences(self, ideal_gas):
        numeric = CallableEos(function=ideal_gas.entropy)
        point = (1.7, 0.9, 0.15)
        np.testing.assert_allclose(
            numeric.gradient(*point), ideal_gas.gradient(*point), rtol=1e-8
        )
        np.testing.assert_allclose(
            numeric.hessian(*point), ideal_gas.hessian(*point), rtol=1e-4, atol=1e-6
        )

    def test_callable_equilibrium(self, ideal_gas):
        eos = mis_standard_eos(lambda eps, nu: 1.5 * np.log(eps) + np.log(nu))
        np.testing.assert_allclose(
            eos.entropy(2.0, 1.1, 0.2), ideal_gas.entropy(2.0, 1.1, 0.2), rtol=1e-8
        )

    @pytest.mark.parametrize("c_v", [1.5, 3.0])
    def test_derivatives_on_random_points(self, rng, c_v):
        eos = get_eos("ideal-gas", c_v=c_v)
        X = sample_states(SamplingConfig(), 100, rng)[:, 3:]
        numeric = jacobian(
            lambda y: np.asarray(eos.entropy(y[..., 0], y[..., 1], y[..., 2]))[..., None], X
        )[:, 0, :]
        np.testing.assert_allclose(eos.gradient(*X.T), numeric, rtol=1e-5, atol=1e-8)
        numeric = jacobian(lambda y: eos.gradient(y[..., 0], y[..., 1], y[..., 2]), X)
        np.testing.assert_allclose(eos.hessian(*X.T), numeric, rtol=1e-5, atol=1e-8)

    def test_concave_on_sampled_box(self, ideal_gas, rng):
        X = sample_states(SamplingConfig(), 200, rng)[:, 3:]
        assert np.all(np.linalg.eigvalsh(ideal_gas.hessian(*X.T)) < 0)

    @pytest.mark.parametrize("c_v", [1.5, 3.0, 10.0])
    def test_concave_at_equilibrium(self, rng, c_v):
        eos = get_eos("ideal-gas", c_v=c_v)
        eps = rng.uniform(0.1, 10.0, size=100)
        nu = rng.uniform(0.1, 10.0, size=100)
        assert np.all(np.linalg.eigvalsh(eos.hessian(eps, nu, np.zeros(100))) < 0)

    def test_registry(self):
        assert get_eos("ideal-gas", c_v=3.0).equilibrium.c_v == 3.0
        with pytest.raises(KeyError, match="Unknown equation of state"):
            get_eos("van-der-waals")

    def test_admissible_mask(self, ideal_gas):
        mask = ideal_gas.admissible(np.array([1.0, -1.0, 1.0]), np.array([1.0, 1.0, 0.0]), 0.0)
        np.testing.assert_array_equal(mask, [True, False, False])


class TestConstrainedPartial:
    def test_isothermal_compressibility(self, ideal_gas):
        # p = theta / nu at C = 0
        gradients = thermo_gradients(ideal_gas, 1.0, 1.0, 0.0)
        value = constrained_partial(gradients, "p", "nu", ("theta", "C"))
        assert float(value) == pytest.approx(-2.0 / 3.0, rel=1e-10)

    def test_matches_root_finding(self, ideal_gas, rng):
        for eps, nu, C in sample_states(SamplingConfig(), 100, rng)[:, 3:]:
            theta = float(derived(ideal_gas, eps, nu, C).theta)

            def pressure(volume):
                # energy that holds theta fixed at this volume
                energy = brentq(
                    lambda e: float(derived(ideal_gas, e, volume, C).theta) - theta,
                    0.5 * eps,
                    2.0 * eps,
                    xtol=1e-14,
                    rtol=1e-15,
                )
                return float(derived(ideal_gas, energy, volume, C).p)

            h = 1e-4 * nu
            numeric = (pressure(nu + h) - pressure(nu - h)) / (2.0 * h)
            gradients = thermo_gradients(ideal_gas, eps, nu, C)
            value = constrained_partial(gradients, "p", "nu", ("theta", "C"))
            assert float(value) == pytest.approx(numeric, rel=1e-5)

    def test_degenerate_chart(self, ideal_gas):
        gradients = thermo_gradients(ideal_gas, 1.0, 1.0, 0.0)
        with pytest.raises(SingularJacobianError):
            constrained_partial(gradients, "pi", "nu", ("theta", "p"))


class TestConditions:
    def test_unit_state_values(self, ideal_gas):
        report = check_conditions(ideal_gas, 1.0, 1.0, 0.0)
        assert report.concave
        assert report.condition_1 == pytest.approx(0.6, rel=1e-8)
        assert np.isnan(report.condition_2)
        assert "(nu,theta,p)" in report.degenerate
        assert report.minor_condition_1 == pytest.approx(1.0 / 3.0, rel=1e-8)
        assert report.minor_condition_2 == pytest.approx(-4.0 / 15.0, rel=1e-8)
        assert report.passed_condition_1
        assert not report.passed_condition_2
        assert report.status == "condition-failed"

    def test_causal_state_passes(self, ideal_gas):
        report = check_conditions(ideal_gas, 3.0, 1.0, 0.0)
        assert report.minor_condition_1 == pytest.approx(1.0 / 3.0, rel=1e-8)
        assert report.minor_condition_2 == pytest.approx(2.0 / 15.0, rel=1e-8)
        assert report.passed
        assert report.strict
        assert report.status == "pass"

    def test_hessian_negative_definite(self, ideal_gas):
        report = check_conditions(ideal_gas, 3.5, 0.9, 0.15)
        assert np.all(report.hessian_eigenvalues < 0)

    def test_convex_entropy_is_flagged(self):
        eos = CallableEos(function=lambda eps, nu, C: eps**2 + nu**2 - C**2)
        report = check_conditions(eos, 1.0, 1.0, 0.0)
        assert not report.concave
        assert report.status == "not-concave"
        assert not report.passed

    def test_row(self, ideal_gas):
        row = check_conditions(ideal_gas, 3.0, 1.0, 0.0).as_row()
        assert row["status"] == "pass"
        assert row["hessian_eig_min"] <= row["hessian_eig_mid"] <= row["hessian_eig_max"] < 0

    def test_rest_sound_speed_from_minor(self, ideal_gas):
        # c^2 = 1 - minor_condition_2 at rest
        report = check_conditions(ideal_gas, 3.0, 1.0, 0.0)
        assert 1.0 - report.minor_condition_2 == pytest.approx(13.0 / 15.0, rel=1e-8)
