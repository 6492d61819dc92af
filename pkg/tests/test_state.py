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

from mishydro.config import SamplingConfig
from mishydro.errors import DomainError, RecoveryError
from mishydro.sampling import sample_states
from mishydro.state import (
    ConsState,
    PrimState,
    boost_velocity,
    conserved_array,
    recover_fields,
    recover_primitive,
    to_conserved,
)


class TestPrimState:
    def test_rest_four_velocity(self, unit_rest):
        assert unit_rest.u0 == 1.0
        np.testing.assert_array_equal(unit_rest.four_velocity, [1.0, 0.0, 0.0, 0.0])

    def test_normalisation(self):
        U = PrimState(u=(0.3, -0.4, 1.2), eps=2.0, nu=0.5, C=0.1)
        four = U.four_velocity
        assert -four[0] ** 2 + np.sum(four[1:] ** 2) == pytest.approx(-1.0, abs=1e-14)
        assert U.n == 2.0

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"u": (0, 0, 0), "eps": 0.0, "nu": 1.0},
            {"u": (0, 0, 0), "eps": 1.0, "nu": -1.0},
            {"u": (0, 0, 0), "eps": np.nan, "nu": 1.0},
            {"u": (2e6, 0, 0), "eps": 1.0, "nu": 1.0},
            {"u": (0, 0), "eps": 1.0, "nu": 1.0},
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(DomainError):
            PrimState(**kwargs)

    def test_negative_C_is_allowed(self):
        assert PrimState.at_rest(1.0, 1.0, -5.0).C == -5.0

    def test_array_round_trip(self):
        U = PrimState(u=(0.1, 0.2, 0.3), eps=1.5, nu=0.7, C=-0.2)
        assert PrimState.from_array(U.array) == U

    def test_mirrored(self):
        U = PrimState(u=(0.1, 0.2, 0.3), eps=1.5, nu=0.7, C=-0.2)
        assert U.mirrored().u == (-0.1, 0.2, 0.3)
        assert U.mirrored().mirrored() == U

    def test_boost_to_rest_frame(self):
        U = PrimState(u=(0.75, 0.0, 0.0), eps=1.0, nu=1.0)
        boosted = U.boosted(0.6)
        assert boosted.u[0] == pytest.approx(0.0, abs=1e-14)
        with pytest.raises(DomainError):
            U.boosted(1.0)


class TestConserved:
    def test_rest_densities(self, ideal_gas, unit_rest):
        c = to_conserved(ideal_gas, unit_rest)
        np.testing.assert_allclose(c.values, [1.0, 0.0, 0.0, 0.0, 1.0, 1.0], atol=1e-14)
        assert c.particle_density == 1.0

    def test_moving_densities(self, ideal_gas):
        U = PrimState(u=(0.75, 0.0, 0.0), eps=1.0, nu=1.0)
        c = to_conserved(ideal_gas, U).values
        # T^00 = (eps n + p) u0^2 - p with p = 2/3, u0 = 5/4
        assert c[0] == pytest.approx((1.0 + 2.0 / 3.0) * 1.5625 - 2.0 / 3.0, rel=1e-12)
        assert c[4] == pytest.approx(1.25, rel=1e-14)

    def test_read_only(self):
        c = ConsState([1.0, 0.0, 0.0, 0.0, 1.0, 1.0])
        with pytest.raises(ValueError):
            c.values[0] = 2.0
        with pytest.raises(DomainError):
            ConsState([1.0, 2.0])

    def test_inadmissible(self, ideal_gas):
        with pytest.raises(DomainError):
            conserved_array(ideal_gas, np.array([0.0, 0.0, 0.0, -1.0, 1.0, 0.0]))


class TestRecovery:
    @pytest.mark.parametrize(
        "state",
        [
            PrimState.at_rest(1.0, 1.0, 0.0),
            PrimState(u=(0.4, -0.2, 0.1), eps=3.2, nu=0.9, C=0.15),
            PrimState(u=(0.8, 0.0, 0.0), eps=1.0, nu=2.0, C=-0.3),
        ],
    )
    def test_inverts_conserved_map(self, ideal_gas, state):
        c = to_conserved(ideal_gas, state)
        guess = PrimState.at_rest(state.eps * 1.1, state.nu * 0.9, 0.0)
        recovered = recover_primitive(ideal_gas, c, guess)
        np.testing.assert_allclose(recovered.array, state.array, rtol=1e-9, atol=1e-10)

    def test_exact_guess_is_unchanged(self, ideal_gas):
        W = np.array([[0.1, 0.0, 0.0, 3.0, 1.0, 0.05], [0.0, 0.0, 0.0, 3.0, 0.8, 0.0]])
        np.testing.assert_array_equal(recover_fields(ideal_gas, conserved_array(ideal_gas, W), W), W)

    def test_half_particle_density(self, ideal_gas, unit_rest):
        c = ConsState([1.0, 0.0, 0.0, 0.0, 0.5, 1.0])
        assert recover_primitive(ideal_gas, c, unit_rest).nu == pytest.approx(2.0, rel=1e-10)

    def test_negative_particle_density(self, ideal_gas, unit_rest):
        c = ConsState([1.0, 0.0, 0.0, 0.0, -0.5, 1.0])
        with pytest.raises(RecoveryError) as info:
            recover_primitive(ideal_gas, c, unit_rest)
        np.testing.assert_array_equal(info.value.cells, [0])

    def test_batched_failure_lists_cells(self, ideal_gas):
        W = np.array([[0.0, 0.0, 0.0, 1.0, 1.0, 0.0]] * 3)
        cons = conserved_array(ideal_gas, W)
        cons[2, 4] = 0.0
        with pytest.raises(RecoveryError) as info:
            recover_fields(ideal_gas, cons, W)
        np.testing.assert_array_equal(info.value.cells, [2])


def test_boost_velocity_example():
    np.testing.assert_allclose(boost_velocity([0.75, 0.0, 0.0]), [1.25, 0.75, 0.0, 0.0])


@pytest.mark.slow
def test_recovery_round_trip_on_random_states(ideal_gas, rng):
    W = sample_states(SamplingConfig(), 10_000, rng)
    guess = W * (1.0 + 0.01 * rng.uniform(-1.0, 1.0, size=W.shape))
    recovered = recover_fields(ideal_gas, conserved_array(ideal_gas, W), guess)
    assert np.max(np.abs(recovered - W)) <= 1e-10
