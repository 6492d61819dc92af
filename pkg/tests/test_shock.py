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

from mishydro.errors import DomainError
from mishydro.godunov import pencil_speeds
from mishydro.shock import (
    LaxStatus,
    contact_jump,
    family_eigenvector,
    fit_entropy_scaling,
    hugoniot_locus,
    mirror_point,
    rh_residual,
    rh_tolerance,
    weak_points,
)
from mishydro.state import PrimState
from mishydro.thermo import get_eos

LEFT = PrimState.at_rest(3.0, 1.0, 0.0)


@pytest.fixture(scope="module")
def eos():
    return get_eos("ideal-gas")


@pytest.fixture(scope="module")
def compressive(eos):
    return hugoniot_locus(eos, LEFT, 6, steps=40, step_size=1e-3, branch=-1)


@pytest.fixture(scope="module")
def expansive(eos):
    return hugoniot_locus(eos, LEFT, 6, steps=10, step_size=1e-3, branch=1)


class TestEigenvector:
    @pytest.mark.parametrize("family", [1, 6])
    def test_simple_families(self, eos, family):
        lam, r = family_eigenvector(eos, LEFT, family)
        assert abs(lam) == pytest.approx(np.sqrt(13.0 / 15.0), rel=1e-6)
        assert np.linalg.norm(r) == pytest.approx(1.0)

    @pytest.mark.parametrize("family", [0, 3, 7])
    def test_rejects_multiple_or_missing_family(self, eos, family):
        with pytest.raises(DomainError):
            family_eigenvector(eos, LEFT, family)


class TestLocus:
    def test_trivial_point_first(self, compressive):
        first = compressive.points[0]
        assert first.amplitude == 0.0
        assert first.right == LEFT
        assert not compressive.stalled
        assert len(compressive.points) == 41

    def test_jump_conditions_hold(self, eos, compressive):
        tolerance = rh_tolerance(eos, LEFT)
        for point in compressive.points[1:]:
            residual = rh_residual(eos, point.left, point.right, point.sigma)
            assert np.max(np.abs(residual)) <= tolerance
            assert point.residual <= tolerance

    def test_weak_shocks_are_admissible_and_dissipative(self, compressive):
        weak = weak_points(compressive)
        assert weak
        for point in weak:
            assert point.lax == LaxStatus.ADMISSIBLE
            assert point.entropy_production > 0

    def test_expansive_branch_violates_lax(self, expansive):
        for point in expansive.points[1:]:
            assert point.lax == LaxStatus.NOT_ADMISSIBLE
            assert point.entropy_production < 0

    def test_speed_halfway_between_characteristics(self, eos, compressive):
        point = compressive.points[1]
        lam_L = pencil_speeds(eos, point.left.array)[5]
        lam_R = pencil_speeds(eos, point.right.array)[5]
        assert (point.sigma - lam_L) / (lam_R - lam_L) == pytest.approx(0.5, abs=0.05)

    def test_entropy_grows_cubically(self, compressive):
        slope = fit_entropy_scaling(compressive, window=(3e-3, 5e-2))
        assert slope == pytest.approx(3.0, abs=0.3)

    def test_fit_needs_three_points(self, compressive):
        assert np.isnan(fit_entropy_scaling(compressive, window=(10.0, 20.0)))

    def test_branch_sign(self, eos):
        with pytest.raises(ValueError):
            hugoniot_locus(eos, LEFT, 6, steps=1, branch=0)

    def test_frame(self, compressive):
        frame = compressive.to_frame()
        assert len(frame) == len(compressive.points)
        assert set(frame["kind"]) == {"point"}
        assert {"sigma", "E", "lax", "u1", "eps", "nu", "C"} <= set(frame.columns)


class TestMirror:
    def test_mirror_preserves_entropy_and_lax(self, eos, compressive):
        point = compressive.points[10]
        image = mirror_point(eos, point)
        assert image.family == 1
        assert image.sigma == -point.sigma
        assert image.entropy_production == pytest.approx(point.entropy_production, rel=1e-8)
        assert image.lax == point.lax
        assert image.residual <= rh_tolerance(eos, image.left)


class TestContact:
    def test_transverse_contact(self, eos):
        point = contact_jump(eos, LEFT, u2=0.2)
        assert point.sigma == 0.0
        assert point.entropy_production == 0.0
        assert point.residual <= rh_tolerance(eos, LEFT)

    def test_moving_contact_with_energy_jump(self, eos):
        U_L = PrimState(u=(0.2, 0.0, 0.0), eps=3.0, nu=1.0, C=0.05)
        point = contact_jump(eos, U_L, u2=-0.1, eps=3.5)
        assert point.right.eps == 3.5
        assert point.right.nu != U_L.nu
        assert point.sigma == pytest.approx(0.2 / U_L.u0)
        assert point.residual <= rh_tolerance(eos, U_L)
        assert point.entropy_production == pytest.approx(0.0, abs=1e-12)


@pytest.mark.slow
def test_acoustic_locus_over_full_amplitude_range(eos):
    locus = hugoniot_locus(eos, LEFT, 6, steps=200, step_size=1e-3, branch=-1)
    assert len(locus.points) == 201
    weak = [p for p in locus.points[1:] if p.amplitude <= 0.1]
    assert weak
    for point in weak:
        if point.lax == LaxStatus.ADMISSIBLE:
            assert point.entropy_production > 0
    assert 2.5 <= fit_entropy_scaling(locus, window=(1e-3, 1e-1)) <= 3.5
