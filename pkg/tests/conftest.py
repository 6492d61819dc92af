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

Shared fixtures.
"""

import numpy as np
import pytest

from mishydro.fluxes import ConstantRelaxation
from mishydro.state import PrimState
from mishydro.thermo import get_eos


@pytest.fixture(scope="session")
def ideal_gas():
    return get_eos("ideal-gas")


@pytest.fixture(scope="session")
def unit_rest():
    """Rest state ``(eps, nu, C) = (1, 1, 0)``."""
    return PrimState.at_rest(1.0, 1.0, 0.0)


@pytest.fixture(scope="session")
def causal_rest():
    """Rest state ``(eps, nu, C) = (3, 1, 0)`` with subluminal sound."""
    return PrimState.at_rest(3.0, 1.0, 0.0)


@pytest.fixture
def relaxation():
    return ConstantRelaxation(tau=0.5)


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(12345))
