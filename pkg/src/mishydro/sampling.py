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

Reproducible state sampling.

All randomness derives from one 64-bit seed through numpy's counter-based
Philox generator, so samples agree across platforms and worker counts.
"""

import numpy as np

from .config import SamplingConfig


def make_rng(seed: int) -> np.random.Generator:
    """Philox generator for ``seed``."""
    return np.random.Generator(np.random.Philox(seed))


def spawn_rngs(seed: int, count: int) -> list:
    """Independent Philox generators, one per task, in task order."""
    children = np.random.SeedSequence(seed).spawn(count)
    return [np.random.Generator(np.random.Philox(child)) for child in children]


def sample_states(config: SamplingConfig, count: int, rng: np.random.Generator) -> np.ndarray:
    """Primitive states ``(u1, u2, u3, eps, nu, C)`` drawn from the box.

    Thermodynamic coordinates are uniform in their ranges. The spatial
    velocity has an isotropic direction and a magnitude uniform in
    ``[0, max_velocity]``.

    Returns
    -------
    np.ndarray
        Shape ``(count, 6)``.
    """
    out = np.empty((count, 6))
    direction = rng.normal(size=(count, 3))
    norms = np.linalg.norm(direction, axis=1, keepdims=True)
    direction = np.divide(direction, norms, out=np.zeros_like(direction), where=norms > 0)
    out[:, :3] = direction * rng.uniform(0.0, config.max_velocity, size=(count, 1))
    out[:, 3] = rng.uniform(*config.eps_range, size=count)
    out[:, 4] = rng.uniform(*config.nu_range, size=count)
    out[:, 5] = rng.uniform(*config.C_range, size=count)
    return out


def reference_state(config: SamplingConfig) -> np.ndarray:
    """The configured reference state at rest."""
    return np.array([0.0, 0.0, 0.0, *config.reference_state])
