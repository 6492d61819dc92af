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

Configuration files.

Configurations are nested key-value text files read with configobj::

    [eos]
    name = ideal-gas
    c_v = 1.5

    [sampling]
    eps_range = 3.0, 4.0

    [simulation]
    tau = 0.1
    cells = 400

Each section maps onto a ``param.Parameterized`` class and values are
coerced according to the declared parameter type. Unknown sections and
keys are rejected.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path

import configobj
import param

from .errors import ConfigError
from .solver import SimConfig
from .thermo import EquationOfState, get_eos

logger = logging.getLogger(__name__)


class SamplingConfig(param.Parameterized):
    """Box from which admissible states are drawn.

    Attributes
    ----------
    eps_range, nu_range, C_range : param.Range
        Closed intervals for the thermodynamic coordinates.
    max_velocity : param.Number
        Largest magnitude of the spatial four-velocity.
    covectors : param.Integer
        Random timelike covectors tested per state by the speeds audit.
    reference_state : param.NumericTuple
        ``(eps, nu, C)`` of the rest state reported first by the speeds audit.
    """

    eps_range = param.Range(default=(3.0, 4.0), bounds=(0, None))
    nu_range = param.Range(default=(0.8, 1.1), bounds=(0, None))
    C_range = param.Range(default=(-0.2, 0.2))
    max_velocity = param.Number(default=0.5, bounds=(0, 1e6))
    covectors = param.Integer(default=20, bounds=(0, None))
    reference_state = param.NumericTuple(default=(3.0, 1.0, 0.0), length=3)


class HugoniotConfig(param.Parameterized):
    """Hugoniot locus continuation settings.

    ``left_state`` is ``(u1, u2, u3, eps, nu, C)``.
    """

    left_state = param.NumericTuple(default=(0.0, 0.0, 0.0, 3.0, 1.0, 0.0), length=6)
    families = param.List(default=[1, 6], item_type=int)
    branches = param.List(default=[-1, 1], item_type=int)
    steps = param.Integer(default=200, bounds=(1, None))
    step_size = param.Number(default=1e-3, bounds=(0, None), inclusive_bounds=(False, True))
    weak_threshold = param.Number(default=0.1, bounds=(0, None))
    fit_window = param.Range(default=(1e-3, 1e-1), bounds=(0, None))


class RunSettings(param.Parameterized):
    """Batch settings shared by the commands.

    ``jobs`` is a worker count, or -1 for every core.
    """

    seed = param.Integer(default=0, bounds=(0, 2**64 - 1))
    samples = param.Integer(default=1000, bounds=(0, None))
    jobs = param.Integer(default=1, bounds=(-1, None))

    def __init__(self, **params):
        super().__init__(**params)
        if self.jobs == 0:
            raise ValueError("jobs must be a positive worker count or -1, got 0.")


SECTIONS = {
    "sampling": SamplingConfig,
    "simulation": SimConfig,
    "hugoniot": HugoniotConfig,
    "run": RunSettings,
}
# set from [eos] rather than [simulation]
DERIVED_KEYS = {"simulation": ("eos", "eos_parameters")}


def _coerce(section: configobj.Section, key: str, parameter: param.Parameter):
    if isinstance(parameter, param.Boolean):
        return section.as_bool(key)
    if isinstance(parameter, param.Integer):
        return section.as_int(key)
    if isinstance(parameter, param.Number):
        return section.as_float(key)
    if isinstance(parameter, (param.NumericTuple, param.Range)):
        return tuple(float(v) for v in section.as_list(key))
    if isinstance(parameter, param.List):
        item_type = parameter.item_type or str
        return [item_type(v) for v in section.as_list(key)]
    return str(section[key])


def build_section(cls: type, section: configobj.Section | None, name: str, **fixed):
    """Instantiate ``cls`` from a config section.

    Raises
    ------
    ConfigError
        On unknown keys, uncoercible values or parameter bound violations.
    """
    values = dict(fixed)
    if section is not None:
        known = set(cls.param) - {"name"} - set(DERIVED_KEYS.get(name, ()))
        for key in section.scalars:
            if key not in known:
                raise ConfigError(f"Unknown key '{key}' in section [{name}].")
            try:
                values[key] = _coerce(section, key, cls.param[key])
            except (ValueError, TypeError, configobj.ConfigObjError) as e:
                raise ConfigError(f"Invalid value for '{key}' in [{name}]: {e}") from e
        if section.sections:
            raise ConfigError(f"Unexpected subsection(s) {section.sections} in [{name}].")
    try:
        return cls(**values)
    except (ValueError, TypeError) as e:
        raise ConfigError(f"Invalid [{name}] settings: {e}") from e


def _eos_settings(section: configobj.Section | None) -> tuple:
    if section is None:
        return "ideal-gas", {}
    name = str(section.get("name", "ideal-gas"))
    parameters = {}
    for key in section.scalars:
        if key == "name":
            continue
        try:
            parameters[key] = section.as_float(key)
        except ValueError as e:
            raise ConfigError(f"EOS parameter '{key}' must be a number.") from e
    try:
        get_eos(name, **parameters)
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"Invalid [eos] settings: {e}") from e
    return name, parameters


@dataclass
class Configuration:
    """Validated content of a configuration file."""

    eos_name: str = "ideal-gas"
    eos_parameters: dict = field(default_factory=dict)
    sampling: SamplingConfig = field(default_factory=SamplingConfig)
    simulation: SimConfig = field(default_factory=SimConfig)
    hugoniot: HugoniotConfig = field(default_factory=HugoniotConfig)
    run: RunSettings = field(default_factory=RunSettings)

    def make_eos(self) -> EquationOfState:
        return get_eos(self.eos_name, **self.eos_parameters)

    def echo(self) -> dict:
        """Plain nested dict of every setting, for manifests."""
        out = {"eos": {"name": self.eos_name, **self.eos_parameters}}
        for name in SECTIONS:
            values = dict(getattr(self, name).param.values())
            values.pop("name", None)
            for key in DERIVED_KEYS.get(name, ()):
                values.pop(key, None)
            out[name] = {
                k: list(v) if isinstance(v, tuple) else v for k, v in values.items()
            }
        return out


def load_config(path=None, overrides: dict | None = None) -> Configuration:
    """Read and validate a configuration file.

    Parameters
    ----------
    path : str or Path, optional
        Config file; defaults apply when omitted.
    overrides : dict, optional
        ``{section: {key: value}}`` applied after the file, e.g. from
        command-line flags.

    Raises
    ------
    ConfigError
        If the file is missing, malformed, or contains unknown or invalid
        settings.
    """
    if path is None:
        parsed = configobj.ConfigObj()
    else:
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"Config file not found: {path}")
        try:
            parsed = configobj.ConfigObj(str(path), file_error=True, raise_errors=True)
        except (configobj.ConfigObjError, OSError) as e:
            raise ConfigError(f"Malformed config file {path}: {e}") from e
    if parsed.scalars:
        raise ConfigError(f"Settings outside a section: {parsed.scalars}")
    unknown = set(parsed.sections) - set(SECTIONS) - {"eos"}
    if unknown:
        raise ConfigError(f"Unknown section(s): {sorted(unknown)}")

    for section, values in (overrides or {}).items():
        parsed.setdefault(section, {})
        for key, value in values.items():
            if value is not None:
                parsed[section][key] = str(value)

    eos_name, eos_parameters = _eos_settings(parsed.get("eos"))
    configuration = Configuration(
        eos_name=eos_name,
        eos_parameters=eos_parameters,
        sampling=build_section(SamplingConfig, parsed.get("sampling"), "sampling"),
        simulation=build_section(
            SimConfig, parsed.get("simulation"), "simulation",
            eos=eos_name, eos_parameters=eos_parameters,
        ),
        hugoniot=build_section(HugoniotConfig, parsed.get("hugoniot"), "hugoniot"),
        run=build_section(RunSettings, parsed.get("run"), "run"),
    )
    logger.debug("Loaded configuration from %s", path or "defaults")
    return configuration
