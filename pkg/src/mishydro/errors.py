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

Exceptions raised by mishydro.
"""

import numpy as np


class MisError(Exception):
    """Base class for all mishydro errors."""


class DomainError(MisError, ValueError):
    """A point lies outside the admissible field manifold.

    The message names the inequality that failed.
    """


class ConfigError(MisError, ValueError):
    """Malformed configuration file or command-line input."""


class SingularJacobianError(MisError):
    """A change of variables or Newton Jacobian degenerated."""


class RecoveryError(MisError):
    """Primitive recovery did not converge.

    Attributes
    ----------
    iterate : np.ndarray
        Last Newton iterate, primitive fields.
    residual : float
        Infinity norm of the last residual.
    cells : np.ndarray
        Indices of the cells which failed, for batched recovery.
    """

    def __init__(self, message, iterate=None, residual=np.nan, cells=None):
        super().__init__(message)
        self.iterate = iterate
        self.residual = residual
        self.cells = np.array([], dtype=int) if cells is None else np.asarray(cells)


class ChartInversionError(MisError):
    """The main field could not be inverted back to primitive fields."""


class PencilDegeneracyError(MisError):
    """The time-component potential Hessian is not definite."""


class StepError(MisError):
    """A solver step aborted.

    Attributes
    ----------
    cell : int
        First failing cell index.
    residual : float
        Recovery residual in that cell.
    """

    def __init__(self, message, cell=-1, residual=np.nan):
        super().__init__(message)
        self.cell = cell
        self.residual = residual
