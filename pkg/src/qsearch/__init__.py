"""Simulation of discrete, analog and local-adiabatic quantum search.

Three engines run the same step plans: a full statevector, a gate-level
circuit with one ancilla, and an exact two-level model on span{|s>, |m>}.
Hot loops are compiled with numba; set ``QSEARCH_DISABLE_JIT=1`` to use the
numpy versions instead.
"""

__version__ = "0.1.0"

from ._jit import BACKEND
from .errors import (
    CapacityError,
    ConvergenceError,
    InvalidInputError,
    InvalidParameterError,
    SubspaceViolationError,
)
from .execution import ENGINES, RunReport, execute_plan
from .plans import Algorithm, StepPlan, build_plan, predicted_angle
from .schedules import ConstantSchedule, LinearSchedule, LocalAdiabaticSchedule
from .statevector import OracleCounter, OracleSpec, PureState
from .twolevel import TwoLevelState

__all__ = [
    "BACKEND",
    "ENGINES",
    "Algorithm",
    "CapacityError",
    "ConstantSchedule",
    "ConvergenceError",
    "InvalidInputError",
    "InvalidParameterError",
    "LinearSchedule",
    "LocalAdiabaticSchedule",
    "OracleCounter",
    "OracleSpec",
    "PureState",
    "RunReport",
    "StepPlan",
    "SubspaceViolationError",
    "TwoLevelState",
    "build_plan",
    "execute_plan",
    "predicted_angle",
]
