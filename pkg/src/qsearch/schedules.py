"""Interpolation schedules ``s(t)`` for ``H(s) = (1-s) H0 + s Hf``."""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import InvalidInputError

_SLACK = 1e-9


@dataclass(frozen=True)
class LocalAdiabaticSchedule:
    """Gap-adapted sweep: ``ds/dt = epsilon * g(s)^2``.

    Its closed form is

        t(s) = N / (2 eps sqrt(N-1)) [arctan(sqrt(N-1)(2s-1)) + arctan(sqrt(N-1))],

    with total duration ``N / (eps sqrt(N-1)) * arctan(sqrt(N-1))``.
    """

    N: float
    epsilon: float

    def __post_init__(self):
        if not float(self.N) >= 2.0:
            raise InvalidInputError(f"N must be >= 2, got {self.N}")
        if not 0.0 < self.epsilon < 1.0:
            raise InvalidInputError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        object.__setattr__(self, "N", float(self.N))
        object.__setattr__(self, "epsilon", float(self.epsilon))

    @property
    def _root(self):
        return math.sqrt(self.N - 1.0)

    @property
    def _scale(self):
        return self.N / (2.0 * self.epsilon * self._root)

    @property
    def total_time(self):
        return 2.0 * self._scale * math.atan(self._root)

    def t_of_s(self, s):
        if not 0.0 <= s <= 1.0:
            raise InvalidInputError(f"s must lie in [0, 1], got {s}")
        q = self._root
        return self._scale * (math.atan(q * (2.0 * s - 1.0)) + math.atan(q))

    def s_of_t(self, t):
        total = self.total_time
        if t < -_SLACK or t > total + _SLACK * max(1.0, total):
            raise InvalidInputError(f"t must lie in [0, {total}], got {t}")
        if t <= 0.0:
            return 0.0
        if t >= total:
            return 1.0
        q = self._root
        s = 0.5 + math.tan(t / self._scale - math.atan(q)) / (2.0 * q)
        return min(1.0, max(0.0, s))

    def __call__(self, t):
        return self.s_of_t(t)

    def kernel_params(self):
        return kernels.SCHEDULE_LOCAL, self.N, self.epsilon, self._root


@dataclass(frozen=True)
class LinearSchedule:
    """Global sweep ``s = t / T``."""

    total_time: float

    def __post_init__(self):
        if not self.total_time > 0:
            raise InvalidInputError(f"total_time must be positive, got {self.total_time}")

    def s_of_t(self, t):
        return min(1.0, max(0.0, t / self.total_time))

    def t_of_s(self, s):
        return s * self.total_time

    def __call__(self, t):
        return self.s_of_t(t)

    def kernel_params(self):
        return kernels.SCHEDULE_LINEAR, float(self.total_time), 0.0, 0.0


@dataclass(frozen=True)
class ConstantSchedule:
    """Frozen ``s = s0`` for ``total_time``."""

    s0: float
    total_time: float = math.inf

    def __post_init__(self):
        if not 0.0 <= self.s0 <= 1.0:
            raise InvalidInputError(f"s0 must lie in [0, 1], got {self.s0}")

    def s_of_t(self, t):
        return self.s0

    def __call__(self, t):
        return self.s0

    def kernel_params(self):
        return kernels.SCHEDULE_CONSTANT, float(self.s0), 0.0, 0.0


def staircase_points(sched, steps):
    """Step points ``(t_j, s_j)`` of the right-endpoint discretization.

    Returns ``(times, levels)`` of length ``steps + 1`` with ``times[j] = j T/R``,
    ``levels[0] = 0`` and ``levels[j] = s(t_j)``; the staircase holds
    ``levels[j]`` on ``(times[j-1], times[j]]``.
    """
    if steps < 1:
        raise InvalidInputError(f"steps must be >= 1, got {steps}")
    dT = sched.total_time / steps
    times = np.arange(steps + 1) * dT
    levels = np.array([0.0] + [sched.s_of_t(j * dT) for j in range(1, steps)] + [1.0])
    times[-1] = sched.total_time
    return times, levels


def staircase_value(times, levels, t):
    """Evaluate the staircase ``s'(t)`` built by :func:`staircase_points`."""
    if t <= times[0]:
        return float(levels[0])
    j = int(np.searchsorted(times, t, side="left"))
    return float(levels[min(j, len(levels) - 1)])
