"""Core data model: systems, inputs, integrator settings and trajectories.

A full system is stored in the unseparated form ``X' = F(X, u, eps, t)``.
The right-hand side already divides the fast rows by ``eps`` so the
integrators never need to know which rows are fast.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import ConfigError, DimensionError

# Ratio between the rounded step count and T/delta that is still accepted
# as commensurate.
COMMENSURATE_RTOL = 1e-9


def _frozen(values, name="vector") -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1:
        raise DimensionError(f"{name} must be one-dimensional, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


def step_count(t_end: float, delta: float) -> int:
    """Number of steps of length ``delta`` covering ``[0, t_end]``.

    Raises ConfigError when ``t_end`` is not an integer multiple of ``delta``
    to within a relative 1e-9.
    """
    if not delta > 0:
        raise ConfigError(f"step must be positive, got {delta!r}")
    if not t_end > 0:
        raise ConfigError(f"horizon must be positive, got {t_end!r}")
    steps = int(round(t_end / delta))
    if steps < 1:
        raise ConfigError(f"step {delta!r} is longer than the horizon {t_end!r}")
    if abs(steps * delta - t_end) > COMMENSURATE_RTOL * t_end:
        raise ConfigError(
            f"horizon {t_end!r} is not a multiple of the step {delta!r} "
            f"(T/delta = {t_end / delta!r})"
        )
    return steps


@dataclass(frozen=True)
class OdeSystem:
    """Evaluatable system ``X' = F(X, u, eps, t)`` with ``n`` slow and ``m`` fast states.

    ``rhs(state, input, t)`` returns the full derivative with the fast rows
    already divided by ``epsilon``.  Systems built from a numba-compiled
    ``kernel(state, input, t, params)`` also expose it, which lets the
    integrators run their loops in compiled code.
    """

    name: str
    dim_slow: int
    dim_fast: int
    epsilon: float
    rhs: Callable[[np.ndarray, np.ndarray, float], np.ndarray]
    input_dim: int = 0
    labels: Optional[tuple] = None
    kernel: Optional[Callable] = field(default=None, repr=False, compare=False)
    params: Optional[np.ndarray] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.dim_slow < 0 or self.dim_fast < 0 or self.dim_slow + self.dim_fast < 1:
            raise ConfigError(
                f"{self.name}: need dim_slow + dim_fast >= 1, got "
                f"({self.dim_slow}, {self.dim_fast})"
            )
        if not self.epsilon > 0:
            raise ConfigError(f"{self.name}: epsilon must be positive, got {self.epsilon!r}")
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))
            if len(self.labels) != self.dim:
                raise DimensionError(f"{self.name}: {len(self.labels)} labels for {self.dim} states")
        if self.params is not None:
            object.__setattr__(self, "params", _frozen(self.params, "params"))

    @classmethod
    def from_kernel(cls, name, dim_slow, dim_fast, epsilon, kernel, params, **kw):
        params = _frozen(params, "params")

        def rhs(state, u, t):
            return kernel(np.asarray(state, dtype=float), np.asarray(u, dtype=float), float(t), params)

        return cls(name, dim_slow, dim_fast, epsilon, rhs, kernel=kernel, params=params, **kw)

    @property
    def dim(self) -> int:
        return self.dim_slow + self.dim_fast

    @property
    def slow_indices(self) -> list:
        return list(range(self.dim_slow))

    @property
    def fast_indices(self) -> list:
        return list(range(self.dim_slow, self.dim))

    def column_labels(self) -> list:
        if self.labels is not None:
            return list(self.labels)
        return [f"x_{i}" for i in range(self.dim)]


@dataclass(frozen=True)
class ReducedSystem:
    """Quasi-steady-state model: slow dynamics plus the algebraic manifold.

    ``slow_rhs(x, u, t)`` gives the slow derivative with the fast state
    eliminated and ``manifold(x, u, t)`` gives the fast state ``z`` on the
    equilibrium manifold.
    """

    name: str
    dim_slow: int
    dim_fast: int
    slow_rhs: Callable[[np.ndarray, np.ndarray, float], np.ndarray]
    manifold: Callable[[np.ndarray, np.ndarray, float], np.ndarray]
    labels: Optional[tuple] = None

    def column_labels(self) -> list:
        if self.labels is not None:
            return list(self.labels)
        return [f"x_{i}" for i in range(self.dim_slow + self.dim_fast)]


_SIGNAL_KINDS = ("zero", "constant", "step", "custom")


@dataclass(frozen=True)
class InputSignal:
    """Piecewise-constant input ``u(t)``.

    The three built-in kinds are all represented as a step from ``before``
    to ``after`` at ``switch_time``; the switch is right-continuous, so
    ``value_at(switch_time)`` already returns ``after``.
    """

    kind: str
    before: np.ndarray
    after: np.ndarray
    switch_time: float = float("inf")
    func: Optional[Callable[[float], np.ndarray]] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in _SIGNAL_KINDS:
            raise ConfigError(f"unknown input kind {self.kind!r}; expected one of {_SIGNAL_KINDS}")
        before = _frozen(self.before, "input value")
        after = _frozen(self.after, "input value")
        if before.shape != after.shape:
            raise DimensionError("step input values must have equal length")
        object.__setattr__(self, "before", before)
        object.__setattr__(self, "after", after)

    @classmethod
    def zero(cls, dim: int = 1) -> "InputSignal":
        z = np.zeros(dim)
        return cls("zero", z, z)

    @classmethod
    def constant(cls, value) -> "InputSignal":
        return cls("constant", value, value)

    @classmethod
    def step(cls, before, after, switch_time: float) -> "InputSignal":
        return cls("step", before, after, float(switch_time))

    @classmethod
    def custom(cls, func: Callable[[float], np.ndarray], dim: int) -> "InputSignal":
        z = np.zeros(dim)
        return cls("custom", z, z, func=func)

    @property
    def dim(self) -> int:
        return self.before.shape[0]

    @property
    def piecewise_constant(self) -> bool:
        return self.kind != "custom"

    def value_at(self, t: float) -> np.ndarray:
        if self.func is not None:
            return np.asarray(self.func(t), dtype=float)
        return self.after if t >= self.switch_time else self.before


def input_at(signal: InputSignal, t: float) -> np.ndarray:
    """Value of ``signal`` at time ``t``."""
    return signal.value_at(t)


@dataclass(frozen=True)
class IntegratorConfig:
    """Macro step ``delta``, small-step count ``n_small`` and horizon ``t_end``.

    ``record_every`` keeps one macro state out of every ``record_every``
    (plus the final one); it exists so long runs such as the 5e6-step
    Forward Euler benchmark need not hold every state in memory.
    """

    delta: float
    t_end: float
    initial_state: np.ndarray
    n_small: int = 0
    record_substeps: bool = False
    record_every: int = 1
    t_start: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "initial_state", _frozen(self.initial_state, "initial_state"))
        if not self.delta > 0:
            raise ConfigError(f"delta must be positive, got {self.delta!r}")
        if not self.t_end > 0:
            raise ConfigError(f"t_end must be positive, got {self.t_end!r}")
        if self.delta > self.t_end * (1 + COMMENSURATE_RTOL):
            raise ConfigError(f"delta {self.delta!r} exceeds the horizon {self.t_end!r}")
        if int(self.n_small) != self.n_small or self.n_small < 0:
            raise ConfigError(f"n_small must be a non-negative integer, got {self.n_small!r}")
        object.__setattr__(self, "n_small", int(self.n_small))
        if int(self.record_every) != self.record_every or self.record_every < 1:
            raise ConfigError(f"record_every must be a positive integer, got {self.record_every!r}")
        object.__setattr__(self, "record_every", int(self.record_every))
        if self.record_substeps and self.record_every != 1:
            raise ConfigError("record_substeps requires record_every == 1")

    @property
    def n_steps(self) -> int:
        return step_count(self.t_end, self.delta)

    def check_against(self, system: OdeSystem, use_small_steps: bool = True) -> None:
        if self.initial_state.shape[0] != system.dim:
            raise DimensionError(
                f"initial state has length {self.initial_state.shape[0]}, "
                f"system {system.name!r} has {system.dim} states"
            )
        if use_small_steps:
            check_small_steps(self.n_small, system.epsilon)


def check_small_steps(n_small: int, epsilon: float) -> None:
    if n_small * epsilon >= 1:
        raise ConfigError(
            f"N*eps = {n_small}*{epsilon:g} = {n_small * epsilon:g} >= 1; "
            "the final step (1 - N*eps)*delta would not be positive"
        )


@dataclass(frozen=True)
class Trajectory:
    """Recorded states on a strictly increasing time grid."""

    times: np.ndarray
    states: np.ndarray
    eval_count: int
    method_tag: str
    labels: Optional[tuple] = None

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        states = np.asarray(self.states, dtype=float)
        if states.ndim != 2 or states.shape[0] != times.shape[0]:
            raise DimensionError(
                f"states shape {states.shape} does not match {times.shape[0]} time stamps"
            )
        if times.shape[0] > 1 and not np.all(np.diff(times) > 0):
            raise ConfigError("trajectory times must be strictly increasing")
        times.setflags(write=False)
        states.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", states)
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))

    def __len__(self):
        return self.times.shape[0]

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    def column_labels(self) -> list:
        if self.labels is not None:
            return list(self.labels)
        return [f"x_{i}" for i in range(self.states.shape[1])]

    def column(self, key) -> np.ndarray:
        if isinstance(key, str):
            key = self.column_labels().index(key)
        return self.states[:, key]


def eval_rhs(system: OdeSystem, state: Sequence[float], input=None, t: float = 0.0) -> np.ndarray:
    """Evaluate ``F(X, u, eps, t)`` for ``system`` with dimension checks."""
    x = np.asarray(state, dtype=float)
    if x.shape != (system.dim,):
        raise DimensionError(
            f"{system.name}: state has shape {x.shape}, expected ({system.dim},)"
        )
    u = np.zeros(system.input_dim) if input is None else np.asarray(input, dtype=float).reshape(-1)
    if system.input_dim and u.shape[0] != system.input_dim:
        raise DimensionError(
            f"{system.name}: input has length {u.shape[0]}, expected {system.input_dim}"
        )
    out = np.asarray(system.rhs(x, u, t), dtype=float)
    if out.shape != (system.dim,):
        raise DimensionError(
            f"{system.name}: rhs returned shape {out.shape}, expected ({system.dim},)"
        )
    return out
