"""Forward Euler, the stabilized multirate Forward Euler (SMFE) scheme and RK4.

One SMFE macro step of length ``delta`` takes ``N`` Forward Euler steps of
length ``delta * eps`` followed by a single step of length
``(1 - N * eps) * delta``.  The input is sampled once at the start of the
macro step and held for all ``N + 1`` evaluations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numba
import numpy as np

from . import _loops
from .errors import BlowUpError, ConfigError, DimensionError
from .model import (
    InputSignal,
    IntegratorConfig,
    OdeSystem,
    Trajectory,
    check_small_steps,
    input_at,
    step_count,
)

_jit_fem = numba.njit(_loops.fem_loop)
_jit_smfe = numba.njit(_loops.smfe_loop)
_jit_rk4 = numba.njit(_loops.rk4_loop)
_jit_sample = numba.njit(_loops.sample_step_signal)


@dataclass(frozen=True)
class MacroStepReport:
    start_state: np.ndarray
    end_state: np.ndarray
    substep_states: Optional[list]
    evals: int


def _python_rhs(system):
    rhs = system.rhs

    def f(x, u, t, p):
        return np.asarray(rhs(x, u, t), dtype=float)

    return f


def _resolve_input(system: OdeSystem, signal: Optional[InputSignal]) -> InputSignal:
    if signal is None:
        return InputSignal.zero(system.input_dim)
    if system.input_dim and signal.dim != system.input_dim:
        raise DimensionError(
            f"{system.name}: input signal has length {signal.dim}, expected {system.input_dim}"
        )
    return signal


def _run(loop_name, system, signal, x0, *args):
    """Dispatch a stepping loop to numba or plain Python.

    The compiled path is taken when the system carries a kernel and the
    input is one of the piecewise-constant built-ins.
    """
    if system.kernel is not None and signal.piecewise_constant:
        loop = {"fem": _jit_fem, "smfe": _jit_smfe, "rk4": _jit_rk4}[loop_name]
        usig = (np.array(signal.before), np.array(signal.after), float(signal.switch_time))
        return loop(system.kernel, system.params, _jit_sample, usig, x0, *args)
    loop = {"fem": _loops.fem_loop, "smfe": _loops.smfe_loop, "rk4": _loops.rk4_loop}[loop_name]
    return loop(_python_rhs(system), None, input_at, signal, x0, *args)


def _initial(system, state):
    x0 = np.array(state, dtype=float)
    if x0.shape != (system.dim,):
        raise DimensionError(
            f"initial state has shape {x0.shape}, system {system.name!r} has {system.dim} states"
        )
    return x0


def fem_integrate(system: OdeSystem, config: IntegratorConfig,
                  input: Optional[InputSignal] = None) -> Trajectory:
    """Classical Forward Euler ``X_{k+1} = X_k + delta * F(X_k, u(k delta))``.

    ``config.n_small`` is ignored.  One right-hand-side evaluation per step.
    """
    signal = _resolve_input(system, input)
    config.check_against(system, use_small_steps=False)
    x0 = _initial(system, config.initial_state)
    steps = config.n_steps
    out_t, out_x = _loops.empty_output(_loops.record_rows(steps, config.record_every), system.dim)
    bad, _ = _run("fem", system, signal, x0, config.t_start, config.delta, steps,
                  config.record_every, out_t, out_x)
    if bad >= 0:
        raise BlowUpError(bad, "fem")
    return Trajectory(out_t, out_x, steps, "fem", system.column_labels())


def smfe_macro_step(system: OdeSystem, state, input_value, t_start: float,
                    delta: float, n_small: int, record_substeps: bool = True) -> MacroStepReport:
    """Advance ``state`` by one SMFE macro step of total length ``delta``."""
    check_small_steps(n_small, system.epsilon)
    if not delta > 0:
        raise ConfigError(f"delta must be positive, got {delta!r}")
    x = _initial(system, state)
    u = np.asarray(input_value, dtype=float).reshape(-1)
    start = x.copy()
    eps = system.epsilon
    h_small = delta * eps
    h_big = delta * (1.0 - n_small * eps)
    subs = [] if record_substeps else None
    for n in range(n_small):
        x = x + h_small * np.asarray(system.rhs(x, u, t_start + n * h_small), dtype=float)
        if _loops.is_bad(x):
            raise BlowUpError(0, "smfe", f"substep {n}")
        if subs is not None:
            subs.append(x.copy())
    x = x + h_big * np.asarray(system.rhs(x, u, t_start + n_small * h_small), dtype=float)
    if _loops.is_bad(x):
        raise BlowUpError(0, "smfe", "final step")
    return MacroStepReport(start, x, subs, n_small + 1)


def smfe_integrate(system: OdeSystem, config: IntegratorConfig,
                   input: Optional[InputSignal] = None) -> Trajectory:
    """Chain ``T / delta`` SMFE macro steps.

    Macro states are always recorded (thinned by ``record_every``); the
    ``N`` intermediate states of every macro step only when
    ``record_substeps`` is set.  ``eval_count = (N + 1) * T / delta``.
    """
    signal = _resolve_input(system, input)
    config.check_against(system)
    x0 = _initial(system, config.initial_state)
    steps = config.n_steps
    n = config.n_small
    if config.record_substeps:
        rows = 1 + steps * (n + 1)
    else:
        rows = _loops.record_rows(steps, config.record_every)
    out_t, out_x = _loops.empty_output(rows, system.dim)
    bad, sub = _run("smfe", system, signal, x0, config.t_start, config.delta, n,
                    system.epsilon, steps, config.record_every, config.record_substeps,
                    out_t, out_x)
    if bad >= 0:
        raise BlowUpError(bad, "smfe", f"substep {sub}" if sub < n else "final step")
    return Trajectory(out_t, out_x, (n + 1) * steps, "smfe", system.column_labels())


def linear_macro_matrix(A, delta: float, n_small: int, epsilon: float) -> np.ndarray:
    """SMFE iteration matrix ``(I + delta (1 - N eps) A) (I + delta eps A)^N``."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {A.shape}")
    check_small_steps(n_small, epsilon)
    eye = np.eye(A.shape[0])
    small = np.linalg.matrix_power(eye + (delta * epsilon) * A, n_small)
    return (eye + (delta * (1.0 - n_small * epsilon)) * A) @ small


def rk_reference_integrate(system: OdeSystem, t_end: float, step: float, initial_state,
                           input: Optional[InputSignal] = None, record_every: int = 1,
                           t_start: float = 0.0) -> Trajectory:
    """Classical fixed-step fourth-order Runge-Kutta.

    Used as the reference solution.  The caller picks ``step`` inside the
    stability region of the fastest mode; ``eps / 2`` is the usual choice.
    """
    signal = _resolve_input(system, input)
    x0 = _initial(system, initial_state)
    if int(record_every) != record_every or record_every < 1:
        raise ConfigError(f"record_every must be a positive integer, got {record_every!r}")
    steps = step_count(t_end, step)
    out_t, out_x = _loops.empty_output(_loops.record_rows(steps, record_every), system.dim)
    bad, _ = _run("rk4", system, signal, x0, float(t_start), float(step), steps,
                  int(record_every), out_t, out_x)
    if bad >= 0:
        raise BlowUpError(bad, "rk-ref")
    return Trajectory(out_t, out_x, 4 * steps, "rk-ref", system.column_labels())
