"""Error diagnostics for SMFE: fast residual, slow drift, reduced-model comparator."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ._loops import is_bad
from .errors import BlowUpError, ConfigError, DimensionError
from .model import InputSignal, ReducedSystem, Trajectory, input_at, step_count


@dataclass(frozen=True)
class ManifoldDiagnostics:
    times: np.ndarray
    distances: np.ndarray


def fast_residual_bound(eta0: float, delta: float, lambda_tilde_mag: float, epsilon: float) -> float:
    """Bound ``eps * eta0 / (delta |lt|)`` on the off-manifold component after the small steps."""
    denom = delta * lambda_tilde_mag
    if denom == 0:
        raise ConfigError("delta * |lambda_tilde| must be nonzero")
    return epsilon * eta0 / denom


def slow_drift(x0, slow_eigs: Sequence[complex], delta: float, n_small: int, epsilon: float) -> float:
    """First-order drift ``N delta eps max|lam_slow| ||x0||`` of the slow state over the small steps."""
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    if n_small == 0 or not len(slow_eigs):
        return 0.0
    lam = max(abs(complex(v)) for v in slow_eigs)
    return n_small * delta * epsilon * lam * float(np.linalg.norm(x0))


def reduced_fem_integrate(reduced: ReducedSystem, x0, step: float, t_end: float,
                          input: Optional[InputSignal] = None,
                          grid_step: Optional[float] = None) -> Trajectory:
    """Forward Euler on the reduced model, fast column rebuilt from the manifold.

    Each step advances the slow state by ``step``.  The record grid uses
    ``grid_step`` (default ``step``); passing ``grid_step=delta`` with
    ``step=delta*(1 - N*eps)`` gives the reduced-model comparator of an
    SMFE run on the macro grid.
    """
    if not step > 0:
        raise ConfigError(f"step must be positive, got {step!r}")
    grid = step if grid_step is None else grid_step
    steps = step_count(t_end, grid)
    x = np.array(x0, dtype=float).reshape(-1)
    if x.shape[0] != reduced.dim_slow:
        raise DimensionError(f"reduced state has length {x.shape[0]}, expected {reduced.dim_slow}")
    signal = input if input is not None else InputSignal.zero(0)
    n, m = reduced.dim_slow, reduced.dim_fast
    states = np.empty((steps + 1, n + m))
    times = np.arange(steps + 1) * grid
    for i in range(steps + 1):
        u = input_at(signal, times[i])
        states[i, :n] = x
        states[i, n:] = reduced.manifold(x, u, times[i])
        if i == steps:
            break
        x = x + step * np.asarray(reduced.slow_rhs(x, u, times[i]), dtype=float)
        if is_bad(x):
            raise BlowUpError(i, "reduced-fem")
    return Trajectory(times, states, steps, "reduced-fem", reduced.column_labels())


def manifold_distance(traj: Trajectory, reduced: ReducedSystem, slow_indices=None,
                      fast_indices=None, input: Optional[InputSignal] = None) -> ManifoldDiagnostics:
    """Euclidean distance ``||z - manifold(x)||`` at every sample of ``traj``."""
    dim = traj.states.shape[1]
    slow = list(range(reduced.dim_slow)) if slow_indices is None else list(slow_indices)
    fast = list(range(reduced.dim_slow, dim)) if fast_indices is None else list(fast_indices)
    if sorted(slow + fast) != list(range(dim)):
        raise DimensionError(f"indices {slow} and {fast} do not partition {dim} states")
    if len(slow) != reduced.dim_slow or len(fast) != reduced.dim_fast:
        raise DimensionError(
            f"expected {reduced.dim_slow} slow and {reduced.dim_fast} fast indices, "
            f"got {len(slow)} and {len(fast)}"
        )
    signal = input if input is not None else InputSignal.zero(0)
    dist = np.empty(len(traj))
    for i, (t, row) in enumerate(zip(traj.times, traj.states)):
        zbar = np.asarray(reduced.manifold(row[slow], input_at(signal, t), t), dtype=float)
        dist[i] = np.linalg.norm(row[fast] - zbar)
    return ManifoldDiagnostics(traj.times.copy(), dist)
