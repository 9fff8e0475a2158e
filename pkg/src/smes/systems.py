"""Registry of built-in systems.

``adaptive-control``
    ``y' = a y + z``, ``k' = y^2``, ``eps z' = -z - k y``: an adaptive loop
    with parasitic actuator dynamics.  Its reduced model replaces ``z`` by
    the manifold ``z = -k y``.
``adaptive-control-reduced``
    That reduced model on its own (states ``y, k``).
``linear-block``
    Linear test system with blocks ``A11, A12, A21, A22``.
``scalar-sps``
    ``x' = a x + b z``, ``eps z' = c x + d z``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numba
import numpy as np

from .errors import ConfigError
from .model import OdeSystem, ReducedSystem
from .spectral import LinearSps
from .stability import ScalarSps


@numba.njit(cache=True)
def adaptive_kernel(x, u, t, p):
    a = p[0]
    eps = p[1]
    out = np.empty(3)
    out[0] = a * x[0] + x[2]
    out[1] = x[0] * x[0]
    out[2] = (-x[2] - x[1] * x[0]) / eps
    return out


@numba.njit(cache=True)
def adaptive_reduced_kernel(x, u, t, p):
    a = p[0]
    out = np.empty(2)
    out[0] = a * x[0] - x[1] * x[0]
    out[1] = x[0] * x[0]
    return out


@numba.njit(cache=True)
def linear_kernel(x, u, t, p):
    # p = [n, m, eps, row-major [[A11, A12], [A21, A22]]]
    n = int(p[0])
    dim = n + int(p[1])
    eps = p[2]
    out = np.empty(dim)
    for i in range(dim):
        acc = 0.0
        for j in range(dim):
            acc += p[3 + i * dim + j] * x[j]
        out[i] = acc / eps if i >= n else acc
    return out


@dataclass(frozen=True)
class BuiltSystem:
    """A registry build: the full system plus whatever analytic companions exist."""

    name: str
    params: dict
    system: OdeSystem
    initial_state: np.ndarray
    t_end: float
    reduced: Optional[ReducedSystem] = None
    linear: Optional[LinearSps] = None
    scalar: Optional[ScalarSps] = None


@dataclass(frozen=True)
class SystemSpecEntry:
    name: str
    parameters: dict
    builder: Callable[[dict], BuiltSystem] = field(repr=False)
    description: str = ""


def _adaptive_reduced(a: float) -> ReducedSystem:
    p = np.array([a])

    def slow_rhs(x, u, t):
        return adaptive_reduced_kernel(np.asarray(x, dtype=float), u, t, p)

    def manifold(x, u, t):
        return np.array([-x[1] * x[0]])

    return ReducedSystem("adaptive-control-reduced", 2, 1, slow_rhs, manifold, ("y", "k", "z"))


def _build_adaptive(params):
    a, eps = float(params["a"]), float(params["epsilon"])
    system = OdeSystem.from_kernel("adaptive-control", 2, 1, eps, adaptive_kernel,
                                   [a, eps], labels=("y", "k", "z"))
    return BuiltSystem("adaptive-control", params, system, np.array([0.0, 0.0, 1.0]), 5.0,
                       reduced=_adaptive_reduced(a))


def _build_adaptive_reduced(params):
    a = float(params["a"])
    # eps only labels the system here; the reduced model has no fast rows
    system = OdeSystem.from_kernel("adaptive-control-reduced", 2, 0, 1.0,
                                   adaptive_reduced_kernel, [a], labels=("y", "k"))
    return BuiltSystem("adaptive-control-reduced", params, system, np.array([0.0, 0.0]), 5.0,
                       reduced=_adaptive_reduced(a))


def linear_reduced(sps: LinearSps, name: str) -> ReducedSystem:
    a0 = sps.reduced_matrix()
    gain = sps.manifold_gain()

    def slow_rhs(x, u, t):
        return a0 @ np.asarray(x, dtype=float)

    def manifold(x, u, t):
        return gain @ np.asarray(x, dtype=float)

    return ReducedSystem(name, sps.n, sps.m, slow_rhs, manifold)


def linear_system(sps: LinearSps, name: str = "linear-block") -> OdeSystem:
    """OdeSystem whose rhs is ``[A11 x + A12 z, (A21 x + A22 z) / eps]``."""
    blocks = np.block([[sps.a11, sps.a12], [sps.a21, sps.a22]])
    params = np.concatenate([[sps.n, sps.m, sps.epsilon], blocks.ravel()])
    return OdeSystem.from_kernel(name, sps.n, sps.m, sps.epsilon, linear_kernel, params)


def _matrix_param(value, name):
    arr = np.atleast_2d(np.asarray(value, dtype=float))
    if arr.ndim != 2:
        raise ConfigError(f"parameter {name!r} must be a number or a matrix")
    return arr


def _build_linear(params):
    sps = LinearSps(*(_matrix_param(params[k], k) for k in ("a11", "a12", "a21", "a22")),
                    float(params["epsilon"]))
    x0 = np.ones(sps.n + sps.m)
    return BuiltSystem("linear-block", params, linear_system(sps), x0, 1.0,
                       reduced=linear_reduced(sps, "linear-block-reduced"), linear=sps)


def _build_scalar(params):
    a, b, c, d, eps = (float(params[k]) for k in ("a", "b", "c", "d", "epsilon"))
    scalar = ScalarSps(a, b, c, d, eps)
    sps = LinearSps([[a]], [[b]], [[c]], [[d]], eps)
    return BuiltSystem("scalar-sps", params, linear_system(sps, "scalar-sps"), np.array([1.0, 1.0]),
                       1.0, reduced=linear_reduced(sps, "scalar-sps-reduced"), linear=sps,
                       scalar=scalar)


REGISTRY = {
    entry.name: entry
    for entry in (
        SystemSpecEntry("adaptive-control", {"a": -1.0, "epsilon": 1e-6}, _build_adaptive,
                        "adaptive control loop with parasitic first-order actuator"),
        SystemSpecEntry("adaptive-control-reduced", {"a": -1.0}, _build_adaptive_reduced,
                        "quasi-steady-state adaptive loop (z = -k y)"),
        SystemSpecEntry("linear-block",
                        {"a11": -1.0, "a12": 1.0, "a21": 1.0, "a22": -2.0, "epsilon": 0.1},
                        _build_linear, "linear test system with matrix blocks"),
        SystemSpecEntry("scalar-sps",
                        {"a": -1.0, "b": 0.0, "c": 0.0, "d": -1.0, "epsilon": 0.01},
                        _build_scalar, "scalar linear test system"),
    )
}


def system_names() -> list:
    return sorted(REGISTRY)


def resolve_params(name: str, params: Optional[dict] = None) -> dict:
    if name not in REGISTRY:
        raise ConfigError(f"unknown system {name!r}; valid names: {', '.join(system_names())}")
    entry = REGISTRY[name]
    params = dict(params or {})
    unknown = sorted(set(params) - set(entry.parameters))
    if unknown:
        raise ConfigError(
            f"unknown parameter(s) {unknown} for {name!r}; valid: {sorted(entry.parameters)}"
        )
    return {**entry.parameters, **params}


def build_system(name: str, params: Optional[dict] = None) -> BuiltSystem:
    """Build a registered system, filling unspecified parameters with defaults."""
    full = resolve_params(name, params)
    try:
        return REGISTRY[name].builder(full)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad parameters for {name!r}: {exc}") from exc
