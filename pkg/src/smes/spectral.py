"""Slow/fast decoupling and spectra of linear singularly perturbed systems.

For ``x' = A11 x + A12 z``, ``eps z' = A21 x + A22 z`` the change of
variables ``eta = z + L x`` block-triangularizes the system when ``L``
solves ``R(L) = A21 + eps L A11 - A22 L - eps L A12 L = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigError, ConvergenceError, DimensionError, SeparationError, UnsupportedSizeError

MAX_EIG_DIM = 64
_POLISH_SWEEPS = 5


def _block(values, name, rows=None, cols=None):
    arr = np.atleast_2d(np.array(values, dtype=float))
    if arr.ndim != 2:
        raise DimensionError(f"{name} must be a matrix, got shape {arr.shape}")
    if rows is not None and arr.shape[0] != rows:
        raise DimensionError(f"{name} has {arr.shape[0]} rows, expected {rows}")
    if cols is not None and arr.shape[1] != cols:
        raise DimensionError(f"{name} has {arr.shape[1]} columns, expected {cols}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class LinearSps:
    """Block matrices of the linear test system and its perturbation ``epsilon``."""

    a11: np.ndarray
    a12: np.ndarray
    a21: np.ndarray
    a22: np.ndarray
    epsilon: float

    def __post_init__(self):
        a11 = _block(self.a11, "a11")
        n = a11.shape[0]
        if a11.shape[1] != n:
            raise DimensionError(f"a11 must be square, got shape {a11.shape}")
        a22 = _block(self.a22, "a22")
        m = a22.shape[0]
        if a22.shape[1] != m:
            raise DimensionError(f"a22 must be square, got shape {a22.shape}")
        object.__setattr__(self, "a11", a11)
        object.__setattr__(self, "a22", a22)
        object.__setattr__(self, "a12", _block(self.a12, "a12", n, m))
        object.__setattr__(self, "a21", _block(self.a21, "a21", m, n))
        if not self.epsilon > 0:
            raise ConfigError(f"epsilon must be positive, got {self.epsilon!r}")
        if np.linalg.matrix_rank(a22) < m:
            raise ConfigError("a22 is singular; the fast subsystem has no isolated equilibrium")

    @property
    def n(self) -> int:
        return self.a11.shape[0]

    @property
    def m(self) -> int:
        return self.a22.shape[0]

    def full_matrix(self) -> np.ndarray:
        """``[[A11, A12], [A21/eps, A22/eps]]``, the matrix of ``X' = A X``."""
        return np.block([[self.a11, self.a12],
                         [self.a21 / self.epsilon, self.a22 / self.epsilon]])

    def reduced_matrix(self) -> np.ndarray:
        """``A0 = A11 - A12 A22^{-1} A21``."""
        return self.a11 - self.a12 @ np.linalg.solve(self.a22, self.a21)

    def manifold_gain(self) -> np.ndarray:
        """``-A22^{-1} A21``: the equilibrium manifold is ``z = gain @ x``."""
        return -np.linalg.solve(self.a22, self.a21)


@dataclass(frozen=True)
class DecouplingResult:
    l_matrix: np.ndarray
    residual_norm: float
    method: str
    iterations: int = 0


@dataclass(frozen=True)
class SpectralSplit:
    slow_eigs: list
    fast_eigs: list
    lambda_hat_slow: complex | None
    lambda_hat_fast: complex | None
    lambda_tilde: complex | None


def decoupling_residual(sys: LinearSps, L) -> np.ndarray:
    """``R(L) = A21 + eps L A11 - A22 L - eps L A12 L``."""
    L = np.asarray(L, dtype=float)
    eps = sys.epsilon
    return sys.a21 + eps * (L @ sys.a11) - sys.a22 @ L - eps * (L @ sys.a12 @ L)


def coupling_series_l(sys: LinearSps) -> DecouplingResult:
    """First-order series ``L = A22^{-1} A21 + eps A22^{-2} A21 A0``."""
    l0 = np.linalg.solve(sys.a22, sys.a21)
    l1 = np.linalg.solve(sys.a22, l0 @ sys.reduced_matrix())
    L = l0 + sys.epsilon * l1
    res = float(np.linalg.norm(decoupling_residual(sys, L)))
    return DecouplingResult(L, res, "series-order-1")


def refine_l(sys: LinearSps, tol: float = 1e-12, start: str = "series",
             max_iter: int = 200) -> DecouplingResult:
    """Solve ``R(L) = 0`` by the fixed point ``L <- A22^{-1}(A21 + eps L (A11 - A12 L))``.

    ``start`` is ``"series"`` (default) or ``"zero"``; ``tol`` bounds the
    Frobenius norm of the residual.
    """
    if start == "series":
        L = coupling_series_l(sys).l_matrix
    elif start == "zero":
        L = np.zeros((sys.m, sys.n))
    else:
        raise ConfigError(f"unknown starting guess {start!r}")
    eps = sys.epsilon

    def sweep(L):
        return np.linalg.solve(sys.a22, sys.a21 + eps * (L @ (sys.a11 - sys.a12 @ L)))

    for it in range(max_iter + 1):
        res = float(np.linalg.norm(decoupling_residual(sys, L)))
        if res <= tol:
            # polish down to the rounding floor; ``iterations`` counts sweeps to ``tol``
            for _ in range(_POLISH_SWEEPS):
                cand = sweep(L)
                cand_res = float(np.linalg.norm(decoupling_residual(sys, cand)))
                if not cand_res < res:
                    break
                L, res = cand, cand_res
            return DecouplingResult(L, res, "fixed-point", it)
        if not math.isfinite(res):
            break
        L = sweep(L)
    raise ConvergenceError(
        f"decoupling iteration did not reach residual {tol:g} in {max_iter} iterations "
        f"(last residual {res:g}); try a smaller epsilon or use coupling_series_l"
    )


def block_triangularize(sys: LinearSps, decoupling: DecouplingResult) -> np.ndarray:
    """Matrix of the system in ``(x, eta)`` coordinates with ``eta = z + L x``.

    ``[[A11 - A12 L, A12], [R(L)/eps, A22/eps + L A12]]``; the lower-left
    block vanishes only for an exact ``L``.
    """
    L = np.asarray(decoupling.l_matrix, dtype=float)
    if L.shape != (sys.m, sys.n):
        raise DimensionError(f"L has shape {L.shape}, expected {(sys.m, sys.n)}")
    return np.block([
        [sys.a11 - sys.a12 @ L, sys.a12],
        [decoupling_residual(sys, L) / sys.epsilon, sys.a22 / sys.epsilon + L @ sys.a12],
    ])


def eigenvalues(matrix) -> list:
    """All eigenvalues of a small dense real matrix, with multiplicity."""
    A = np.asarray(matrix, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {A.shape}")
    if A.shape[0] > MAX_EIG_DIM:
        raise UnsupportedSizeError(f"eigenvalues supports dimension <= {MAX_EIG_DIM}, got {A.shape[0]}")
    if A.shape[0] == 0:
        return []
    return [complex(v) for v in np.linalg.eigvals(A)]


def _argmin_real(values):
    if not values:
        return None
    return min(values, key=lambda v: (v.real, v.imag))


def split_spectrum(eigs: Sequence[complex], epsilon: float, n: int, m: int) -> SpectralSplit:
    """Classify eigenvalues as fast when ``|Re lambda| > 1/sqrt(eps)``.

    When one class is empty (``n == 0`` or ``m == 0``) every eigenvalue
    goes to the other class without thresholding.
    """
    eigs = [complex(v) for v in eigs]
    if len(eigs) != n + m:
        raise DimensionError(f"got {len(eigs)} eigenvalues for n + m = {n + m}")
    if m == 0:
        slow, fast = eigs, []
    elif n == 0:
        slow, fast = [], eigs
    else:
        threshold = 1.0 / math.sqrt(epsilon)
        fast = [v for v in eigs if abs(v.real) > threshold]
        slow = [v for v in eigs if abs(v.real) <= threshold]
        if len(slow) != n or len(fast) != m:
            raise SeparationError(
                f"time scales not separated at eps={epsilon:g}: {len(slow)} slow and "
                f"{len(fast)} fast eigenvalues (threshold |Re| = {threshold:g}), expected ({n}, {m})"
            )
    slow = sorted(slow, key=lambda v: (v.real, v.imag))
    fast = sorted(fast, key=lambda v: (v.real, v.imag))
    hat_fast = _argmin_real(fast)
    return SpectralSplit(
        slow_eigs=slow,
        fast_eigs=fast,
        lambda_hat_slow=_argmin_real(slow),
        lambda_hat_fast=hat_fast,
        lambda_tilde=None if hat_fast is None else epsilon * hat_fast,
    )
