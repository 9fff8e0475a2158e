"""Trajectory comparison on a common time grid."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigError, DimensionError
from .model import Trajectory

# Slack on the coverage check, relative to the larger end time.
_COVER_RTOL = 1e-9


@dataclass(frozen=True)
class ComparisonResult:
    mse: float
    max_abs_error: float
    samples_used: int
    components: tuple


def _indices(traj: Trajectory, components) -> list:
    labels = traj.column_labels()
    out = []
    for c in components:
        if isinstance(c, str):
            if c not in labels:
                raise DimensionError(f"unknown component {c!r}; trajectory has {labels}")
            c = labels.index(c)
        if not 0 <= int(c) < traj.states.shape[1]:
            raise DimensionError(f"component index {c} out of range")
        out.append(int(c))
    return out


def align_and_mse(traj: Trajectory, reference: Trajectory,
                  components: Sequence = (0,)) -> ComparisonResult:
    """Mean squared error of ``traj`` against ``reference`` on ``traj``'s time grid.

    The reference is linearly interpolated onto ``traj.times``; the mean
    runs over every (sample, component) pair.  Components are indices or
    column labels.
    """
    idx = _indices(traj, components)
    ref_idx = _indices(reference, components)
    if not idx:
        raise ConfigError("no components selected")
    t = traj.times
    rt = reference.times
    slack = _COVER_RTOL * max(abs(t[-1]), abs(rt[-1]), 1.0)
    if rt[0] > t[0] + slack or rt[-1] < t[-1] - slack:
        raise ConfigError(
            f"reference covers [{rt[0]!r}, {rt[-1]!r}] but trajectory needs [{t[0]!r}, {t[-1]!r}]"
        )
    tq = np.clip(t, rt[0], rt[-1])
    diff = np.column_stack([
        traj.states[:, i] - np.interp(tq, rt, reference.states[:, j])
        for i, j in zip(idx, ref_idx)
    ])
    sq = diff * diff
    return ComparisonResult(
        mse=float(sq.mean()),
        max_abs_error=float(np.abs(diff).max()),
        samples_used=int(t.shape[0]),
        components=tuple(idx),
    )
