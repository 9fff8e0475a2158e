"""Benchmark presets: iteration counts and MSE of FEM and SMFE runs.

The ``table1`` preset runs the adaptive-control system (``a = -1``,
``eps = 1e-6``, horizon ``[0, 5]``) with Forward Euler at ``delta = eps``
and SMFE at six ``(delta, N)`` pairs, and scores each run by the MSE of
``(y, z)`` against an RK4 reference at step ``eps / 2``.
"""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .integrators import fem_integrate, rk_reference_integrate, smfe_integrate
from .metrics import align_and_mse
from .model import IntegratorConfig
from .stability import cost_estimate
from .systems import build_system

COLUMNS = ("method", "delta", "n_small", "iterations", "published_iterations", "mse",
           "published_mse", "wall_seconds", "note")


@dataclass(frozen=True)
class BenchmarkPreset:
    name: str
    system: str
    params: dict
    initial_state: tuple
    t_end: float
    fem_delta: float
    # (delta, N, published iterations, published MSE)
    smfe_rows: tuple
    fem_published: tuple
    components: tuple = ("y", "z")
    sample_spacing: float = 0.01
    description: str = ""


_TABLE1_ROWS = (
    (0.2, 70, 1780, 8.29e-4),
    (0.2, 140, 3530, 8.26e-4),
    (0.2, 1120, 28000, 8.25e-4),
    (0.1, 140, 7050, 1.97e-4),
    (0.1, 1120, 56000, 1.96e-4),
    (0.01, 1120, 561000, 1.89e-6),
)

PRESETS = {
    "table1": BenchmarkPreset(
        "table1", "adaptive-control", {"a": -1.0, "epsilon": 1e-6}, (1.0, 0.0, 0.0), 5.0,
        1e-6, _TABLE1_ROWS, (5_000_000, 1.90e-14),
        description="initial (y, k, z) = (1, 0, 0)",
    ),
    "table1-printed-ic": BenchmarkPreset(
        "table1-printed-ic", "adaptive-control", {"a": -1.0, "epsilon": 1e-6}, (0.0, 0.0, 1.0),
        5.0, 1e-6, _TABLE1_ROWS, (5_000_000, 1.90e-14),
        description="initial (y, k, z) = (0, 0, 1)",
    ),
}


def _stride(spacing, step):
    stride = int(round(spacing / step))
    if stride < 1 or abs(stride * step - spacing) > 1e-9 * spacing:
        raise ConfigError(f"sample spacing {spacing!r} is not a multiple of step {step!r}")
    return stride


def _iteration_note(iterations, published):
    if published is None or iterations == published:
        return ""
    rel = abs(iterations - published) / published
    return f"published table prints {published} iterations ({rel:.2%} off the (N+1)*T/delta count)"


def run_preset(name: str, progress=None) -> list:
    """Run every row of a preset and return one dict per row (keys ``COLUMNS``)."""
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; valid presets: {', '.join(sorted(PRESETS))}")
    preset = PRESETS[name]
    built = build_system(preset.system, preset.params)
    system = built.system
    x0 = np.array(preset.initial_state)
    eps = system.epsilon

    h_ref = eps / 2
    t0 = time.perf_counter()
    reference = rk_reference_integrate(system, preset.t_end, h_ref, x0,
                                       record_every=_stride(preset.sample_spacing, h_ref))
    if progress:
        progress(f"reference rk4 step={h_ref:g}: {reference.eval_count} evals, "
                 f"{time.perf_counter() - t0:.1f}s")

    rows = []
    cfg = IntegratorConfig(preset.fem_delta, preset.t_end, x0,
                           record_every=_stride(preset.sample_spacing, preset.fem_delta))
    t0 = time.perf_counter()
    traj = fem_integrate(system, cfg)
    wall = time.perf_counter() - t0
    cmp = align_and_mse(traj, reference, preset.components)
    published_iter, published_mse = preset.fem_published
    notes = [f"sampled every {preset.sample_spacing:g} time units"]
    if traj.eval_count != published_iter:
        notes.append(_iteration_note(traj.eval_count, published_iter))
    rows.append(dict(method="fem", delta=preset.fem_delta, n_small=0,
                     iterations=traj.eval_count, published_iterations=published_iter, mse=cmp.mse,
                     published_mse=published_mse, wall_seconds=wall, note="; ".join(notes)))
    if progress:
        progress(f"fem delta={preset.fem_delta:g}: mse={cmp.mse:.3e}, {wall:.1f}s")

    for delta, n_small, published_iter, published_mse in preset.smfe_rows:
        cfg = IntegratorConfig(delta, preset.t_end, x0, n_small=n_small)
        t0 = time.perf_counter()
        traj = smfe_integrate(system, cfg)
        wall = time.perf_counter() - t0
        assert traj.eval_count == cost_estimate(delta, n_small, preset.t_end)
        cmp = align_and_mse(traj, reference, preset.components)
        rows.append(dict(method="smfe", delta=delta, n_small=n_small,
                         iterations=traj.eval_count, published_iterations=published_iter, mse=cmp.mse,
                         published_mse=published_mse, wall_seconds=wall,
                         note=_iteration_note(traj.eval_count, published_iter)))
        if progress:
            progress(f"smfe({delta:g}, {n_small}): iterations={traj.eval_count}, mse={cmp.mse:.3e}")
    return rows


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        out = dict(row)
        out["delta"] = repr(float(row["delta"]))
        out["published_mse"] = repr(float(row["published_mse"]))
        out["mse"] = f"{row['mse']:.17g}"
        out["wall_seconds"] = f"{row['wall_seconds']:.3f}"
        writer.writerow(out)
    return buf.getvalue()


def run_benchmark(preset: str, output_path=None, progress=None) -> list:
    """Run ``preset`` and write its table as CSV to ``output_path`` (if given)."""
    rows = run_preset(preset, progress)
    if output_path is not None:
        with open(output_path, "w", newline="") as fh:
            fh.write(rows_to_csv(rows))
    return rows
