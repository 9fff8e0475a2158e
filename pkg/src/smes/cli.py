"""``smes`` command line: simulate, analyze and benchmark.

Exit codes: 0 success, 2 configuration error, 3 numerical blow-up,
4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Optional

import numpy as np

from . import benchmark
from .config import RunConfig, parse_config
from .error_bounds import reduced_fem_integrate
from .errors import BlowUpError, ConfigError, SmesError
from .integrators import fem_integrate, rk_reference_integrate, smfe_integrate
from .model import IntegratorConfig, Trajectory
from .spectral import (
    block_triangularize,
    coupling_series_l,
    eigenvalues,
    refine_l,
    split_spectrum,
)
from .stability import (
    appendix_fem_delta,
    cost_estimate,
    deadbeat_delta,
    fem_max_delta,
    min_small_steps,
    scalar_eigenvalues,
    smfe_stable,
)

EXIT_OK, EXIT_CONFIG, EXIT_BLOWUP, EXIT_IO = 0, 2, 3, 4


def write_csv(traj: Trajectory, fh) -> None:
    """``t,<labels>`` header, 17 significant digits, LF line endings."""
    fh.write(",".join(["t"] + traj.column_labels()) + "\n")
    for t, row in zip(traj.times, traj.states):
        fh.write(",".join(f"{v:.17g}" for v in (t, *row)) + "\n")


def simulate(config: RunConfig) -> Trajectory:
    built = config.build()
    system = built.system
    signal = config.input_signal()
    x0 = np.array(config.initial_state)
    if config.method == "rk-ref":
        return rk_reference_integrate(system, config.t_end, config.delta_ref, x0, signal,
                                      record_every=config.record_every)
    if config.method == "reduced-fem":
        reduced = built.reduced
        if reduced is None:
            raise SmesError(f"system {config.system!r} has no reduced model")
        n_small = config.n_small or 0
        step = config.delta * (1.0 - n_small * system.epsilon)
        return reduced_fem_integrate(reduced, x0[:reduced.dim_slow], step, config.t_end, signal,
                                     grid_step=config.delta)
    cfg = IntegratorConfig(config.delta, config.t_end, x0, n_small=config.n_small or 0,
                           record_substeps=config.record_substeps,
                           record_every=config.record_every)
    if config.method == "fem":
        return fem_integrate(system, cfg, signal)
    return smfe_integrate(system, cfg, signal)


def run_simulate(config: RunConfig, out: Optional[str] = None, stdout=None) -> dict:
    """Integrate ``config`` and write the trajectory CSV.

    The CSV goes to ``out`` (or ``config.output_path``); with neither set it
    is written to ``stdout`` and the summary to stderr.
    """
    stdout = stdout or sys.stdout
    path = out or config.output_path
    t0 = time.perf_counter()
    traj = simulate(config)
    wall = time.perf_counter() - t0
    if path is None:
        write_csv(traj, stdout)
    else:
        with open(path, "w", newline="") as fh:
            write_csv(traj, fh)
    summary = {
        "system": config.system,
        "method": config.method,
        "eval_count": int(traj.eval_count),
        "rows": len(traj),
        "wall_seconds": round(wall, 6),
        "output": path,
    }
    print(json.dumps(summary), file=stdout if path is not None else sys.stderr)
    return summary


def _c(v):
    if v is None:
        return None
    v = complex(v)
    return {"re": v.real, "im": v.imag}


def _try(fn, *args):
    try:
        return fn(*args), None
    except SmesError as exc:
        return None, str(exc)


def analyze(config: RunConfig) -> dict:
    """Stability report for a linear-capable system."""
    built = config.build()
    sps = built.linear
    if sps is None:
        raise SmesError(
            f"analysis requires linear system or provided linearization; {config.system!r} is nonlinear"
        )
    if config.delta is None:
        raise ConfigError("analysis needs 'delta'")
    eps, delta = sps.epsilon, config.delta
    full = sps.full_matrix()
    eigs = eigenvalues(full)
    report = {
        "system": config.system,
        "params": config.params,
        "epsilon": eps,
        "n": sps.n,
        "m": sps.m,
        "delta": delta,
        "matrix": full.tolist(),
        "eigenvalues": [_c(v) for v in sorted(eigs, key=lambda v: (v.real, v.imag))],
    }
    report["fem_delta_max"], report["fem_delta_max_error"] = _try(fem_max_delta, eigs)

    split, split_error = _try(split_spectrum, eigs, eps, sps.n, sps.m)
    n_min = None
    if split is not None:
        report["split"] = {
            "slow": [_c(v) for v in split.slow_eigs],
            "fast": [_c(v) for v in split.fast_eigs],
            "lambda_hat_slow": _c(split.lambda_hat_slow),
            "lambda_hat_fast": _c(split.lambda_hat_fast),
            "lambda_tilde": _c(split.lambda_tilde),
        }
        if split.lambda_tilde is not None:
            n_min, report["n_min_error"] = _try(min_small_steps, split.lambda_tilde, delta, eps)
            report["deadbeat_delta"] = deadbeat_delta(split.lambda_tilde, split.slow_eigs)
    else:
        report["split_error"] = split_error
    report["n_min"] = n_min

    n_used = config.n_small if config.n_small is not None else n_min
    report["n_small"] = n_used
    if n_used is not None:
        stab, err = _try(smfe_stable, eigs, delta, n_used, eps)
        if stab is not None:
            report["smfe_condition_values"] = stab.smfe_condition_values
            report["smfe_stable"] = stab.stable
        else:
            report["smfe_error"] = err
        report["cost_estimate"], report["cost_error"] = _try(cost_estimate, delta, n_used,
                                                             config.t_end)

    series = coupling_series_l(sps)
    report["decoupling_series"] = {"L": series.l_matrix.tolist(),
                                   "residual_norm": series.residual_norm}
    exact, err = _try(refine_l, sps)
    if exact is not None:
        report["decoupling_exact"] = {"L": exact.l_matrix.tolist(),
                                      "residual_norm": exact.residual_norm,
                                      "iterations": exact.iterations}
        report["block_triangular"] = block_triangularize(sps, exact).tolist()
    else:
        report["decoupling_error"] = err

    if built.scalar is not None:
        sc = built.scalar
        report["scalar"] = {
            "eigenvalues": [_c(v) for v in scalar_eigenvalues(sc)],
            "appendix_fem_delta_printed": _try(appendix_fem_delta, sc, False)[0],
            "appendix_fem_delta_corrected": _try(appendix_fem_delta, sc, True)[0],
        }
    return {k: v for k, v in report.items() if not (k.endswith("_error") and v is None)}


def run_analyze(config: RunConfig, out: Optional[str] = None, stdout=None) -> dict:
    report = analyze(config)
    text = json.dumps(report, indent=2) + "\n"
    path = out or config.output_path
    if path is None:
        (stdout or sys.stdout).write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    return report


def run_benchmark(preset: str, output_path: Optional[str], stdout=None, quiet=False) -> list:
    progress = None if quiet else (lambda msg: print(msg, file=sys.stderr))
    rows = benchmark.run_benchmark(preset, output_path, progress)
    if output_path is None:
        (stdout or sys.stdout).write(benchmark.rows_to_csv(rows))
    return rows


def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smes",
        description="Stabilized multirate explicit simulation of singularly perturbed systems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("simulate", help="integrate a configured system and write a CSV trajectory")
    p.add_argument("--config", required=True, help="JSON configuration file ('-' for stdin)")
    p.add_argument("--out", help="CSV output path (overrides output_path)")
    p = sub.add_parser("analyze", help="stability report for a linear system")
    p.add_argument("--config", required=True, help="JSON configuration file ('-' for stdin)")
    p.add_argument("--out", help="JSON output path")
    p = sub.add_parser("benchmark", help="run a benchmark preset")
    p.add_argument("--preset", default="table1", choices=sorted(benchmark.PRESETS))
    p.add_argument("--out", help="CSV output path (stdout if omitted)")
    p.add_argument("--quiet", action="store_true", help="suppress progress messages")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "benchmark":
            run_benchmark(args.preset, args.out, quiet=args.quiet)
            return EXIT_OK
        config = parse_config(_read(args.config), analysis=args.command == "analyze")
        if args.command == "simulate":
            run_simulate(config, args.out)
        else:
            run_analyze(config, args.out)
    except BlowUpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BLOWUP
    except SmesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
