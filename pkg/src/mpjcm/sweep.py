"""Run engine behind the CLI: series, 2-D sweeps, presets and verification.

Output is deterministic: numbers are printed with 12 significant digits and a
fixed decimal point, sweep rows are computed independently and reassembled in
input order, so the bytes written do not depend on the worker-pool size.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace

import numpy as np

from . import __version__
from .config import SweepSpec
from .density import build_propagator
from .model import ModelParams, truncated_thermal
from .negativity import negativity, negativity_series
from .oracle import converged_propagator, negativity_brute

__all__ = ["run", "SweepError", "ENV_OUTPUT_DIR"]

ENV_OUTPUT_DIR = "MPJCM_OUTPUT_DIR"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY_FAILED = 2


class SweepError(RuntimeError):
    """Run-time failure that maps to the usage/config exit code."""


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _ordered_map(fn, items, workers: int):
    if workers <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=1))


def _resolve_output(spec: SweepSpec, default_name: str) -> str:
    if spec.output:
        return spec.output
    base = os.environ.get(ENV_OUTPUT_DIR, ".")
    return os.path.join(base, default_name)


def _write_text(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise SweepError(f"cannot write output file {path!r}: {exc}") from exc


def _param_header(params: ModelParams) -> list[str]:
    return [
        f"# delta = {_fmt(params.detuning)}",
        f"# g = {_fmt(params.coupling)}",
        f"# l = {params.transition_photons}",
        f"# p = {params.mode_halfwaves}",
        f"# cg = {_fmt(params.ground_weight)}",
        f"# motion = {'true' if params.motion_enabled else 'false'}",
        f"# m = {_fmt(params.mean_photons)}",
    ]


def _series_lines(spec: SweepSpec) -> list[str]:
    params = spec.params
    dist = truncated_thermal(params.mean_photons, spec.tail_eps, params.transition_photons)
    gt_over_pi = np.linspace(0.0, spec.gt_max_over_pi, spec.points)
    times = [float(v) * math.pi / params.coupling for v in gt_over_pi]
    series = negativity_series(times, params, dist)
    lines = ["# mode = series"]
    if spec.preset:
        lines.append(f"# preset = {spec.preset}")
    lines += _param_header(params)
    lines += [
        f"# gt_max_over_pi = {_fmt(spec.gt_max_over_pi)}",
        f"# points = {spec.points}",
        f"# tail_eps = {_fmt(spec.tail_eps)}",
        f"# n_max = {dist.n_max}",
        f"# version = {__version__}",
        "gt_over_pi,negativity",
    ]
    for x, value in zip(gt_over_pi, series.values):
        lines.append(f"{_fmt(float(x))},{_fmt(value)}")
    return lines


def _apply_sweep_value(params: ModelParams, name: str, value: float) -> ModelParams:
    if name == "cg":
        return replace(params, ground_weight=value)
    if name == "delta":
        return replace(params, detuning=value)
    if name == "m":
        return replace(params, mean_photons=value)
    if name == "l":
        return replace(params, transition_photons=int(value))
    if name == "p":
        return replace(params, mode_halfwaves=int(value))
    raise SweepError(f"unknown sweep parameter {name!r}")


def _sweep_row(task):
    params, name, value, times, tail_eps = task
    row_params = _apply_sweep_value(params, name, value)
    dist = truncated_thermal(
        row_params.mean_photons, tail_eps, row_params.transition_photons
    )
    series = negativity_series(times, row_params, dist)
    return dist.n_max, series.values


def _sweep2d_lines(spec: SweepSpec, workers: int) -> list[str]:
    params = spec.params
    gt_over_pi = np.linspace(0.0, spec.gt_max_over_pi, spec.points)
    times = [float(v) * math.pi / params.coupling for v in gt_over_pi]
    tasks = [
        (params, spec.sweep_param, value, times, spec.tail_eps)
        for value in spec.sweep_values
    ]
    rows = _ordered_map(_sweep_row, tasks, workers)
    lines = ["# mode = sweep2d"]
    if spec.preset:
        lines.append(f"# preset = {spec.preset}")
    lines += _param_header(params)
    lines += [
        f"# sweep_param = {spec.sweep_param}",
        f"# sweep_values = {','.join(_fmt(v) for v in spec.sweep_values)}",
        f"# gt_max_over_pi = {_fmt(spec.gt_max_over_pi)}",
        f"# points = {spec.points}",
        f"# tail_eps = {_fmt(spec.tail_eps)}",
        f"# n_max = {','.join(str(n_max) for n_max, _ in rows)}",
        f"# version = {__version__}",
        "sweep_value,gt_over_pi,negativity",
    ]
    for value, (_, row_values) in zip(spec.sweep_values, rows):
        for x, neg in zip(gt_over_pi, row_values):
            lines.append(f"{_fmt(value)},{_fmt(float(x))},{_fmt(neg)}")
    return lines


# -- verification -----------------------------------------------------------

VERIFY_DETUNINGS = (0.0, 1.0, 5.0)
VERIFY_MEANS = (0.5, 1.0, 2.0)
VERIFY_PHOTONS = (1, 2, 3)
VERIFY_HALFWAVES = (1, 3)
VERIFY_GROUND_WEIGHTS = (0.0, 0.2, 0.5, 1.0)
VERIFY_MOTION = (False, True)
VERIFY_TIME_COUNT = 20
NEGATIVITY_TOL = 1e-10
PROPAGATOR_TOL = 1e-6


def verification_combos():
    combos = []
    for delta in VERIFY_DETUNINGS:
        for mean in VERIFY_MEANS:
            for photons in VERIFY_PHOTONS:
                for halfwaves in VERIFY_HALFWAVES:
                    for cg in VERIFY_GROUND_WEIGHTS:
                        for motion in VERIFY_MOTION:
                            combos.append((delta, mean, photons, halfwaves, cg, motion))
    return combos


def verification_times():
    t_max = 4.0 * math.pi
    return [t_max * k / VERIFY_TIME_COUNT for k in range(1, VERIFY_TIME_COUNT + 1)]


def _verify_combo(task):
    (delta, mean, photons, halfwaves, cg, motion), tail_eps = task
    params = ModelParams(
        detuning=delta,
        transition_photons=photons,
        mode_halfwaves=halfwaves,
        motion_enabled=motion,
        mean_photons=mean,
        ground_weight=cg,
    )
    dist = truncated_thermal(mean, tail_eps, photons)
    worst = (0.0, 0.0)
    for t in verification_times():
        closed = negativity(t, params, dist)
        brute = negativity_brute(t, params, dist)
        err = abs(closed - brute)
        if err > worst[0]:
            worst = (err, t)
    return worst


def _combo_label(combo) -> str:
    delta, mean, photons, halfwaves, cg, motion = combo
    return (
        f"delta={_fmt(delta)} m={_fmt(mean)} l={photons} p={halfwaves} "
        f"cg={_fmt(cg)} motion={'on' if motion else 'off'}"
    )


def _propagator_deviation(params: ModelParams, t: float, field_dim: int) -> float:
    closed = build_propagator(t, params, field_dim)
    integrated, _ = converged_propagator(t, params, field_dim)
    return float(np.max(np.abs(closed - integrated)))


def build_verification_report(tail_eps: float, workers: int = 1):
    """Cross-check every closed-form result; returns (text lines, all-pass)."""
    combos = verification_combos()
    tasks = [(combo, tail_eps) for combo in combos]
    results = _ordered_map(_verify_combo, tasks, workers)
    worst_err, worst_combo, worst_t = -1.0, None, 0.0
    for combo, (err, t) in zip(combos, results):
        if err > worst_err:
            worst_err, worst_combo, worst_t = err, combo, t
    negativity_ok = worst_err <= NEGATIVITY_TOL

    lines = [
        "verification report",
        "===================",
        "",
        "[1] negativity: closed form vs partial-transpose eigensolver oracle",
        "    grid: delta {0,1,5} x m {0.5,1,2} x l {1,2,3} x p {1,3}"
        " x cg {0,0.2,0.5,1} x motion {off,on}",
        f"    times: {VERIFY_TIME_COUNT} in (0, 4pi]   combos: {len(combos)}"
        f"   points: {len(combos) * VERIFY_TIME_COUNT}",
        f"    max |closed - oracle| = {worst_err:.3e}",
        f"    worst case: {_combo_label(worst_combo)} gt={_fmt(worst_t)}",
        f"    tolerance {NEGATIVITY_TOL:.0e}: {'PASS' if negativity_ok else 'FAIL'}",
        "",
    ]

    t_check = 1.3
    dist = truncated_thermal(1.0, tail_eps, 2)
    static_ok = True
    lines.append("[2] propagator: closed form vs time-ordered integrator, static coupling")
    for delta in (0.0, 3.0):
        for photons in (1, 2):
            params = ModelParams(
                detuning=delta, transition_photons=photons, motion_enabled=False,
                mean_photons=1.0, ground_weight=0.2,
            )
            dev = _propagator_deviation(params, t_check, dist.n_max + photons + 1)
            static_ok = static_ok and dev <= PROPAGATOR_TOL
            lines.append(f"    delta={_fmt(delta)} l={photons}: max entry deviation {dev:.3e}")
    lines.append(f"    tolerance {PROPAGATOR_TOL:.0e}: {'PASS' if static_ok else 'FAIL'}")
    lines.append("")

    moving_ok = True
    lines.append("[3] propagator: closed form vs time-ordered integrator, moving atom on resonance")
    for photons in (1, 2):
        params = ModelParams(
            detuning=0.0, transition_photons=photons, mode_halfwaves=1,
            motion_enabled=True, mean_photons=1.0, ground_weight=0.2,
        )
        dev = _propagator_deviation(params, t_check, dist.n_max + photons + 1)
        moving_ok = moving_ok and dev <= PROPAGATOR_TOL
        lines.append(f"    l={photons}: max entry deviation {dev:.3e}")
    lines.append(f"    tolerance {PROPAGATOR_TOL:.0e}: {'PASS' if moving_ok else 'FAIL'}")
    lines.append("")

    lines.append("[4] diagnostic: moving atom with detuning (non-commuting regime, reported only)")
    for delta in (1.0, 5.0):
        params = ModelParams(
            detuning=delta, transition_photons=2, mode_halfwaves=1,
            motion_enabled=True, mean_photons=1.0, ground_weight=0.2,
        )
        dev = _propagator_deviation(params, t_check, dist.n_max + 3)
        lines.append(f"    delta={_fmt(delta)} l=2: max entry deviation {dev:.3e}")
    lines.append("")

    lines.append("[5] diagnostic: negativity at full mode periods for an even photon number")
    params = ModelParams(
        detuning=0.0, transition_photons=2, mode_halfwaves=1,
        motion_enabled=True, mean_photons=1.0, ground_weight=0.2,
    )
    dist2 = truncated_thermal(1.0, tail_eps, 2)
    for k in (1, 2):
        t = 2.0 * math.pi * k
        lines.append(f"    l=2 gt={_fmt(t)}: negativity {negativity(t, params, dist2):.6e}")
    lines.append("    (the envelope integral vanishes at full periods only for odd photon numbers)")
    lines.append("")

    all_ok = negativity_ok and static_ok and moving_ok
    lines.append(f"overall: {'PASS' if all_ok else 'FAIL'}")
    return lines, all_ok


def run(spec: SweepSpec, workers: int = 1) -> int:
    """Execute a validated spec; returns the process exit code."""
    if workers < 1:
        raise SweepError(f"workers must be >= 1, got {workers}")
    if spec.mode == "verify":
        lines, ok = build_verification_report(spec.tail_eps, workers=workers)
        text = "\n".join(lines) + "\n"
        print(text, end="")
        if spec.output:
            _write_text(spec.output, text)
        return EXIT_OK if ok else EXIT_VERIFY_FAILED
    if spec.mode == "series":
        lines = _series_lines(spec)
        default_name = f"{spec.preset}.csv" if spec.preset else "series.csv"
    elif spec.mode == "sweep2d":
        lines = _sweep2d_lines(spec, workers)
        default_name = f"{spec.preset}.csv" if spec.preset else "sweep2d.csv"
    else:
        raise SweepError(f"unsupported mode {spec.mode!r}")
    path = _resolve_output(spec, default_name)
    _write_text(path, "\n".join(lines) + "\n")
    return EXIT_OK
