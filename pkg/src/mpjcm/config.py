"""Run-specification parsing for the command-line front end.

Configuration documents are line-oriented ``key = value`` pairs with ``#``
comments.  Command-line flags carry the same key names and override file
values; presets pin the parameter sets of the standard figures and are
resolved here into a fully validated specification.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .model import ModelParams

__all__ = ["ConfigError", "SweepSpec", "parse_config", "PRESETS", "DEFAULT_TAIL_EPS"]

DEFAULT_TAIL_EPS = 1e-12
DEFAULT_GT_MAX_OVER_PI = 4.0
POINTS_PER_PI = 400

MODES = ("series", "sweep2d", "verify", "preset")
SWEEP_PARAMS = ("cg", "delta", "m", "l", "p")
VALID_KEYS = (
    "delta",
    "m",
    "l",
    "p",
    "cg",
    "motion",
    "gt_max_over_pi",
    "points",
    "tail_eps",
    "sweep_param",
    "sweep_values",
    "mode",
    "preset",
    "output",
)
PHYSICS_KEYS = ("delta", "m", "l", "p", "cg", "motion")

# Figure presets: fixed physical parameters of the standard parameter studies.
# Sweep grids beyond the pinned values are desk-scale choices recorded in the
# CSV headers.
PRESETS = {
    "fig1": dict(
        mode="sweep2d", delta=0.0, m=1.0, l=2, p=1, cg=0.2, motion=True,
        sweep_param="cg", sweep_values=tuple(round(0.1 * k, 1) for k in range(11)),
    ),
    "fig2a": dict(mode="series", delta=0.0, m=1.0, l=1, p=1, cg=0.2, motion=False),
    "fig2b": dict(mode="series", delta=0.0, m=1.0, l=1, p=1, cg=0.2, motion=True),
    "fig2c": dict(mode="series", delta=0.0, m=1.0, l=1, p=3, cg=0.2, motion=True),
    "fig3a": dict(
        mode="sweep2d", delta=0.0, m=1.0, l=2, p=1, cg=0.2, motion=False,
        sweep_param="delta", sweep_values=(0.0, 1.0, 2.0, 3.0, 4.0, 5.0),
    ),
    "fig3b": dict(
        mode="sweep2d", delta=0.0, m=1.0, l=2, p=1, cg=0.2, motion=True,
        sweep_param="delta", sweep_values=(0.0, 1.0, 2.0, 3.0, 4.0, 5.0),
    ),
    "fig4": dict(
        mode="sweep2d", delta=0.0, m=1.0, l=2, p=1, cg=0.2, motion=True,
        sweep_param="m", sweep_values=tuple(0.25 * k for k in range(9)),
    ),
    "fig5a": dict(mode="series", delta=0.0, m=1.0, l=1, p=1, cg=0.2, motion=True),
    "fig5b": dict(mode="series", delta=0.0, m=1.0, l=3, p=1, cg=0.2, motion=True),
    "fig5c": dict(mode="series", delta=0.0, m=1.0, l=8, p=1, cg=0.2, motion=True),
}


class ConfigError(ValueError):
    """Configuration problem, pointing at the offending line when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class SweepSpec:
    """Fully validated description of one run."""

    mode: str
    params: ModelParams | None
    gt_max_over_pi: float = DEFAULT_GT_MAX_OVER_PI
    points: int = POINTS_PER_PI * 4 + 1
    tail_eps: float = DEFAULT_TAIL_EPS
    sweep_param: str | None = None
    sweep_values: tuple[float, ...] = field(default=())
    preset: str | None = None
    output: str | None = None


def _parse_pairs(text: str) -> dict[str, tuple[str, int | None]]:
    entries: dict[str, tuple[str, int | None]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {line!r}", lineno)
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in VALID_KEYS:
            raise ConfigError(f"unknown key {key!r}", lineno)
        if not value:
            raise ConfigError(f"empty value for {key!r}", lineno)
        entries[key] = (value, lineno)
    return entries


def _fail(key: str, line: int | None, message: str):
    where = f"key {key!r}"
    raise ConfigError(f"{where}: {message}", line)


def _get_float(entries, key, line_default=None):
    value, line = entries[key]
    try:
        out = float(value)
    except ValueError:
        _fail(key, line, f"not a number: {value!r}")
    if not math.isfinite(out):
        _fail(key, line, f"value must be finite, got {value!r}")
    return out, line


def _get_int(entries, key):
    value, line = entries[key]
    try:
        out = int(value)
    except ValueError:
        _fail(key, line, f"not an integer: {value!r}")
    return out, line


def _get_bool(entries, key):
    value, line = entries[key]
    lowered = value.lower()
    if lowered in ("true", "on", "yes", "1"):
        return True, line
    if lowered in ("false", "off", "no", "0"):
        return False, line
    _fail(key, line, f"expected true/false, got {value!r}")


def _check_domain(key, value, line):
    if key == "cg" and not 0.0 <= value <= 1.0:
        _fail(key, line, f"must lie in [0, 1], got {value}")
    if key == "m" and value < 0:
        _fail(key, line, f"must be >= 0, got {value}")
    if key == "delta" and not math.isfinite(value):
        _fail(key, line, f"must be finite, got {value}")
    if key in ("l", "p") and value < 1:
        _fail(key, line, f"must be >= 1, got {value}")


def parse_config(text: str, overrides: dict | None = None) -> SweepSpec:
    """Parse a configuration document into a validated :class:`SweepSpec`.

    ``overrides`` holds command-line flag values (as strings, keyed like the
    file keys); they replace file values before validation.  Unknown keys,
    out-of-domain values and missing required keys all raise
    :class:`ConfigError` with the offending line number where one exists.
    """
    entries = _parse_pairs(text)
    for key, value in (overrides or {}).items():
        if key not in VALID_KEYS:
            raise ConfigError(f"unknown key {key!r}")
        entries[key] = (str(value), None)

    if "mode" not in entries:
        raise ConfigError("missing required key 'mode'")
    mode, mode_line = entries["mode"]
    if mode not in MODES:
        _fail("mode", mode_line, f"must be one of {', '.join(MODES)}; got {mode!r}")

    preset_name = None
    if mode == "preset":
        if "preset" not in entries:
            raise ConfigError("missing required key 'preset' for mode = preset")
        preset_name, preset_line = entries["preset"]
        if preset_name not in PRESETS:
            _fail(
                "preset", preset_line,
                f"unknown preset {preset_name!r}; valid: {', '.join(sorted(PRESETS))}",
            )
        resolved = PRESETS[preset_name]
        mode = resolved["mode"]
        for key in ("delta", "m", "l", "p", "cg", "motion", "sweep_param", "sweep_values"):
            if key in resolved and key not in entries:
                value = resolved[key]
                if key == "sweep_values":
                    value = ",".join(repr(v) for v in value)
                entries[key] = (str(value), None)

    if mode in ("series", "sweep2d"):
        missing = [key for key in PHYSICS_KEYS if key not in entries]
        if missing:
            raise ConfigError(f"missing required key(s): {', '.join(missing)}")

    params = None
    if all(key in entries for key in PHYSICS_KEYS):
        delta, d_line = _get_float(entries, "delta")
        _check_domain("delta", delta, d_line)
        mean, m_line = _get_float(entries, "m")
        _check_domain("m", mean, m_line)
        photons, l_line = _get_int(entries, "l")
        _check_domain("l", photons, l_line)
        halfwaves, p_line = _get_int(entries, "p")
        _check_domain("p", halfwaves, p_line)
        cg, cg_line = _get_float(entries, "cg")
        _check_domain("cg", cg, cg_line)
        motion, _ = _get_bool(entries, "motion")
        params = ModelParams(
            detuning=delta,
            transition_photons=photons,
            mode_halfwaves=halfwaves,
            motion_enabled=motion,
            mean_photons=mean,
            ground_weight=cg,
        )

    gt_max = DEFAULT_GT_MAX_OVER_PI
    if "gt_max_over_pi" in entries:
        gt_max, line = _get_float(entries, "gt_max_over_pi")
        if gt_max <= 0:
            _fail("gt_max_over_pi", line, f"must be positive, got {gt_max}")

    if "points" in entries:
        points, line = _get_int(entries, "points")
        if points < 2:
            _fail("points", line, f"must be >= 2, got {points}")
    else:
        points = int(round(POINTS_PER_PI * gt_max)) + 1

    tail_eps = DEFAULT_TAIL_EPS
    if "tail_eps" in entries:
        tail_eps, line = _get_float(entries, "tail_eps")
        if not 0.0 < tail_eps < 1.0:
            _fail("tail_eps", line, f"must lie in (0, 1), got {tail_eps}")

    sweep_param = None
    sweep_values: tuple[float, ...] = ()
    if mode == "sweep2d":
        for key in ("sweep_param", "sweep_values"):
            if key not in entries:
                raise ConfigError(f"missing required key '{key}' for mode = sweep2d")
        sweep_param, sp_line = entries["sweep_param"]
        if sweep_param not in SWEEP_PARAMS:
            _fail(
                "sweep_param", sp_line,
                f"must be one of {', '.join(SWEEP_PARAMS)}; got {sweep_param!r}",
            )
        raw_values, sv_line = entries["sweep_values"]
        values = []
        for item in raw_values.split(","):
            item = item.strip()
            try:
                value = float(item)
            except ValueError:
                _fail("sweep_values", sv_line, f"not a number: {item!r}")
            if not math.isfinite(value):
                _fail("sweep_values", sv_line, f"value must be finite, got {item!r}")
            if sweep_param in ("l", "p"):
                if value != int(value):
                    _fail("sweep_values", sv_line, f"{sweep_param} values must be integers, got {item!r}")
                _check_domain(sweep_param, int(value), sv_line)
            else:
                _check_domain(sweep_param, value, sv_line)
            values.append(value)
        if not values:
            _fail("sweep_values", sv_line, "at least one value required")
        sweep_values = tuple(values)

    output = entries["output"][0] if "output" in entries else None

    return SweepSpec(
        mode=mode,
        params=params,
        gt_max_over_pi=gt_max,
        points=points,
        tail_eps=tail_eps,
        sweep_param=sweep_param,
        sweep_values=sweep_values,
        preset=preset_name,
        output=output,
    )
