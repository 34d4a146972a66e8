"""Command-line front end.

Without ``--sweep`` or ``--preset`` a single point is evaluated.  Output is
CSV with the header ``h_m,s,omega2,sigma,delta,theta2,coherence_bits,mu``.
Exit status: 0 on success, 1 on a numerical/domain failure, 2 on bad usage.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import os
import re
import sys
from dataclasses import dataclass
from pathlib import Path

from .channel import PipelineOptions, Theta1Policy
from .errors import DomainError, SweepError
from .experiments import (
    Axis,
    AxisRange,
    OutputQuantity,
    SweepRow,
    SweepSpec,
    evaluate_point,
    preset_figure,
    run_sweep,
)
from .gaussian_core import NbarConvention
from .spacetime import EARTH, BodyModel, DeltaMode

HEADER = ("h_m", "s", "omega2", "sigma", "delta", "theta2", "coherence_bits", "mu")
MAX_SQUEEZING = 5.0

_NBAR = {"physical": NbarConvention.PHYSICAL, "verbatim": NbarConvention.PAPER_VERBATIM}
_THETA1 = {"unit": Theta1Policy.UNIT, "matched": Theta1Policy.SAME_AS_THETA2_AT_H0}
_PRESETS = {"fig1": 1, "fig2": 2, "fig3": 3, "fig4": 4}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    mass_geom: float = EARTH.mass_geom
    kerr_a: float = EARTH.kerr_a
    omega_geom: float = EARTH.omega_geom
    surface_radius: float = EARTH.surface_radius
    epsilon: int = EARTH.epsilon
    omega2: float = 1.0
    sigma: float = 1.0
    s: float = 1.0
    height_km: float = 0.0
    delta_mode: str = "perturbative"
    nbar: str = "physical"
    theta1: str = "unit"
    sweep: str | None = None
    preset: str | None = None
    mu: bool = False
    out: str | None = None
    digits: int = 12
    workers: int = 1

    @property
    def h_m(self) -> float:
        return self.height_km * 1e3

    def body(self) -> BodyModel:
        return BodyModel(self.mass_geom, self.kerr_a, self.omega_geom, self.surface_radius, self.epsilon)

    def options(self) -> PipelineOptions:
        return PipelineOptions(DeltaMode(self.delta_mode), _NBAR[self.nbar], _THETA1[self.theta1])


_FIELDS = {f.name: f for f in dataclasses.fields(RunConfig)}


def _line_of(text: str, key: str) -> int:
    m = re.search(r'"' + re.escape(key) + r'"\s*:', text)
    return text.count("\n", 0, m.start()) + 1 if m else 0


def load_config(path: str | Path) -> RunConfig:
    """Read a flat JSON object of RunConfig fields; unknown keys are errors."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    cfg = RunConfig()
    for key, value in data.items():
        if key not in _FIELDS:
            raise ConfigError(f"{path}:{_line_of(text, key)}: unknown key {key!r}")
        if isinstance(value, (dict, list)):
            raise ConfigError(f"{path}:{_line_of(text, key)}: {key!r} must be a scalar")
        setattr(cfg, key, value)
    return cfg


def _parse_sweep(text: str) -> tuple[Axis, AxisRange]:
    parts = text.split(":")
    if len(parts) != 4 or parts[0] not in ("h", "s"):
        raise ValueError(f"malformed sweep {text!r}; expected h:START_KM:STOP_KM:STEPS or s:START:STOP:STEPS")
    try:
        start, stop, steps = float(parts[1]), float(parts[2]), int(parts[3])
    except ValueError:
        raise ValueError(f"malformed sweep {text!r}; bounds must be numbers and STEPS an integer") from None
    if parts[0] == "h":
        if start < 0:
            raise ValueError("sweep heights must be non-negative")
        return Axis.HEIGHT, AxisRange(start * 1e3, stop * 1e3, steps)
    if start < 0 or stop > MAX_SQUEEZING:
        raise ValueError(f"squeezing sweep must stay within [0, {MAX_SQUEEZING}]")
    return Axis.SQUEEZING, AxisRange(start, stop, steps)


def _fmt(x: float | None, digits: int) -> str:
    if x is None:
        return ""
    if x == 0:
        return "0"
    return format(x, f".{digits}g")


def format_csv(rows: list[SweepRow], digits: int = 12) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(HEADER)
    for r in rows:
        writer.writerow(
            _fmt(v, digits) for v in (r.h_m, r.s, r.omega2, r.sigma, r.delta, r.theta2, r.coherence_bits, r.mu)
        )
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="satcoherence",
        description="Gaussian coherence of a squeezed pair with one photon sent to a satellite.",
    )
    p.add_argument("--s", type=float, help="two-mode squeezing parameter (default 1)")
    p.add_argument("--height-km", type=float, dest="height_km", help="satellite height above the surface")
    p.add_argument("--omega2", type=float, help="peak frequency in units of 500 THz")
    p.add_argument("--sigma", type=float, help="bandwidth in units of 1 MHz")
    p.add_argument("--sweep", help="h:START_KM:STOP_KM:STEPS or s:START:STOP:STEPS")
    p.add_argument("--preset", choices=sorted(_PRESETS))
    p.add_argument("--mu", action="store_true", default=None, help="fill the mu column")
    p.add_argument("--delta-mode", dest="delta_mode", choices=[m.value for m in DeltaMode])
    p.add_argument("--nbar", choices=sorted(_NBAR))
    p.add_argument("--theta1", choices=sorted(_THETA1))
    p.add_argument("--config", help="flat JSON file of defaults; flags override it")
    p.add_argument("--out", help="write CSV here instead of stdout")
    p.add_argument("--digits", type=int, help="significant digits in the CSV (default 12)")
    p.add_argument("--workers", type=int, help="processes for sweeps (default 1)")
    return p


def resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    for name in _FIELDS:
        value = getattr(args, name, None)
        if value is not None:
            setattr(cfg, name, value)
    return cfg


def _validate(cfg: RunConfig):
    for name in ("s", "height_km", "omega2", "sigma"):
        value = getattr(cfg, name)
        if not isinstance(value, (int, float)) or not math.isfinite(value):
            raise ValueError(f"{name} must be a finite number")
    if cfg.height_km < 0:
        raise ValueError(f"height must be non-negative, got {cfg.height_km} km")
    if not 0 <= cfg.s <= MAX_SQUEEZING:
        raise ValueError(f"squeezing must lie in [0, {MAX_SQUEEZING}], got {cfg.s}")
    if cfg.omega2 <= 0 or cfg.sigma <= 0:
        raise ValueError("omega2 and sigma must be positive")
    if cfg.digits < 1 or cfg.digits > 17:
        raise ValueError("digits must lie in [1, 17]")
    if cfg.workers < 1:
        raise ValueError("workers must be at least 1")
    if cfg.delta_mode not in [m.value for m in DeltaMode]:
        raise ValueError(f"unknown delta mode {cfg.delta_mode!r}")
    if cfg.nbar not in _NBAR:
        raise ValueError(f"unknown nbar convention {cfg.nbar!r}")
    if cfg.theta1 not in _THETA1:
        raise ValueError(f"unknown theta1 policy {cfg.theta1!r}")
    if cfg.sweep and cfg.preset:
        raise ValueError("--sweep and --preset are mutually exclusive")
    if cfg.preset is not None and cfg.preset not in _PRESETS:
        raise ValueError(f"unknown preset {cfg.preset!r}")


def build_spec(cfg: RunConfig) -> SweepSpec:
    body, opts = cfg.body(), cfg.options()
    if cfg.preset:
        spec = preset_figure(_PRESETS[cfg.preset])
        return dataclasses.replace(spec, opts=opts, body=body)
    axis, rng = _parse_sweep(cfg.sweep)
    return SweepSpec(
        axis,
        rng,
        s=cfg.s,
        h_m=cfg.h_m,
        omega2_list=(cfg.omega2,),
        sigma_list=(cfg.sigma,),
        opts=opts,
        output_quantity=OutputQuantity.MU if cfg.mu else OutputQuantity.COHERENCE,
        body=body,
    )


def cmd_point(cfg: RunConfig) -> list[SweepRow]:
    return [evaluate_point(cfg.body(), cfg.options(), cfg.h_m, cfg.s, cfg.omega2, cfg.sigma, bool(cfg.mu))]


def cmd_sweep(cfg: RunConfig) -> list[SweepRow]:
    return run_sweep(build_spec(cfg), workers=cfg.workers)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        _validate(cfg)
        command = cmd_sweep if (cfg.sweep or cfg.preset) else cmd_point
        if command is cmd_sweep:
            build_spec(cfg)  # surface malformed sweeps as usage errors
        else:
            cfg.body()
    except (ValueError, TypeError) as exc:
        parser.error(str(exc))
    try:
        rows = command(cfg)
    except (SweepError, DomainError, ArithmeticError) as exc:
        print(f"satcoherence: error: {exc}", file=sys.stderr)
        return 1
    text = format_csv(rows, cfg.digits)
    if cfg.out:
        Path(cfg.out).write_text(text, encoding="utf-8", newline="")
    else:
        try:
            sys.stdout.write(text)
            sys.stdout.flush()
        except BrokenPipeError:
            # reader went away (e.g. `| head`); silence the interpreter's flush at exit
            os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
    return 0


if __name__ == "__main__":
    sys.exit(main())
