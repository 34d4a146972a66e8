"""Parameter sweeps over orbit height or squeezing, and the four figure presets."""

from __future__ import annotations

import enum
import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .channel import PipelineOptions, propagated_coherence
from .errors import DomainError, SweepError
from .spacetime import EARTH, BodyModel
from .wavepacket import GaussianWavepacket

GEO_HEIGHT_M = 3.6e7


class Axis(str, enum.Enum):
    HEIGHT = "height"
    SQUEEZING = "squeezing"


class OutputQuantity(str, enum.Enum):
    COHERENCE = "coherence"
    MU = "mu"
    DELTA = "delta"
    THETA = "theta"


@dataclass(frozen=True)
class AxisRange:
    start: float
    stop: float
    steps: int

    def __post_init__(self):
        if self.steps < 2:
            raise DomainError(f"a sweep needs at least 2 steps, got {self.steps}")
        if not self.start < self.stop:
            raise DomainError(f"sweep start {self.start} must be below stop {self.stop}")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)


@dataclass(frozen=True)
class SweepSpec:
    axis: Axis
    axis_range: AxisRange
    s: float = 1.0
    h_m: float = 0.0
    omega2_list: tuple[float, ...] = (1.0,)
    sigma_list: tuple[float, ...] = (1.0,)
    opts: PipelineOptions = field(default_factory=PipelineOptions)
    output_quantity: OutputQuantity = OutputQuantity.COHERENCE
    body: BodyModel = EARTH

    def __post_init__(self):
        object.__setattr__(self, "axis", Axis(self.axis))
        object.__setattr__(self, "output_quantity", OutputQuantity(self.output_quantity))
        object.__setattr__(self, "omega2_list", tuple(float(x) for x in self.omega2_list))
        object.__setattr__(self, "sigma_list", tuple(float(x) for x in self.sigma_list))
        if not self.omega2_list or not self.sigma_list:
            raise DomainError("omega2_list and sigma_list must be non-empty")

    @property
    def wants_mu(self) -> bool:
        return self.output_quantity is OutputQuantity.MU


@dataclass(frozen=True)
class SweepRow:
    h_m: float
    s: float
    omega2: float
    sigma: float
    delta: float
    theta2: float
    coherence_bits: float
    mu: float | None = None


def rate_of_change_mu(coherence_at_h: float, coherence_at_h0: float) -> float:
    """Relative change of coherence against its value at zero height."""
    if coherence_at_h0 == 0:
        raise ZeroDivisionError("baseline coherence is zero (unsqueezed input); mu is undefined")
    if coherence_at_h0 < 0:
        raise DomainError(f"baseline coherence must be positive, got {coherence_at_h0!r}")
    return (coherence_at_h - coherence_at_h0) / coherence_at_h0


def _grid(spec: SweepSpec) -> list[tuple[float, float, float, float]]:
    # axis-major, then omega2, then sigma
    points = []
    for x, omega2, sigma in itertools.product(spec.axis_range.values(), spec.omega2_list, spec.sigma_list):
        x = float(x)
        if spec.axis is Axis.HEIGHT:
            points.append((x, spec.s, omega2, sigma))
        else:
            points.append((spec.h_m, x, omega2, sigma))
    return points


def evaluate_point(
    body: BodyModel,
    opts: PipelineOptions,
    h: float,
    s: float,
    omega2: float,
    sigma: float,
    with_mu: bool = False,
) -> SweepRow:
    """One table row; ``mu`` compares against the same setup at zero height."""
    point = {"h_m": h, "s": s, "omega2": omega2, "sigma": sigma}
    try:
        wp = GaussianWavepacket(omega2, sigma)
        res = propagated_coherence(body, wp, s, h, opts)
        mu = None
        if with_mu:
            base = propagated_coherence(body, wp, s, 0.0, opts)
            mu = rate_of_change_mu(res.coherence, base.coherence)
    except (ArithmeticError, ValueError, RuntimeError) as exc:
        raise SweepError(point, str(exc)) from exc
    return SweepRow(h, s, omega2, sigma, res.delta, res.theta2, res.coherence, mu)


def _evaluate(args) -> SweepRow:
    body, opts, with_mu, (h, s, omega2, sigma) = args
    return evaluate_point(body, opts, h, s, omega2, sigma, with_mu)


def run_sweep(spec: SweepSpec, workers: int | None = 1) -> list[SweepRow]:
    """Evaluate every grid point; rows come back in grid order.

    ``workers`` > 1 spreads points over a process pool; ``None`` lets the
    pool pick.  Each point is computed by the same pure function either
    way, so serial and parallel results are bit-identical.
    """
    tasks = [(spec.body, spec.opts, spec.wants_mu, p) for p in _grid(spec)]
    if workers == 1:
        return [_evaluate(t) for t in tasks]
    n_workers = workers or os.cpu_count() or 1
    chunk = max(1, math.ceil(len(tasks) / (4 * n_workers)))
    with ProcessPoolExecutor(max_workers=n_workers) as pool:
        return list(pool.map(_evaluate, tasks, chunksize=chunk))


HEIGHT_AXIS = AxisRange(0.0, GEO_HEIGHT_M, 720)
SQUEEZING_AXIS = AxisRange(0.0, 3.0, 301)
_CURVES = (0.8, 1.0, 1.2)


def preset_figure(n: int) -> SweepSpec:
    """Parameters of figure ``n`` (1-4)."""
    if n == 1:
        return SweepSpec(Axis.SQUEEZING, SQUEEZING_AXIS, h_m=2e7, omega2_list=_CURVES, sigma_list=(1.0,))
    if n == 2:
        return SweepSpec(Axis.HEIGHT, HEIGHT_AXIS, s=1.0, omega2_list=(1.0,), sigma_list=_CURVES)
    if n == 3:
        return SweepSpec(Axis.HEIGHT, HEIGHT_AXIS, s=1.0, omega2_list=_CURVES, sigma_list=(1.0,))
    if n == 4:
        return SweepSpec(
            Axis.HEIGHT,
            HEIGHT_AXIS,
            s=1.0,
            omega2_list=_CURVES,
            sigma_list=(1.0,),
            output_quantity=OutputQuantity.MU,
        )
    raise DomainError(f"no preset for figure {n!r}; choose 1-4")


def curves(rows: list[SweepRow], key: str) -> dict[float, list[SweepRow]]:
    """Group rows into curves by ``key`` ("omega2" or "sigma"), keeping order."""
    out: dict[float, list[SweepRow]] = {}
    for row in rows:
        out.setdefault(getattr(row, key), []).append(row)
    return out
