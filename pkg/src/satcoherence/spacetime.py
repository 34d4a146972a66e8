"""Frequency shift between a ground station and an equatorial orbit in Kerr spacetime.

Lengths are in metres with G = c = 1 (mass and Kerr parameter as lengths,
angular velocity as an inverse length).  The exact ratio Omega_B/Omega_A
differs from one by ~1e-10 for Earth, so it is evaluated with
:mod:`decimal` at ``EXACT_DIGITS`` significant digits; each call opens its
own local context, which keeps the functions safe to call from threads.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from decimal import Decimal, localcontext

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, NoRootError

EXACT_DIGITS = 50

# CODATA/IAU values used by BodyModel.from_si
G_SI = 6.67430e-11
C_SI = 299_792_458.0


class DeltaMode(str, enum.Enum):
    EXACT = "exact"
    PERTURBATIVE = "perturbative"


class Normalization(str, enum.Enum):
    """Clock-rate normalisation of the ground station.

    ``METRIC`` is ``sqrt(-(g_tt + 2 g_tphi w + g_phiphi w^2))`` at the
    surface, i.e. ``1 - (2M/r)(1 - a w)^2 - (r^2 + a^2) w^2`` under the
    root.  ``PRINTED`` keeps the typeset variant
    ``1 - (2M/r)(1 + 2 a w) + (r^2 + a^2 - 2 M a^2 / r) w^2``, whose
    rotational term has the opposite sign and does not reproduce the
    perturbative expansion; it is kept only for comparison.
    """

    METRIC = "metric"
    PRINTED = "printed"


@dataclass(frozen=True)
class BodyModel:
    """Gravitating body in geometric units; defaults describe the Earth."""

    mass_geom: float = 4.435e-3  # GM/c^2 [m]
    kerr_a: float = 3.28  # J/(Mc) [m]
    omega_geom: float = 2.4326e-13  # omega/c [1/m]
    surface_radius: float = 6.371e6  # [m]
    epsilon: int = 1  # +1 co-rotating orbit, -1 counter-rotating

    def __post_init__(self):
        for name in ("mass_geom", "kerr_a", "omega_geom", "surface_radius"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite")
        if self.mass_geom < 0 or self.kerr_a < 0 or self.omega_geom < 0:
            raise DomainError("mass, Kerr parameter and angular velocity must be non-negative")
        if not 2 * self.mass_geom < self.surface_radius:
            raise DomainError("surface lies inside the Schwarzschild radius")
        if self.epsilon not in (1, -1):
            raise DomainError(f"epsilon must be +1 or -1, got {self.epsilon!r}")

    @classmethod
    def from_si(
        cls,
        mass_kg: float,
        angular_momentum: float,
        angular_velocity: float,
        radius_m: float,
        epsilon: int = 1,
    ) -> "BodyModel":
        """Build from SI mass [kg], J [kg m^2/s], omega [rad/s] and radius [m]."""
        return cls(
            mass_geom=G_SI * mass_kg / C_SI**2,
            kerr_a=angular_momentum / (mass_kg * C_SI) if mass_kg else 0.0,
            omega_geom=angular_velocity / C_SI,
            surface_radius=radius_m,
            epsilon=epsilon,
        )

    @property
    def schwarzschild_radius(self) -> float:
        return 2.0 * self.mass_geom

    @property
    def expansion_valid(self) -> bool:
        """Whether ``(r_A w)^2 > a w``, the regime of the perturbative shift."""
        w = self.omega_geom
        return (self.surface_radius * w) ** 2 > self.kerr_a * w


EARTH = BodyModel()


@dataclass(frozen=True)
class ShiftResult:
    ratio: float
    delta: float
    parts: dict[str, float] | None = None
    flags: tuple[str, ...] = field(default=())


def _dec(x: float) -> Decimal:
    return Decimal(float(x))


def _ratio_kerr(body: BodyModel, r_b: float, normalization: Normalization) -> Decimal:
    # Caller owns the decimal context.
    M, a, w = _dec(body.mass_geom), _dec(body.kerr_a), _dec(body.omega_geom)
    r_a, r_b = _dec(body.surface_radius), _dec(r_b)
    orbit = body.epsilon * (a / r_b) * (M / r_b).sqrt()
    denom_sq = 1 - 3 * M / r_b + 2 * orbit
    if denom_sq <= 0:
        raise DomainError(f"orbit radius {r_b} m is inside the photon-sphere regime")
    if normalization is Normalization.METRIC:
        ground_sq = 1 - 2 * M / r_a * (1 - a * w) ** 2 - (r_a * r_a + a * a) * w * w
    else:
        ground_sq = 1 - 2 * M / r_a * (1 + 2 * a * w) + (r_a * r_a + a * a - 2 * M * a * a / r_a) * w * w
    if ground_sq <= 0:
        raise DomainError("ground-station normalisation is not real (surface moves superluminally)")
    return (1 + orbit) * ground_sq.sqrt() / denom_sq.sqrt()


def _check_orbit(body: BodyModel, r_b: float):
    if not math.isfinite(r_b) or r_b <= 3 * body.mass_geom:
        raise DomainError(f"orbit radius must exceed 3M = {3 * body.mass_geom} m, got {r_b!r}")


def frequency_ratio_kerr(
    body: BodyModel,
    r_b: float,
    normalization: Normalization | str = Normalization.METRIC,
) -> Decimal:
    """Omega_B/Omega_A for a circular equatorial orbit at radius ``r_b``.

    Returned as a :class:`~decimal.Decimal` carrying ``EXACT_DIGITS``
    digits; converting to float throws away the interesting part.
    """
    _check_orbit(body, r_b)
    with localcontext() as ctx:
        ctx.prec = EXACT_DIGITS
        return +_ratio_kerr(body, r_b, Normalization(normalization))


def frequency_ratio_schwarzschild(body: BodyModel, r_b: float) -> Decimal:
    _check_orbit(body, r_b)
    with localcontext() as ctx:
        ctx.prec = EXACT_DIGITS
        M, r_a, r_b = _dec(body.mass_geom), _dec(body.surface_radius), _dec(r_b)
        return ((1 - 2 * M / r_a) / (1 - 3 * M / r_b)).sqrt()


def _check_height(h: float):
    if not math.isfinite(h) or h < 0:
        raise DomainError(f"height must be finite and non-negative, got {h!r}")


def delta_exact(
    body: BodyModel,
    h: float,
    normalization: Normalization | str = Normalization.METRIC,
) -> ShiftResult:
    """Shift parameter sqrt(Omega_B/Omega_A) - 1 from the full Kerr ratio."""
    _check_height(h)
    r_b = body.surface_radius + h
    _check_orbit(body, r_b)
    with localcontext() as ctx:
        ctx.prec = EXACT_DIGITS
        ratio = _ratio_kerr(body, r_b, Normalization(normalization))
        rho = ratio - 1
        # sqrt(1 + rho) - 1 without cancellation
        delta = rho / ((1 + rho).sqrt() + 1)
        return ShiftResult(ratio=float(ratio), delta=float(delta))


def delta_perturbative(body: BodyModel, h: float) -> ShiftResult:
    """Second-order expansion of the shift in r_S/r_A and r_A*omega.

    The result is the same for co- and counter-rotating orbits.  With
    ``omega == 0`` but ``a != 0`` the higher-order term is singular; it is
    set to zero and ``"delta_h_singular"`` is added to ``flags``.
    """
    _check_height(h)
    r_a, M, a, w = body.surface_radius, body.mass_geom, body.kerr_a, body.omega_geom
    r_s = 2.0 * M
    x = h / r_a
    spin = (r_a * w) ** 2 / 4.0
    flags = []
    delta_sch = (r_s / r_a) / 8.0 * (1.0 - 2.0 * x) / (1.0 + x)
    delta_rot = -spin
    if w == 0.0:
        delta_h = 0.0
        if a != 0.0:
            flags.append("delta_h_singular")
    else:
        delta_h = -spin * (0.75 * r_s / r_a - 4.0 * M * a / (w * r_a**3))
        if not body.expansion_valid:
            flags.append("expansion_invalid")
    delta = delta_sch + delta_rot + delta_h
    return ShiftResult(
        ratio=(1.0 + delta) ** 2,
        delta=delta,
        parts={"delta_sch": delta_sch, "delta_rot": delta_rot, "delta_h": delta_h},
        flags=tuple(flags),
    )


def shift(body: BodyModel, h: float, mode: DeltaMode | str = DeltaMode.PERTURBATIVE) -> ShiftResult:
    if DeltaMode(mode) is DeltaMode.EXACT:
        return delta_exact(body, h)
    return delta_perturbative(body, h)


def zero_shift_height(
    body: BodyModel,
    mode: DeltaMode | str = DeltaMode.PERTURBATIVE,
    h_max: float = 1e9,
) -> float:
    """Height where gravitational blue shift and orbital time dilation cancel."""
    mode = DeltaMode(mode)

    def f(h):
        return shift(body, h, mode).delta

    lo, hi = f(0.0), f(h_max)
    if lo == 0.0:
        return 0.0
    if not (lo > 0.0 > hi):
        raise NoRootError(f"shift does not change sign on [0, {h_max}] m (delta(0)={lo:.3e}, delta(h_max)={hi:.3e})")
    return brentq(f, 0.0, h_max, xtol=1e-9, rtol=4 * np.finfo(float).eps, maxiter=200)
