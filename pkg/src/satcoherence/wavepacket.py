"""Overlap between the sent and received Gaussian frequency distributions.

The received distribution is the sent one with every frequency scaled by
``1 + delta`` and the amplitude rescaled to keep it normalised::

    F_B(W) = F(W / (1 + delta)) / sqrt(1 + delta)

With ``F`` Gaussian and the integral extended over the whole real line the
overlap is

    Theta = sqrt(2(1+d) / (1 + (1+d)^2)) * exp(-d^2 R^2 / (4 (1 + (1+d)^2)))

where ``R`` is peak frequency over bandwidth.  ``prefactor="printed"``
selects ``sqrt(2/(1+(1+d)^2)) / (1+d)`` in front of the same exponential;
that variant is not the overlap of normalised packets and exceeds one for
small negative ``d``, so it is only used for literal reproduction.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

from scipy.integrate import IntegrationWarning, quad

from .errors import DomainError, QuadratureError

PEAK_UNIT_HZ = 500e12
BANDWIDTH_UNIT_HZ = 1e6


class Prefactor(str, enum.Enum):
    NORMALIZED = "normalized"
    PRINTED = "printed"


@dataclass(frozen=True)
class GaussianWavepacket:
    """Peak frequency and bandwidth in units of ``freq_unit`` and ``bw_unit``."""

    omega_peak: float = 1.0
    bandwidth: float = 1.0
    freq_unit: float = PEAK_UNIT_HZ
    bw_unit: float = BANDWIDTH_UNIT_HZ

    def __post_init__(self):
        for name in ("omega_peak", "bandwidth", "freq_unit", "bw_unit"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be positive and finite, got {value!r}")

    @classmethod
    def with_ratio(cls, ratio: float) -> "GaussianWavepacket":
        """Packet with the given peak-to-bandwidth ratio in unit frequencies."""
        return cls(omega_peak=ratio, bandwidth=1.0, freq_unit=1.0, bw_unit=1.0)

    @property
    def peak_to_width(self) -> float:
        return (self.omega_peak * self.freq_unit) / (self.bandwidth * self.bw_unit)


def _check_delta(delta: float):
    if not math.isfinite(delta) or delta <= -1.0:
        raise DomainError(f"shift parameter must be > -1, got {delta!r}")


def log_overlap(
    wp: GaussianWavepacket,
    delta: float,
    prefactor: Prefactor | str = Prefactor.NORMALIZED,
) -> float:
    _check_delta(delta)
    k = 1.0 + delta
    denom = 1.0 + k * k
    r = wp.peak_to_width
    exponent = -(delta * r) ** 2 / (4.0 * denom)
    if Prefactor(prefactor) is Prefactor.NORMALIZED:
        # 2k/(1+k^2) = 1 - d^2/(1+k^2)
        return 0.5 * math.log1p(-delta * delta / denom) + exponent
    # 2/(1+k^2) = 1 - d(2+d)/(1+k^2)
    return 0.5 * math.log1p(-delta * (2.0 + delta) / denom) - math.log1p(delta) + exponent


def overlap_closed_form(
    wp: GaussianWavepacket,
    delta: float,
    prefactor: Prefactor | str = Prefactor.NORMALIZED,
) -> float:
    return math.exp(log_overlap(wp, delta, prefactor))


def one_minus_theta(
    wp: GaussianWavepacket,
    delta: float,
    prefactor: Prefactor | str = Prefactor.NORMALIZED,
) -> float:
    """``1 - Theta`` without cancellation, accurate for |delta| down to 1e-12."""
    return -math.expm1(log_overlap(wp, delta, prefactor))


def overlap_quadrature(wp: GaussianWavepacket, delta: float, tol: float = 1e-13) -> float:
    """Integrate F_B * F_A over positive frequencies numerically.

    Works in the offset variable ``u = (W - W0) / sigma``, so the lower
    limit W = 0 becomes ``u = -R``.  The window reaches 12 standard
    deviations of the integrand past both peaks, so the dropped upper and
    far-side mass is below exp(-72).
    """
    _check_delta(delta)
    k = 1.0 + delta
    r = wp.peak_to_width
    norm = 1.0 / math.sqrt(2.0 * math.pi * k)
    shift = delta * r

    def integrand(u):
        # F_A(W) F_B(W) with F(W) ∝ exp(-(W - W0)^2 / (4 sigma^2))
        return norm * math.exp(-0.25 * u * u - 0.25 * ((u - shift) / k) ** 2)

    width = 12.0 * math.sqrt(2.0) * max(1.0, k)
    lo = max(-r, min(0.0, shift) - width)
    hi = max(0.0, shift) + width
    if hi <= lo:
        return 0.0
    points = [p for p in (0.0, shift) if lo < p < hi]
    with warnings.catch_warnings():
        warnings.simplefilter("error", IntegrationWarning)
        try:
            value, err = quad(integrand, lo, hi, epsabs=tol, epsrel=1e-14, limit=200, points=points or None)
        except IntegrationWarning as exc:
            raise QuadratureError(
                f"overlap quadrature did not converge (delta={delta}, R={r}): {exc}"
            ) from exc
    if err > 100 * tol:
        raise QuadratureError(f"overlap quadrature error estimate {err:.2e} exceeds {tol:.0e}")
    return value


def overlap_second_order(wp: GaussianWavepacket, delta: float) -> float:
    return 1.0 - (delta * wp.peak_to_width) ** 2 / 8.0


def second_order_valid(wp: GaussianWavepacket, delta: float, threshold: float = 0.1) -> bool:
    """Whether ``(delta R)^2`` is small enough for the quadratic expansion."""
    return (delta * wp.peak_to_width) ** 2 < threshold


def fidelity(theta: float) -> float:
    if not 0.0 <= theta <= 1.0:
        raise DomainError(f"overlap must lie in [0, 1], got {theta!r}")
    return theta * theta
