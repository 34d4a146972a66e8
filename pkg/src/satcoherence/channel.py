"""Spacetime deformation of the wavepacket as a pair of beam-splitter losses.

Mode order for the 8x8 matrices is (b1, b2, b1_perp, b2_perp), each with
(x, p) quadratures.  ``b1`` stays at the ground station, ``b2`` travels to
the satellite and the ``_perp`` modes start in the vacuum.
"""

from __future__ import annotations

import enum
import math
from contextlib import contextmanager
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PipelineError
from .gaussian_core import CovarianceMatrix2Mode, NbarConvention, gaussian_coherence, two_mode_squeezed_cm
from .spacetime import BodyModel, DeltaMode, shift
from .wavepacket import GaussianWavepacket, overlap_closed_form


class Theta1Policy(str, enum.Enum):
    """Overlap applied to the ground-station mode.

    ``UNIT`` leaves b1 untouched.  ``SAME_AS_THETA2_AT_H0`` gives b1 the
    overlap a receiver at zero height would see, i.e. the residual shift
    from the Earth's rotation.
    """

    UNIT = "unit"
    SAME_AS_THETA2_AT_H0 = "same_as_theta2_at_h0"


@dataclass(frozen=True)
class LossyChannelPair:
    theta1: float = 1.0
    theta2: float = 1.0

    def __post_init__(self):
        for name in ("theta1", "theta2"):
            value = float(getattr(self, name))
            if not 0.0 <= value <= 1.0:
                raise DomainError(f"{name} must lie in [0, 1], got {value!r}")
            object.__setattr__(self, name, value)


@dataclass(frozen=True)
class PipelineOptions:
    delta_mode: DeltaMode = DeltaMode.PERTURBATIVE
    nbar_convention: NbarConvention = NbarConvention.PHYSICAL
    theta1_policy: Theta1Policy = Theta1Policy.UNIT

    def __post_init__(self):
        object.__setattr__(self, "delta_mode", DeltaMode(self.delta_mode))
        object.__setattr__(self, "nbar_convention", NbarConvention(self.nbar_convention))
        object.__setattr__(self, "theta1_policy", Theta1Policy(self.theta1_policy))


@dataclass(frozen=True)
class PropagationResult:
    delta: float
    theta1: float
    theta2: float
    cm: CovarianceMatrix2Mode
    coherence: float


def build_symplectic(ch: LossyChannelPair) -> np.ndarray:
    """8x8 beam-splitter transformation mixing each mode with its ancilla."""
    eye = np.eye(2)
    s = np.zeros((8, 8))
    for mode, theta in ((0, ch.theta1), (1, ch.theta2)):
        t = math.sqrt(1.0 - theta * theta)
        sys, anc = slice(2 * mode, 2 * mode + 2), slice(4 + 2 * mode, 6 + 2 * mode)
        s[sys, sys] = theta * eye
        s[sys, anc] = t * eye
        s[anc, sys] = t * eye
        s[anc, anc] = -theta * eye
    return s


def initial_covariance(s: float) -> np.ndarray:
    """Squeezed pair in (b1, b2) and vacuum ancillas, as an 8x8 matrix."""
    sigma0 = np.eye(8)
    sigma0[:4, :4] = two_mode_squeezed_cm(s).matrix()
    return sigma0


def apply_channel_matrix(s: float, ch: LossyChannelPair) -> CovarianceMatrix2Mode:
    """Output state via ``S Sigma0 S^T`` followed by discarding the ancillas."""
    sym = build_symplectic(ch)
    out = sym @ initial_covariance(s) @ sym.T
    return CovarianceMatrix2Mode.from_matrix(out[:4, :4])


def apply_channel(s: float, ch: LossyChannelPair) -> CovarianceMatrix2Mode:
    """Closed-form output state of the squeezed pair after both losses."""
    s = float(s)
    if not math.isfinite(s) or s < 0:
        raise DomainError(f"squeezing must be finite and non-negative, got {s!r}")
    sh2 = math.sinh(s) ** 2
    t1, t2 = ch.theta1**2, ch.theta2**2
    a = 1.0 + 2.0 * sh2 * t1
    b = 1.0 + 2.0 * sh2 * t2
    c = math.sinh(2.0 * s) * ch.theta1 * ch.theta2
    # ab - c^2 expanded so that no terms cancel
    minor = 1.0 + 2.0 * sh2 * (t1 * (1.0 - t2) + t2 * (1.0 - t1))
    return CovarianceMatrix2Mode(a, b, c, c, minor1=minor, minor2=minor)


@contextmanager
def _stage(name: str):
    try:
        yield
    except PipelineError:
        raise
    except (ArithmeticError, ValueError) as exc:
        raise PipelineError(name, str(exc)) from exc


def propagated_coherence(
    body: BodyModel,
    wp: GaussianWavepacket,
    s: float,
    h: float,
    opts: PipelineOptions = PipelineOptions(),
) -> PropagationResult:
    """Coherence of the squeezed pair when mode b2 is received at height ``h``."""
    with _stage("spacetime"):
        delta = shift(body, h, opts.delta_mode).delta
        delta0 = None
        if opts.theta1_policy is Theta1Policy.SAME_AS_THETA2_AT_H0:
            delta0 = shift(body, 0.0, opts.delta_mode).delta
    with _stage("wavepacket"):
        theta2 = overlap_closed_form(wp, delta)
        theta1 = 1.0 if delta0 is None else overlap_closed_form(wp, delta0)
    with _stage("channel"):
        cm = apply_channel(s, LossyChannelPair(theta1, theta2))
    with _stage("coherence"):
        coherence = gaussian_coherence(cm, convention=opts.nbar_convention)
    return PropagationResult(delta=delta, theta1=theta1, theta2=theta2, cm=cm, coherence=coherence)

