"""Two-mode Gaussian states in standard form.

Covariance matrices use the convention in which the vacuum is the identity,
so a single-mode thermal state with mean photon number n has diagonal
2n + 1.  The standard form is::

    [[a,  0,  c1,   0],
     [0,  a,   0, -c2],
     [c1, 0,   b,   0],
     [0, -c2,  0,   b]]

All entropies and coherences are in bits.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.special import xlogy

from .errors import DomainError, UnphysicalStateError

_LN2 = math.log(2.0)

# |nu - 1| below this is treated as a pure mode in f(nu).
NU_EPS = 1e-14
# Tolerance on nu >= 1 before a state is declared unphysical.
PHYSICAL_TOL = 1e-12


class NbarConvention(str, enum.Enum):
    """How mean occupations are read off the covariance matrix.

    ``PHYSICAL`` subtracts the vacuum contribution so the vacuum has n = 0.
    ``PAPER_VERBATIM`` omits the subtraction (vacuum gives n = 1/2).
    """

    PHYSICAL = "physical"
    PAPER_VERBATIM = "paper_verbatim"


def _exact_minor(a: float, b: float, c: float) -> float:
    # a*b - c*c evaluated exactly on the float inputs, rounded once.
    return float(Fraction(a) * Fraction(b) - Fraction(c) * Fraction(c))


@dataclass(frozen=True)
class CovarianceMatrix2Mode:
    """Two-mode covariance matrix in standard form.

    ``minor1`` and ``minor2`` are the 2x2 determinants ``a*b - c1**2`` and
    ``a*b - c2**2``.  They are recomputed exactly from the entries unless a
    constructor that knows them analytically passes them in; supplying them
    keeps near-pure states pure to machine precision, because for entries
    of size ~e^{2s} the rounded entries alone pin the determinant only to
    ~e^{4s} ulps.
    """

    a: float
    b: float
    c1: float
    c2: float
    minor1: float | None = field(default=None, compare=False)
    minor2: float | None = field(default=None, compare=False)

    def __post_init__(self):
        for name in ("a", "b", "c1", "c2"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if self.a <= 0 or self.b <= 0:
            raise DomainError(f"diagonal entries must be positive (a={self.a}, b={self.b})")
        m1 = self.minor1 if self.minor1 is not None else _exact_minor(self.a, self.b, self.c1)
        m2 = self.minor2 if self.minor2 is not None else _exact_minor(self.a, self.b, self.c2)
        if m1 <= 0 or m2 <= 0:
            raise DomainError(
                f"matrix is not positive definite (ab-c1^2={m1:.3g}, ab-c2^2={m2:.3g})"
            )
        object.__setattr__(self, "minor1", float(m1))
        object.__setattr__(self, "minor2", float(m2))

    @classmethod
    def from_matrix(cls, m, atol: float = 1e-12) -> "CovarianceMatrix2Mode":
        """Read a 4x4 array, checking that it is in standard form."""
        m = np.asarray(m, dtype=float)
        if m.shape != (4, 4):
            raise DomainError(f"expected a 4x4 matrix, got shape {m.shape}")
        a, b, c1, c2 = m[0, 0], m[2, 2], m[0, 2], -m[1, 3]
        expected = cls(a, b, c1, c2).matrix()
        scale = max(1.0, float(np.max(np.abs(m))))
        if not np.allclose(m, expected, rtol=0, atol=atol * scale):
            raise DomainError("matrix is not in two-mode standard form")
        return cls(a, b, c1, c2)

    def matrix(self) -> np.ndarray:
        a, b, c1, c2 = self.a, self.b, self.c1, self.c2
        return np.array(
            [
                [a, 0.0, c1, 0.0],
                [0.0, a, 0.0, -c2],
                [c1, 0.0, b, 0.0],
                [0.0, -c2, 0.0, b],
            ]
        )

    def swapped(self) -> "CovarianceMatrix2Mode":
        return CovarianceMatrix2Mode(self.b, self.a, self.c1, self.c2, self.minor1, self.minor2)


@dataclass(frozen=True)
class SymplecticInvariants:
    """Local symplectic invariants of a two-mode covariance matrix.

    ``i3`` is the determinant of the off-diagonal block, ``-c1*c2`` in the
    standard-form parametrisation, so that ``delta == 2`` for every pure
    state.
    """

    i1: float
    i2: float
    i3: float
    i4: float
    delta: float


@dataclass(frozen=True)
class Displacement:
    """First moments (d1, d2) = (<x>, <p>) of one mode."""

    d1: float = 0.0
    d2: float = 0.0


NO_DISPLACEMENT = (Displacement(), Displacement())


def two_mode_squeezed_cm(s: float) -> CovarianceMatrix2Mode:
    """Covariance matrix of the two-mode squeezed vacuum with squeezing ``s``."""
    s = float(s)
    if not math.isfinite(s) or s < 0:
        raise DomainError(f"squeezing must be finite and non-negative, got {s!r}")
    ch, sh = math.cosh(2 * s), math.sinh(2 * s)
    return CovarianceMatrix2Mode(ch, ch, sh, sh, minor1=1.0, minor2=1.0)


def symplectic_invariants(cm: CovarianceMatrix2Mode) -> SymplecticInvariants:
    p, q = cm.minor1, cm.minor2
    # delta = a^2 + b^2 - 2 c1 c2, regrouped into non-negative terms
    spread = (cm.a - cm.b) ** 2 + (cm.c1 - cm.c2) ** 2
    return SymplecticInvariants(
        i1=cm.a**2,
        i2=cm.b**2,
        i3=-cm.c1 * cm.c2,
        i4=p * q,
        delta=spread + p + q,
    )


def symplectic_eigenvalues(cm: CovarianceMatrix2Mode) -> tuple[float, float]:
    """Return ``(nu_minus, nu_plus)`` from ``2 nu^2 = delta -+ sqrt(delta^2 - 4 det)``.

    The discriminant is evaluated as ``X^2 + 2X(p+q) + (p-q)^2`` with
    ``X = (a-b)^2 + (c1-c2)^2`` and p, q the block minors; every term is
    non-negative, so no clamping is needed and nothing cancels.
    """
    p, q = cm.minor1, cm.minor2
    spread = (cm.a - cm.b) ** 2 + (cm.c1 - cm.c2) ** 2
    delta = spread + p + q
    disc = spread * spread + 2.0 * spread * (p + q) + (p - q) ** 2
    nu_plus_sq = 0.5 * (delta + math.sqrt(disc))
    nu_minus_sq = (p * q) / nu_plus_sq
    return math.sqrt(nu_minus_sq), math.sqrt(nu_plus_sq)


def is_physical(cm: CovarianceMatrix2Mode, tol: float = PHYSICAL_TOL) -> bool:
    return symplectic_eigenvalues(cm)[0] >= 1.0 - tol


def entropy_term(nu: float) -> float:
    """Entropy in bits of a single mode with symplectic eigenvalue ``nu``."""
    if nu < 1.0 - PHYSICAL_TOL:
        raise UnphysicalStateError(f"symplectic eigenvalue {nu!r} < 1")
    if nu - 1.0 < NU_EPS:
        return 0.0
    hi, lo = 0.5 * (nu + 1.0), 0.5 * (nu - 1.0)
    return float(xlogy(hi, hi) - xlogy(lo, lo)) / _LN2


def thermal_entropy(nbar: float) -> float:
    """Entropy in bits of a thermal mode, ``(n+1)log2(n+1) - n log2 n``."""
    if nbar < 0:
        raise DomainError(f"mean occupation must be non-negative, got {nbar!r}")
    return float(xlogy(nbar + 1.0, nbar + 1.0) - xlogy(nbar, nbar)) / _LN2


def von_neumann_entropy(cm: CovarianceMatrix2Mode) -> float:
    nu_minus, nu_plus = symplectic_eigenvalues(cm)
    return entropy_term(nu_minus) + entropy_term(nu_plus)


def mean_occupations(
    cm: CovarianceMatrix2Mode,
    d: tuple[Displacement, Displacement] = NO_DISPLACEMENT,
    convention: NbarConvention | str = NbarConvention.PHYSICAL,
) -> tuple[float, float]:
    convention = NbarConvention(convention)
    offset = 2.0 if convention is NbarConvention.PHYSICAL else 0.0
    d1, d2 = d
    n1 = (2.0 * cm.a + d1.d1**2 + d1.d2**2 - offset) / 4.0
    n2 = (2.0 * cm.b + d2.d1**2 + d2.d2**2 - offset) / 4.0
    return n1, n2


def gaussian_coherence(
    cm: CovarianceMatrix2Mode,
    d: tuple[Displacement, Displacement] = NO_DISPLACEMENT,
    convention: NbarConvention | str = NbarConvention.PHYSICAL,
) -> float:
    """Relative entropy of coherence (bits) to the closest product thermal state."""
    convention = NbarConvention(convention)
    n1, n2 = mean_occupations(cm, d, convention)
    if convention is NbarConvention.PHYSICAL and min(n1, n2) < 0:
        # rounding can leave a vacuum mode at -1e-17
        n1, n2 = max(n1, 0.0), max(n2, 0.0)
    c = thermal_entropy(n1) + thermal_entropy(n2) - von_neumann_entropy(cm)
    if convention is NbarConvention.PHYSICAL and -PHYSICAL_TOL <= c < 0:
        c = 0.0
    return c
