"""Gaussian coherence of a two-mode squeezed state when one photon is sent
from the Earth's surface to a satellite.

The curved-spacetime deformation of the photon's wavepacket is modelled as
a beam-splitter loss whose transmissivity is the overlap between the sent
and received frequency distributions.
"""

from .channel import (
    LossyChannelPair,
    PipelineOptions,
    PropagationResult,
    Theta1Policy,
    apply_channel,
    apply_channel_matrix,
    build_symplectic,
    propagated_coherence,
)
from .errors import (
    DomainError,
    NoRootError,
    PipelineError,
    QuadratureError,
    SweepError,
    UnphysicalStateError,
)
from .experiments import (
    SweepRow,
    SweepSpec,
    evaluate_point,
    preset_figure,
    rate_of_change_mu,
    run_sweep,
)
from .gaussian_core import (
    CovarianceMatrix2Mode,
    Displacement,
    NbarConvention,
    gaussian_coherence,
    mean_occupations,
    symplectic_eigenvalues,
    symplectic_invariants,
    two_mode_squeezed_cm,
    von_neumann_entropy,
)
from .spacetime import (
    EARTH,
    BodyModel,
    DeltaMode,
    ShiftResult,
    delta_exact,
    delta_perturbative,
    frequency_ratio_kerr,
    frequency_ratio_schwarzschild,
    zero_shift_height,
)
from .wavepacket import (
    GaussianWavepacket,
    fidelity,
    one_minus_theta,
    overlap_closed_form,
    overlap_quadrature,
    overlap_second_order,
)

__version__ = "0.1.0"
