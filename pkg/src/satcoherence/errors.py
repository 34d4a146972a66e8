"""Exception hierarchy shared by all modules."""


class DomainError(ValueError):
    """An input lies outside the domain where a formula is defined."""


class UnphysicalStateError(DomainError):
    """A covariance matrix violates the uncertainty principle."""


class NoRootError(DomainError):
    """A root bracket does not contain a sign change."""


class QuadratureError(ArithmeticError):
    """Numerical integration failed to reach the requested tolerance."""


class PipelineError(RuntimeError):
    """Failure inside the height-to-coherence pipeline.

    ``stage`` names the step that raised (``"spacetime"``, ``"wavepacket"``,
    ``"channel"`` or ``"coherence"``); the original exception is chained.
    """

    def __init__(self, stage: str, message: str):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage


class SweepError(RuntimeError):
    """A sweep aborted; ``point`` identifies the offending grid point."""

    def __init__(self, point: dict, message: str):
        super().__init__(f"sweep aborted at {point}: {message}")
        self.point = point
