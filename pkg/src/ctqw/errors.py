"""Exception hierarchy shared by all ctqw modules."""


class CTQWError(ValueError):
    """Base class for domain errors raised by ctqw."""

    module = "ctqw"


class LatticeError(CTQWError):
    module = "ctqw.lattice"


class NonConvergenceError(CTQWError):
    """Raised when the Jacobi iteration exhausts its sweep budget."""

    module = "ctqw.spectral"

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (achieved off-diagonal norm {residual:.3e})")
        self.residual = residual


class PropagatorError(CTQWError):
    module = "ctqw.dynamics"


class BesselDomainError(CTQWError):
    module = "ctqw.specialfn"


class AnalysisError(CTQWError):
    module = "ctqw.analysis"
