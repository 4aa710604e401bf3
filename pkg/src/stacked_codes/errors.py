"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Operands act on different numbers of qubits."""


class ProtocolError(RuntimeError):
    """A code-switching step was applied to a state it does not accept."""


class IncompleteTranscriptError(ProtocolError):
    """A transcript lacks the outcomes needed for an inference."""


class InfeasibleError(RuntimeError):
    """A linear system that should have a solution has none."""


class VerificationError(AssertionError):
    """An exact structural check failed; carries a witness when one exists."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class BudgetExceeded(RuntimeError):
    """A search or simulation would exceed its configured resource ceiling."""


class ProjectionError(ValueError):
    """A forced measurement outcome has zero probability."""
