"""Exception hierarchy shared by the quantum and classical sides."""


class ContractViolation(ValueError):
    """An input breaks a documented precondition or type invariant."""


class DimensionMismatch(ContractViolation):
    pass


class NonHermitianError(ContractViolation):
    pass


class InvalidProjectorError(ContractViolation):
    pass


class InvalidTableError(ContractViolation):
    pass


class ZeroProbabilityError(ValueError):
    """Raised when conditioning on an event whose probability is at or below ``EPS_ZERO``.

    Both the quantum state update and the classical table conditioning raise
    this same type so the two routes fail identically on null events.
    """

    def __init__(self, probability: float, what: str = "event"):
        self.probability = probability
        super().__init__(f"cannot condition on {what} with probability {probability:.3e}")
