"""Exception hierarchy shared across the package."""


class AdversaryError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameter(AdversaryError, ValueError):
    pass


class ParameterDomainError(InvalidParameter):
    """A parameter-regime precondition failed; the message names the inequality."""

    def __init__(self, violated: list[str]):
        self.violated = list(violated)
        super().__init__("parameter domain violated: " + "; ".join(self.violated))


class ResourceLimitError(AdversaryError):
    pass


class BudgetViolation(AdversaryError):
    def __init__(self, bits: int, budget: int, where: str = ""):
        self.bits = bits
        self.budget = budget
        suffix = f" ({where})" if where else ""
        super().__init__(f"{bits} bits exceeds budget of {budget} bits{suffix}")


class SamplingFailure(AdversaryError):
    pass


class EmptyClassError(AdversaryError):
    pass


class LasVegasFailure(AdversaryError):
    pass


class InternalConsistencyError(AdversaryError, AssertionError):
    """A proven invariant failed to hold; this always indicates a bug."""


class ProtocolViolation(AdversaryError):
    pass
