"""Exception hierarchy shared by all cweig modules."""


class CweigError(Exception):
    """Base class for all cweig errors."""


class DomainError(CweigError):
    """Arguments are outside the documented domain of an operation."""


class HypothesisError(CweigError):
    """A theorem hypothesis gate refused the requested computation.

    Carries a human-readable explanation of which hypothesis failed so the
    CLI can print it (exit code 2) and mention the --force override.
    """


class AccuracyLossError(CweigError):
    """A value was computed but its cancellation estimate exceeds the contract.

    The partially trusted result is attached as ``result`` so callers that
    knowingly operate outside the certified range can still inspect it.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class ConvergenceError(CweigError):
    """An iterative scheme (quadrature, series, ODE step control) failed."""


class BracketError(ConvergenceError):
    """No sign change could be certified in the scanned interval."""


class PoleError(CweigError):
    """Evaluation requested too close to a pole of the target expression."""
