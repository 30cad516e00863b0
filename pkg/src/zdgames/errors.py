"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: validation problems exit 2,
infeasible parameters exit 3, resource limits exit 4.
"""


class ZdError(Exception):
    """Base class for all errors raised by this package."""


class InvalidGameError(ZdError):
    """A game definition is malformed (bad action counts, payoff lengths, ...)."""


class InvalidInputError(ZdError):
    """Inputs are shape-inconsistent or violate an operation's preconditions."""


class DegeneratePayoffError(ZdError):
    """Payoff values make a closed-form construction divide by zero."""


class DegenerateControllerError(ZdError):
    """Controller parameters satisfy p'q = pq', collapsing the strategy span."""


class SingularMonitoringError(ZdError):
    """Monitoring parameters make the signal-inversion system singular (w = 1/2)."""


class InfeasibleParametersError(ZdError):
    """Requested parameters force a probability outside [0, 1].

    ``violations`` lists human-readable descriptions of the violated entries.
    """

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = tuple(violations)


class SearchBoundExceededError(ZdError):
    """Permutation search refused: the player count exceeds the configured bound."""


class ResourceLimitError(ZdError):
    """A search grid or iteration budget exceeds the configured cap."""


class NonConvergenceError(ZdError):
    """Iterative stationary solve hit the iteration cap.

    ``residual`` carries the last observed infinity-norm residual.
    """

    def __init__(self, message, residual=None, iterations=None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations
