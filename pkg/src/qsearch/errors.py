class InvalidInputError(ValueError):
    """An argument violates an operation's precondition."""


class InvalidParameterError(InvalidInputError):
    """Parameters are individually valid but describe an empty or degenerate run."""


class CapacityError(InvalidInputError):
    """The requested size exceeds what the selected engine can hold."""


class SubspaceViolationError(ValueError):
    """A state left the subspace an operation is restricted to."""


class ConvergenceError(RuntimeError):
    """An iterative integrator could not meet its tolerance."""

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics
