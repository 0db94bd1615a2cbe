"""Exception types shared across the package."""


class ValidationError(ValueError):
    """A domain object or parameter violates one of its invariants.

    The message always names the offending field or argument.
    """


class ConfigError(ValidationError):
    """A scenario config file failed to parse or validate.

    Carries file/field context in the message so CLI users can locate the
    problem without a stack trace.
    """


class SimulationDivergedError(RuntimeError):
    """The integrator produced a non-finite state.

    Attributes:
        sample_index: index of the first output sample that could not be
            computed from finite values.
    """

    def __init__(self, message: str, sample_index: int):
        super().__init__(message)
        self.sample_index = sample_index
