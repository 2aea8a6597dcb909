"""Exception types shared across the package."""


class OutOfDomainError(ValueError):
    """A time (or other argument) falls outside the domain of a profile."""


class UnsupportedProfileError(ValueError):
    """A closed-form operation was asked to handle a non-constant sweep."""


class PreconditionError(ValueError):
    """An operation's stated precondition is violated."""


class CutoffTooSmallError(ValueError):
    """The Fock-space cutoff cannot hold the requested state.

    Carries ``required_cutoff``, the smallest total-number cutoff that would.
    """

    def __init__(self, message, required_cutoff):
        super().__init__(message)
        self.required_cutoff = required_cutoff


class NumericalFailureError(RuntimeError):
    """An integrator or propagator failed; ``time`` is where it gave up."""

    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time


class UndefinedStatisticError(ValueError):
    """A statistic (e.g. Mandel Q at zero occupation) is undefined."""


class ConfigError(ValueError):
    """A scenario configuration failed to parse or validate."""
