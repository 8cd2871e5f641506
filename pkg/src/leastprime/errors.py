"""Exception types shared by the library and the CLI."""


class DomainError(ValueError):
    """An argument lies outside the region where a quantity is defined."""


class SingularityError(DomainError):
    """A closed form was evaluated at its removable singularity."""


class ConfigError(DomainError):
    """A case configuration violates its own structural constraints."""


class TheoremViolation(RuntimeError):
    """A numerical check contradicted a proved statement.

    The offending input is kept on ``payload`` so it can be replayed.
    """

    def __init__(self, message, payload=None):
        super().__init__(message)
        self.payload = payload


class NoFeasiblePoint(RuntimeError):
    """A parameter search found no admissible configuration."""
