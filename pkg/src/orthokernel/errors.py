"""Exception hierarchy shared by the library and the CLI."""


class OrthoKernelError(Exception):
    """Base class for all library errors."""


class DomainError(OrthoKernelError, ValueError):
    """A point or shifted point lies outside the open interval (-1, 1)."""


class DegeneracyError(OrthoKernelError, ArithmeticError):
    """Recurrence construction broke down (non-positive norm, quadrature too coarse)."""


class PreconditionError(OrthoKernelError, ValueError):
    """An experiment's hypotheses do not hold for the supplied inputs."""


class ConfigError(OrthoKernelError, ValueError):
    """Aggregated configuration problems; ``problems`` lists every violation."""

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))
