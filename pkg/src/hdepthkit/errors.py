"""Exception types shared across the package."""


class DomainError(ValueError):
    """A mathematical precondition does not hold (unit ideal, I not in J, ...)."""


class ParseError(ValueError):
    """Input text (generators, search spec) could not be parsed."""
