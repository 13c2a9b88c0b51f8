class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


class CapacityError(RuntimeError):
    """A configured size bound was exceeded."""


class InvariantViolation(AssertionError):
    """An identity that must hold exactly did not."""
