"""Exception hierarchy shared by all modules."""


class AbdError(Exception):
    """Base class for all errors raised by this package."""


class InputError(AbdError):
    """Malformed or out-of-contract input (bad syntax, arity mismatch, ...)."""


class CloneMismatchError(AbdError):
    """A specialized algorithm was invoked on a connective set outside its clone."""


class NoRepresentationError(AbdError):
    """The requested function is not generated by the given connective set."""


class ResourceBudgetError(AbdError):
    """A configured search or size budget was exceeded."""


class UnsupportedError(AbdError):
    """Request is outside the supported parameter range (e.g. arity cap)."""
