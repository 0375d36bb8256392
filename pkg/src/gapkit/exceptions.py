class ValidationError(ValueError):
    """Raised when an input violates a documented precondition.

    The command line maps this exception to exit status 2.
    """
