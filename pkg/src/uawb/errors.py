"""Exceptions shared across the package."""


class RefusalError(Exception):
    """The request is outside what the workbench will compute."""


class SizeLimitError(RefusalError):
    def __init__(self, what: str, required: int, limit: int):
        super().__init__(f"{what} needs {required} elements, limit is {limit}")
        self.required = required
        self.limit = limit


class NotModularError(RefusalError):
    def __init__(self, algebra_name: str, pentagon=None):
        msg = f"Con({algebra_name}) is not modular"
        if pentagon is not None:
            msg += ": pentagon " + ", ".join(str(p) for p in pentagon)
        super().__init__(msg)
        self.pentagon = pentagon


class VerificationFailure(AssertionError):
    """A postcondition that a proved result guarantees did not hold."""


class PreconditionError(ValueError):
    """An input violates the hypotheses an operation is stated under."""
