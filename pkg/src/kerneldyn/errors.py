"""Exception hierarchy shared by all kerneldyn modules."""


class KernelDynError(Exception):
    """Base class for every error raised by kerneldyn."""


class SequenceSyntaxError(KernelDynError):
    """Malformed sequence expression; ``offset`` is the byte offset of the problem."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class SequenceEvalError(KernelDynError):
    """Evaluation of a sequence failed (division by zero, domain error, missing term)."""


class ConstructionError(KernelDynError):
    """Kernel construction was given inputs violating its preconditions."""


class NotHermitianError(KernelDynError):
    pass


class NotPositiveDefiniteError(KernelDynError):
    """Gram matrix is not numerically positive definite."""

    def __init__(self, message, smallest_eigenvalue):
        super().__init__(message)
        self.smallest_eigenvalue = smallest_eigenvalue


class CapacityError(KernelDynError):
    """A requested vector does not fit inside the truncation window."""


class NotSummableError(KernelDynError):
    """Periodic-point construction refused because the diagonal is not summable."""


class SpecError(KernelDynError):
    """Kernel spec file failed to parse or validate."""

    def __init__(self, message, location=None):
        super().__init__(message if location is None else f"{location}: {message}")
        self.location = location
