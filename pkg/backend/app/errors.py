class PlanarError(ValueError):
    """Base class for every error raised by the planar monodromy toolkit."""


class InvalidInputError(PlanarError):
    """A precondition, range or parity requirement was violated."""


class ParseError(InvalidInputError):
    def __init__(self, message: str, column: int):
        super().__init__(f"{message} (column {column})")
        self.column = column


class DimensionMismatchError(PlanarError):
    pass


class DegenerateFormError(PlanarError):
    """The form is singular where a nondegenerate one is required."""


class OracleError(PlanarError):
    """A rewrite template or a produced curve failed oracle validation."""


class RewriteError(PlanarError):
    pass


class KirbyError(PlanarError):
    """A diagram is not in the shape an operation expects."""


class ContradictoryHypothesesError(InvalidInputError):
    pass
