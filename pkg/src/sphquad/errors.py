"""Exception and warning types raised by sphquad."""


class SphQuadError(Exception):
    """Base class for all sphquad errors."""


class DomainError(SphQuadError, ValueError):
    """An argument lies outside the domain of a function."""


class NotUnitError(DomainError):
    """A Cartesian triple is too far from unit length to be renormalized."""

    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line


class ParseError(SphQuadError, ValueError):
    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line


class NonFiniteError(SphQuadError, FloatingPointError):
    """An integrand returned inf or nan at a quadrature node."""

    def __init__(self, message, node_index=None, node=None):
        super().__init__(message)
        self.node_index = node_index
        self.node = node


class SingularHitError(SphQuadError):
    """A transformed node landed on the singular point of the integrand."""


class SingularEvalError(DomainError):
    """A test function was evaluated exactly at its singularity."""


class NonConvergedError(SphQuadError):
    """An iterative method stopped before reaching its tolerance.

    ``candidate`` holds the best result found so far (if any).
    """

    def __init__(self, message, residual=None, iterations=None, candidate=None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations
        self.candidate = candidate


class DuplicatePointsError(SphQuadError):
    pass


class NegativeRadicandError(SphQuadError, ArithmeticError):
    pass


class SingularGramWarning(RuntimeWarning):
    """The Gram matrix is numerically singular; a pseudo-determinant was used."""
