from typing import List, Optional


class BochnerError(ValueError):
    """Base class for every error raised by bochnerkit."""


class DimensionMismatchError(BochnerError):
    """Operands live on different spaces or have different arity."""


class InvalidPairError(BochnerError):
    """A bivector index pair (i, j) does not satisfy 1 <= i < j <= n."""


class UnsupportedDimensionError(BochnerError):
    """The requested operation is not defined in this dimension."""


class InvalidArgumentError(BochnerError):
    """An argument lies outside its documented range."""


class HypothesisViolationError(BochnerError):
    """A numeric hypothesis of a threshold or lemma does not hold."""


class InvalidOperatorError(BochnerError):
    """A curvature operator matrix is not symmetric or has the wrong size."""


class UsageError(BochnerError):
    """Command line arguments are inconsistent."""


class CurvatureInvariantError(BochnerError):
    """A tensor failed one of the algebraic curvature invariants."""

    def __init__(self, invariant: str, residual: float, tolerance: float):
        self.invariant = invariant
        self.residual = residual
        self.tolerance = tolerance
        super().__init__(f"Invariant '{invariant}' violated: residual {residual:.3e} exceeds tolerance {tolerance:.3e}")


class DocumentParseError(BochnerError):
    """An input document could not be parsed or validated."""

    def __init__(self, message: str, diagnostics: Optional[List[str]] = None):
        self.diagnostics = diagnostics or []
        detail = "; ".join(self.diagnostics)
        super().__init__(f"{message}: {detail}" if detail else message)
