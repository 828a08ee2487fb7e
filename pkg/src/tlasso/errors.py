"""Semantic exception hierarchy shared by all tlasso modules."""


class TlassoError(Exception):
    """Base class for all tlasso errors."""


class ConstantColumnError(TlassoError):
    """A design column has zero sample standard deviation."""

    def __init__(self, column, name=None):
        self.column = column
        self.name = name
        label = f"{column}" if name is None else f"{column} ({name!r})"
        super().__init__(f"column {label} is constant (zero sd); drop it or fit unstandardized")


class LengthMismatchError(TlassoError):
    """Vector lengths disagree."""


class DimensionMismatchError(TlassoError):
    """Matrix/vector dimensions disagree."""


class ParseError(TlassoError):
    """A CSV cell failed numeric parsing."""

    def __init__(self, row, col, value):
        self.row = row
        self.col = col
        self.value = value
        super().__init__(f"cannot parse {value!r} at row {row}, column {col}")


class MissingColumnError(TlassoError):
    """The requested response column is absent from the CSV header."""


class NonBinaryLabelsError(TlassoError):
    """Logistic loss requires labels coded {0, 1} (or {-1, +1}, remapped)."""


class ZeroNormColumnError(TlassoError):
    """A design column has zero norm, so its coordinate update is undefined."""

    def __init__(self, column):
        self.column = column
        super().__init__(f"column {column} has zero norm")


class KTooLargeError(TlassoError):
    """More folds requested than samples available."""


class NoFiniteLambdaMaxError(TlassoError):
    """Neither trivial-solution branch is feasible at any finite penalty."""


class NotOrthogonalError(TlassoError):
    """The support submatrix is not orthonormal under the (1/n) Gram scaling."""


class DegenerateLabelsError(TlassoError):
    """AUC needs at least one positive and one negative label."""


class InvalidSpecError(TlassoError):
    """A scenario or configuration object violates its invariants."""


class NoConvergenceError(TlassoError):
    """An iterative routine exhausted its iteration budget."""
