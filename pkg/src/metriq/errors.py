"""Exception hierarchy shared by all metriq modules."""


class MetriqError(Exception):
    """Base class for every error raised by the library."""


class DimensionMismatch(MetriqError, ValueError):
    pass


class NotHermitian(MetriqError, ValueError):
    pass


class NotPositiveDefinite(MetriqError, ValueError):
    pass


class NoConvergence(MetriqError, RuntimeError):
    pass


class MetricNotFound(MetriqError, RuntimeError):
    """No positive-definite intertwiner was located.

    ``exhaustive`` is True when the search covered the whole solution space
    (one-dimensional Hermitian null space), so nonexistence is certain.
    """

    def __init__(self, message, exhaustive=False):
        super().__init__(message)
        self.exhaustive = exhaustive


class DimensionTooLarge(MetriqError, ValueError):
    pass


class SimilarityNotHermitian(MetriqError, ValueError):
    pass


class SizeOutOfRange(MetriqError, ValueError):
    pass


class DegreeOutOfRange(MetriqError, ValueError):
    pass


class InvalidParameters(MetriqError, ValueError):
    """Raised with the list of violated parameter constraints in ``failures``."""

    def __init__(self, failures):
        self.failures = list(failures)
        super().__init__("; ".join(self.failures))


class QuadratureUnderresolved(MetriqError, RuntimeError):
    pass


class ParseError(MetriqError, ValueError):
    pass


class KindViolation(MetriqError, ValueError):
    pass


class NotQuasiHermitian(MetriqError, ValueError):
    pass
