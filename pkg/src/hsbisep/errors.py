"""Exception types raised by hsbisep."""


class HSBisepError(Exception):
    """Base class for every error raised by this package."""


class NotHermitian(HSBisepError, ValueError):
    def __init__(self, deviation: float, tol: float):
        self.deviation = deviation
        self.tol = tol
        super().__init__(f"matrix is not Hermitian: max |M - M^dagger| = {deviation:.3e} > {tol:.1e}")


class NonUnitTrace(HSBisepError, ValueError):
    def __init__(self, trace: complex, tol: float):
        self.trace = trace
        self.tol = tol
        super().__init__(f"trace is {trace:.17g}, expected 1 within {tol:.1e}")


class NotPSD(HSBisepError, ValueError):
    """The matrix has an eigenvalue below ``-tol``; ``min_eig`` carries it."""

    def __init__(self, min_eig: float, tol: float):
        self.min_eig = min_eig
        self.tol = tol
        super().__init__(f"matrix is not positive semidefinite: minimal eigenvalue {min_eig:.6e} < -{tol:.1e}")


class EmptyKeepSet(HSBisepError, ValueError):
    pass


class DegenerateTriad(HSBisepError, ValueError):
    pass


class InternalSignSolveFailure(HSBisepError, RuntimeError):
    pass


class NotMDS(HSBisepError, ValueError):
    pass


class CriterionNotMet(HSBisepError):
    """The sufficient condition is not satisfied.

    This is an inconclusive outcome, not evidence of entanglement.
    """

    def __init__(self, norm_sum: float, message: str | None = None):
        self.norm_sum = norm_sum
        super().__init__(message or f"sufficient criterion not met: norm sum {norm_sum:.17g} > 1")


class ThresholdExceeded(HSBisepError, ValueError):
    def __init__(self, p: float, threshold: float):
        self.p = p
        self.threshold = threshold
        super().__init__(f"p = {p:.17g} exceeds the construction threshold {threshold:.17g}")


class OutOfRange(HSBisepError, ValueError):
    pass


class NoSignChange(HSBisepError, RuntimeError):
    pass
