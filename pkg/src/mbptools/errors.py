"""Exception types shared across the package."""


class UnitDiskError(ValueError):
    """A point violates a unit-disk domain constraint."""


class DegenerateEndpointsError(ValueError):
    """Two endpoints that must be distinct coincide."""


class RayExitsStolzError(ValueError):
    """A boundary-approach ray leaves the requested Stolz region."""

    def __init__(self, message, index):
        super().__init__(f"{message} (first violating index {index})")
        self.index = index


class NotSelfMapError(ValueError):
    """A map specification does not send the disk into the closed disk."""


class SpecError(ValueError):
    """A JSON function spec is malformed; carries the offending JSON path."""

    def __init__(self, message, json_path="$"):
        super().__init__(f"{json_path}: {message}")
        self.json_path = json_path


class ConvergenceError(RuntimeError):
    """An iterative solve failed to reach its target residual."""


class ContinuationStallError(ConvergenceError):
    """Continuation step size underflowed before the target was reached."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class DivergenceError(RuntimeError):
    """A sequence limit shows no sign of settling."""


class InconsistentLimitsError(RuntimeError):
    """Two independent routes to the same boundary quantity disagree."""


class SingularPointError(ValueError):
    """Evaluation requested where a horocycle quotient blows up."""


class CertificationError(RuntimeError):
    """A mesh certification (injectivity, inclusion, sandwich) failed."""


class ProbeSetNotCertifiedError(ValueError):
    """A two-point check was asked to run on an uncertified probe set."""
