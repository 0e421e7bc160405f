"""Exception hierarchy shared by every module of the package."""


class VerificationError(Exception):
    """Base class for all errors raised by bergman_dual."""


class BranchCutHit(VerificationError):
    def __init__(self, node, w):
        self.node = node
        self.w = w
        super().__init__(f"evaluation on the branch cut of {node} at w={w!r}")


class PoleHit(VerificationError):
    def __init__(self, node, w):
        self.node = node
        self.w = w
        super().__init__(f"pole of {node} hit at w={w!r}")


class OutsideDomain(VerificationError):
    pass


class DegenerateMap(VerificationError):
    pass


class InvalidSpec(VerificationError):
    pass


class NonConvergent(VerificationError):
    def __init__(self, message, estimates=None, depth=None):
        self.estimates = estimates
        self.depth = depth
        super().__init__(message)


class DivergentTail(VerificationError):
    pass


class SupDiverging(VerificationError):
    """Weighted-derivative supremum keeps growing under boundary refinement."""

    def __init__(self, message, profile=None):
        self.profile = profile
        super().__init__(message)


class NonPositiveNorm(VerificationError):
    pass


class UnknownSuite(VerificationError):
    pass


class ConfigInvalid(VerificationError):
    pass


class IntegrandError(VerificationError):
    """Integrand returned non-finite values on the quadrature nodes."""
