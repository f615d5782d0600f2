"""Exception types shared across the package."""


class GaugeForgeError(Exception):
    """Base class for all package errors."""


class ConfigError(GaugeForgeError):
    """Invalid configuration or malformed input data."""


class NoBracket(GaugeForgeError):
    """Membership never held along the ray within the iteration budget."""


class EmptyK(GaugeForgeError):
    """Star hull requested over an empty apex set."""


class EmptySlab(GaugeForgeError):
    """Slab threshold at or above the supremum: the slab is empty."""


class SmoothingBudget(GaugeForgeError):
    """Required smoothing temperature underflows the representable range."""


class BadSeparation(GaugeForgeError):
    """The compactum is not certified inside the shrunken body."""


class BadGap(GaugeForgeError):
    """The claimed distance gap between bodies failed its certificate."""


class CenterNotInterior(GaugeForgeError):
    """A chosen center is not certified interior to its body."""


class LipschitzUnavailable(GaugeForgeError):
    """No Lipschitz bound can be derived (missing inradius data)."""


class CenterNotInImage(GaugeForgeError):
    """A target-space center is not representable in the injection image."""


class SeamMismatch(GaugeForgeError):
    """The two map branches disagree in their overlap zone."""


class RayInversionFailure(GaugeForgeError):
    """Radial monotonicity violated numerically during ray inversion."""


class CertificateFailure(GaugeForgeError):
    """A construction-time inclusion certificate did not hold."""


class UnknownSuite(GaugeForgeError):
    """Requested verification suite does not exist."""


class DomainTruncation(GaugeForgeError):
    """Query fell outside the certified domain at the built truncation depth.

    Carries the deepest gauge values seen, so callers can report how close
    the query was to escaping.
    """

    def __init__(self, message: str, deepest: dict | None = None):
        super().__init__(message)
        self.deepest = deepest or {}
