"""Exception hierarchy shared by all modules."""


class SpdcError(Exception):
    """Base class for every error raised by this package."""


class TransparencyError(SpdcError, ValueError):
    """A wavelength lies outside the crystal transparency window."""


class DerivativeDomainError(TransparencyError):
    """A wavelength is too close to the window edge to take a derivative."""


class NoCollinearSolutionError(SpdcError, ValueError):
    """No crystal orientation makes the process collinear."""


class ForbiddenRegimeError(SpdcError, ValueError):
    """SPDC does not exist at the requested (phi0, xi)."""


class UnsupportedRegimeError(SpdcError, ValueError):
    """The pump pulse is too short for the long-pulse biphoton model."""


class DegenerateWidthError(SpdcError, ValueError):
    """The group-velocity coefficient A_minus vanishes, so temporal widths collapse."""


class ResolutionError(SpdcError, ValueError):
    """A sampled grid is too coarse for the requested analysis."""


class ToleranceError(SpdcError, RuntimeError):
    """A numerical oracle failed to reach its requested tolerance."""


class ConfigError(SpdcError, ValueError):
    """Invalid configuration; ``errors`` maps field names to messages."""

    def __init__(self, errors):
        self.errors = dict(errors)
        detail = "; ".join(f"{k}: {v}" for k, v in self.errors.items())
        super().__init__(f"invalid configuration ({detail})")
