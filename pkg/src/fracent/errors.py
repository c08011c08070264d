"""Exception hierarchy shared by every fracent module."""


class FracentError(Exception):
    """Base class for all errors raised by fracent."""


class DegenerateMode(FracentError):
    """A mode frequency vanished where a finite one was required."""


class InvalidPreQuench(FracentError):
    """The pre-quench Hamiltonian has a zero mode, so its ground state is not normalizable."""


class DimensionMismatch(FracentError):
    pass


class UnpairedSpectrum(FracentError):
    """Eigenvalues of J.Gamma did not come in +/- i*lambda pairs."""


class InvalidSpectrum(FracentError):
    """A symplectic eigenvalue lies below 1/2 beyond the clamp tolerance."""


class SiteNotInRegion(FracentError):
    pass


class NoDipFound(FracentError):
    pass


class TooLarge(FracentError):
    pass


class NearSingular(FracentError):
    pass


class ConfigError(FracentError):
    pass


class NumericsUnhealthy(FracentError):
    pass


class InsufficientData(FracentError):
    pass


class NonPositiveValues(FracentError):
    pass
