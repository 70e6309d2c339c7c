"""Exception types shared across the package."""


class PairSimError(Exception):
    """Base class for all package-specific errors."""


class PerturbativeBoundError(PairSimError):
    """Field amplitudes too large for the perturbative pair model.

    The closed-form pair probability is a lowest-order expression; above
    the hard bound its multi-photon corrections are no longer negligible
    and the truncated-Fock reference (`pairsim.fock`) should be used
    instead.
    """


class InconsistentRatesError(PairSimError):
    """Measured rates violate a structural constraint (e.g. coincidences
    exceeding a singles rate)."""


class TruncationError(PairSimError):
    """Photon-number cutoff too small for the requested state."""


class FitFailureError(PairSimError):
    """Nonlinear fringe fit did not converge; carries diagnostics."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class CorrectionInvalidError(PairSimError):
    """Accidental-rate correction impossible (offset at or below the
    accidental rate)."""
