"""Exception hierarchy for the mollow package."""


class MollowError(Exception):
    """Base class for all operational errors raised by this package."""


class LayoutError(MollowError):
    """Unknown subsystem label, or operator/layout dimension mismatch."""


class DegenerateSteadyStateError(MollowError):
    """The Liouvillian null space has dimension > 1; no unique steady state."""


class SteadyStateError(MollowError):
    """The bordered steady-state solve did not reach the required residual."""


class EigendecompositionError(MollowError):
    """Liouvillian eigendecomposition failed; message carries a condition estimate."""


class RegimeError(MollowError):
    """Requested quantity is undefined in this parameter regime (e.g. no triplet)."""


class VanishingPopulationError(MollowError):
    """A detector/emitter population is too small to normalize by."""


class DimensionBudgetError(MollowError):
    """Requested composite Hilbert space exceeds the supported size."""


class TruncationError(MollowError):
    """Fock-space truncation holds non-negligible population at the solution."""


class SweepError(MollowError):
    """A grid-sweep cell failed; message carries the cell coordinates."""


class ConfigError(MollowError):
    """Invalid run configuration; carries the full list of validation errors."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("\n".join(self.problems))
