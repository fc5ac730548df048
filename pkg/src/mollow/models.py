"""Physics-level builders: resonance fluorescence, dressed-ladder structure,
leapfrog loci and the two-level-system + cavity photon-bundle configuration.

Drive convention: ``H`` contains ``(rabi/2)(sigma + sigma^dag)`` so that the
strong-driving sideband splitting tends to ``rabi``.  The splitting itself is
defined operationally as the largest |imaginary part| among Liouvillian
eigenvalues, which tracks the actual peak positions including linewidth
corrections.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import eigenvalues, expval, steady_state
from .errors import RegimeError, TruncationError
from .ops import (
    GAMMA,
    LindbladModel,
    SpaceLayout,
    destroy,
    embed,
    liouvillian,
    sigma_minus,
)

EMITTER_LABEL = "2LS"
CAVITY_LABEL = "cavity"

# Figure-reproduction defaults.  The source figures quote no numbers; these
# put the system deep in the triplet regime with filters narrow enough to
# resolve the two-photon antidiagonals.  Defaults, not claims.
DEFAULT_RABI = 20.0
DEFAULT_GAMMA_FILTER = 0.5
DEFAULT_WINDOW = 1.5  # map/spectrum half-width in units of the splitting


@dataclass(frozen=True)
class RFParams:
    """Drive strength and detuning of the driven two-level system (gamma=1)."""

    rabi: float
    detuning: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.detuning):
            raise ValueError("detuning must be finite")
        if self.rabi < 0:
            raise ValueError(f"rabi must be >= 0, got {self.rabi}")

    @property
    def gamma(self) -> float:
        return GAMMA


@dataclass(frozen=True)
class DressedStructure:
    """Dressed-ladder observables: peak splitting and two-photon sum loci."""

    splitting: float
    line_positions: tuple[float, float, float]
    leapfrog_sums: tuple[float, float, float]

    def __post_init__(self):
        if self.splitting <= 0:
            raise ValueError("splitting must be positive")


@dataclass(frozen=True)
class BundleParams:
    """Cavity configuration distilling n-photon emission from the triplet."""

    n: int
    cavity_coupling: float
    cavity_decay: float
    fock_truncation: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"bundle order n must be >= 2, got {self.n}")
        # coupling 0 is allowed: the decoupled limit is a consistency check
        if self.cavity_coupling < 0 or self.cavity_decay <= 0:
            raise ValueError("cavity coupling must be >= 0 and decay > 0")
        if self.fock_truncation < 2 * self.n + 2:
            raise ValueError(
                f"fock_truncation {self.fock_truncation} < 2n+2 = {2 * self.n + 2}"
            )


def rf_model(p: RFParams) -> LindbladModel:
    """Coherently driven two-level emitter decaying at gamma=1."""
    layout = SpaceLayout([(EMITTER_LABEL, 2)])
    sm = embed(sigma_minus(), layout, EMITTER_LABEL)
    H = p.detuning * (sm.dag() @ sm) + (p.rabi / 2.0) * (sm + sm.dag())
    return LindbladModel(layout, H, ((GAMMA, sm),), sm)


def dressed_structure(p: RFParams) -> DressedStructure:
    """Splitting and line loci from the Liouvillian eigenvalues."""
    if p.rabi <= GAMMA:
        raise RegimeError(
            f"rabi={p.rabi} is not in the triplet regime (need rabi > {GAMMA})"
        )
    evals = eigenvalues(liouvillian(rf_model(p)))
    splitting = float(np.abs(evals.imag).max())
    if splitting < 1e-9:
        raise RegimeError(
            "all Liouvillian eigenvalues are real: overdamped drive, no triplet"
        )
    lines = (-splitting, 0.0, splitting)
    return DressedStructure(splitting, lines, lines)


def leapfrog_lines(p: RFParams) -> tuple[float, float, float]:
    """The three conserved two-photon sums omega1 + omega2.

    Each value s describes the antidiagonal locus {(w1, w2): w1 + w2 = s}:
    two-photon transitions over an intermediate doublet fix only the sum, so
    either photon can take any frequency along the line.
    """
    return dressed_structure(p).leapfrog_sums


def _cavity_model(p: RFParams, b: BundleParams, omega_cavity: float) -> LindbladModel:
    layout = SpaceLayout([(EMITTER_LABEL, 2), (CAVITY_LABEL, b.fock_truncation)])
    sm = embed(sigma_minus(), layout, EMITTER_LABEL)
    a = embed(destroy(b.fock_truncation), layout, CAVITY_LABEL)
    H = (
        p.detuning * (sm.dag() @ sm)
        + (p.rabi / 2.0) * (sm + sm.dag())
        + omega_cavity * (a.dag() @ a)
        + b.cavity_coupling * (sm @ a.dag() + sm.dag() @ a)
    )
    collapses = ((GAMMA, sm), (b.cavity_decay, a))
    return LindbladModel(layout, H, collapses, a)


def bundle_model(p: RFParams, b: BundleParams) -> LindbladModel:
    """Driven emitter coupled to a cavity at 1/n of the peak splitting.

    The cavity sits on the positive side at ``splitting / n`` (the problem is
    mirror-symmetric at zero detuning); its output field is the detected one.
    """
    splitting = dressed_structure(p).splitting
    return _cavity_model(p, b, splitting / b.n)


def bundle_reference_model(p: RFParams, b: BundleParams) -> LindbladModel:
    """Same system with the cavity on the satellite peak (single-photon
    resonance); the baseline the bundle configuration is compared against."""
    splitting = dressed_structure(p).splitting
    return _cavity_model(p, b, splitting)


def truncation_tail(model: LindbladModel) -> float:
    """Steady-state population of the top Fock state of the cavity."""
    top = model.layout.dim_of(CAVITY_LABEL) - 1
    proj = np.zeros((top + 1, top + 1), dtype=complex)
    proj[top, top] = 1.0
    rho = steady_state(liouvillian(model))
    return expval(rho, embed(proj, model.layout, CAVITY_LABEL)).real


def check_truncation(model: LindbladModel, tol: float = 1e-6) -> float:
    """Raise if the truncation tail is not negligible; return the tail."""
    tail = truncation_tail(model)
    if tail >= tol:
        raise TruncationError(
            f"top Fock state holds population {tail:.2e} >= {tol}; "
            "increase fock_truncation"
        )
    return tail
