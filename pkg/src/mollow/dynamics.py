"""Steady states, Liouvillian eigen-dynamics and unfiltered spectra/correlations.

Two-time quantities follow the regression rule
``<B(0) A(tau)> = Tr[A e^{L tau}(rho_ss B)]`` for ``tau >= 0``; the emission
spectrum is assembled from the eigendecomposition of L as a sum of complex
Lorentzians (partial fractions), never through a numerical Fourier transform.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg.lapack import zgesvx

from .errors import (
    DegenerateSteadyStateError,
    EigendecompositionError,
    LayoutError,
    SteadyStateError,
    VanishingPopulationError,
)
from .ops import (
    LindbladModel,
    Operator,
    SpaceLayout,
    Superoperator,
    liouvillian,
    trace_vector,
    unvec,
    vec,
)

STEADY_RESIDUAL_TOL = 1e-9
DEGENERACY_RCOND = 1e-12
EIG_CONDITION_LIMIT = 1e8
FALLBACK_STEP = 1e-3
ZERO_EIGENVALUE_TOL = 1e-8


@dataclass(frozen=True)
class DensityMatrix:
    """Validated density matrix on a labeled layout."""

    layout: SpaceLayout
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (self.layout.dim, self.layout.dim):
            raise SteadyStateError(
                f"density matrix shape {m.shape} != layout dim {self.layout.dim}"
            )
        tr = np.trace(m)
        if abs(tr - 1.0) > 1e-10:
            raise SteadyStateError(f"trace {tr} deviates from 1 by {abs(tr-1):.2e}")
        herm = np.abs(m - m.conj().T).max()
        if herm >= 1e-9:
            raise SteadyStateError(f"hermiticity violation {herm:.2e}")
        min_eig = float(np.linalg.eigvalsh(0.5 * (m + m.conj().T)).min())
        if min_eig <= -1e-8:
            raise SteadyStateError(f"negative population {min_eig:.2e}")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True)
class SpectrumResult:
    """Spectrum on a frequency grid (rates/frequencies in gamma units).

    ``coherent_weight`` is the elastic (delta-function) intensity, reported
    separately because it has no finite-grid representation; it is ``None``
    when the computation cannot separate it (physical detector output).
    """

    frequencies: np.ndarray
    values: np.ndarray
    normalization: str = "unit-area"
    coherent_weight: float | None = None

    def __post_init__(self):
        f = np.asarray(self.frequencies, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if f.shape != v.shape or f.ndim != 1:
            raise ValueError("frequencies and values must be matching 1-d arrays")
        if v.min() < -1e-12:
            raise ValueError(f"spectrum has negative value {v.min():.2e}")
        f.flags.writeable = False
        v.flags.writeable = False
        object.__setattr__(self, "frequencies", f)
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class G2TauResult:
    """Normalized delayed correlation g2(tau) on a tau >= 0 grid."""

    taus: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.taus, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if t.shape != v.shape or t.ndim != 1:
            raise ValueError("taus and values must be matching 1-d arrays")
        if t.min() < 0:
            raise ValueError("taus must be nonnegative")
        if v.min() < -1e-9:
            raise ValueError(f"negative correlation value {v.min():.2e}")
        t.flags.writeable = False
        v.flags.writeable = False
        object.__setattr__(self, "taus", t)
        object.__setattr__(self, "values", v)

    def tail_deviation(self) -> float:
        """|g2(tau_max) - 1|, for checking steady-state factorization."""
        return float(abs(self.values[-1] - 1.0))


def steady_state(L: Superoperator) -> DensityMatrix:
    """Unique steady state of a trace-preserving generator.

    Solves the bordered system (one row of L replaced by the trace row) with
    an LU factorization plus iterative refinement; the LAPACK reciprocal
    condition estimate of the bordered matrix doubles as the degeneracy
    detector, since the bordered matrix is singular exactly when the null
    space of L has dimension > 1.
    """
    d = L.hilbert_dim
    bordered = np.array(L.matrix)
    bordered[0, :] = trace_vector(d)
    rhs = np.zeros((d * d, 1), dtype=complex)
    rhs[0, 0] = 1.0
    (_, _, _, _, _, _, _, x, rcond, _, _, info) = zgesvx(bordered, rhs)
    if info > 0 and info <= d * d:
        raise DegenerateSteadyStateError(
            f"bordered steady-state matrix is exactly singular (pivot {info}); "
            "the Liouvillian null space has dimension > 1"
        )
    if rcond < DEGENERACY_RCOND:
        raise DegenerateSteadyStateError(
            f"bordered steady-state matrix has rcond {rcond:.2e} < "
            f"{DEGENERACY_RCOND}; the Liouvillian null space has dimension > 1"
        )
    x = x[:, 0]
    residual = float(np.abs(L.matrix @ x).max())
    if residual >= STEADY_RESIDUAL_TOL:
        raise SteadyStateError(
            f"steady-state residual {residual:.2e} >= {STEADY_RESIDUAL_TOL} "
            f"(rcond {rcond:.2e})"
        )
    if L.layout is None:
        raise SteadyStateError("superoperator carries no layout")
    return DensityMatrix(L.layout, unvec(x, d))


def expval(rho: DensityMatrix, op: Operator) -> complex:
    """Tr(op rho)."""
    if rho.layout.subsystems != op.layout.subsystems:
        raise LayoutError(
            f"layout mismatch: {rho.layout.labels} vs {op.layout.labels}"
        )
    return complex(np.trace(op.matrix @ rho.matrix))


def _eigendecomposition(L: Superoperator):
    """Cached (evals, V, Vinv, cond1) of L, or a fallback marker when V is
    too ill-conditioned to trust."""
    with L._eig_lock:
        if L._eig_cache is not None:
            return L._eig_cache
        try:
            evals, V = np.linalg.eig(L.matrix)
        except np.linalg.LinAlgError as exc:
            raise EigendecompositionError(
                f"eigendecomposition failed for dim {L.dim}: {exc}"
            ) from exc
        try:
            Vinv = np.linalg.inv(V)
        except np.linalg.LinAlgError as exc:
            raise EigendecompositionError(
                "eigenvector matrix is numerically singular "
                f"(condition estimate > 1/{np.finfo(float).eps:.1e})"
            ) from exc
        cond = float(
            np.linalg.norm(V, 1) * np.linalg.norm(Vinv, 1)
        )
        L._eig_cache = (evals, V, Vinv, cond)
        return L._eig_cache


def eigenvalues(L: Superoperator) -> np.ndarray:
    """Liouvillian eigenvalues (cached with the eigendecomposition)."""
    return _eigendecomposition(L)[0]


def _rk4_evolve(L: np.ndarray, v0: np.ndarray, taus: np.ndarray) -> np.ndarray:
    out = np.empty((len(taus), len(v0)), dtype=complex)
    v = v0.astype(complex)
    t = 0.0
    for i, target in enumerate(taus):
        span = target - t
        if span > 0:
            n = max(1, int(np.ceil(span / FALLBACK_STEP)))
            h = span / n
            for _ in range(n):
                k1 = L @ v
                k2 = L @ (v + 0.5 * h * k1)
                k3 = L @ (v + 0.5 * h * k2)
                k4 = L @ (v + h * k3)
                v = v + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            t = target
        out[i] = v
    return out


def evolve_vec(L: Superoperator, v0: np.ndarray, taus) -> np.ndarray:
    """e^{L tau} v0 for each tau (sorted ascending, >= 0).

    Uses the cached eigendecomposition; falls back to fixed-step 4th-order
    integration when the eigenvector condition number exceeds
    ``EIG_CONDITION_LIMIT`` (non-normal L near an exceptional point).
    """
    taus = np.asarray(taus, dtype=float)
    if taus.ndim != 1 or len(taus) == 0:
        raise ValueError("taus must be a nonempty 1-d array")
    if taus.min() < 0 or np.any(np.diff(taus) < 0):
        raise ValueError("taus must be sorted ascending and nonnegative")
    v0 = np.asarray(v0, dtype=complex)
    evals, V, Vinv, cond = _eigendecomposition(L)
    if cond > EIG_CONDITION_LIMIT:
        return _rk4_evolve(L.matrix, v0, taus)
    c = Vinv @ v0
    return (V @ (np.exp(np.outer(evals, taus)) * c[:, None])).T


def two_time_correlator(
    L: Superoperator,
    rho_ss: DensityMatrix,
    left: Operator,
    right: Operator,
    observe: Operator,
    taus,
) -> np.ndarray:
    """G(tau) = Tr[observe e^{L tau}(left rho_ss right)]."""
    v0 = vec(left.matrix @ rho_ss.matrix @ right.matrix)
    vt = evolve_vec(L, v0, taus)
    obs_row = vec(observe.matrix.T)  # Tr[O M] = vec(O^T) . vec(M)
    return vt @ obs_row


def g2_tau_unfiltered(model: LindbladModel, taus) -> G2TauResult:
    """Color-blind g2(tau) of the model's emission operator."""
    L = liouvillian(model)
    rho = steady_state(L)
    e = model.emission_op
    n_op = e.dag() @ e
    population = expval(rho, n_op).real
    if population < 1e-12:
        raise VanishingPopulationError(
            f"emitter population {population:.2e} < 1e-12; g2 undefined"
        )
    G = two_time_correlator(L, rho, e, e.dag(), n_op, taus).real
    values = G / population**2
    # zero-delay correlations of single-quantum emitters underflow to tiny
    # negative round-off; the result type rejects anything below -1e-9
    return G2TauResult(np.asarray(taus, dtype=float), values)


def _spectral_weights(model: LindbladModel):
    """Partial-fraction data for the emission spectrum.

    Returns (evals, weights, coherent_weight, population): the spectrum is
    sum_k Re[w_k / (-lambda_k - i omega)] / pi over decaying modes, and
    coherent_weight collects the zero-mode (elastic) intensity.
    """
    L = liouvillian(model)
    rho = steady_state(L)
    e = model.emission_op
    evals, V, Vinv, cond = _eigendecomposition(L)
    if cond > EIG_CONDITION_LIMIT:
        raise EigendecompositionError(
            f"eigenvector condition {cond:.2e} exceeds {EIG_CONDITION_LIMIT:.0e}; "
            "spectrum partial fractions are unreliable"
        )
    d = L.hilbert_dim
    c = Vinv @ vec(rho.matrix @ e.dag().matrix)
    tr_e = vec(e.matrix.T)  # Tr[e M] = vec(e^T) . vec(M)
    w = (tr_e @ V) * c
    zero = np.abs(evals) < ZERO_EIGENVALUE_TOL
    coherent = float(w[zero].sum().real)
    population = expval(rho, e.dag() @ e).real
    return evals[~zero], w[~zero], coherent, population


def spectrum_qrt(model: LindbladModel, grid) -> SpectrumResult:
    """Incoherent emission spectrum on ``grid``, unit-area normalized.

    The elastic component is returned in ``coherent_weight`` instead of being
    painted onto the grid.
    """
    grid = np.asarray(grid, dtype=float)
    evals, w, coherent, _ = _spectral_weights(model)
    S = np.zeros_like(grid)
    for lam, wk in zip(evals, w):
        S += (wk / (-lam - 1j * grid)).real / np.pi
    area = np.trapezoid(S, grid)
    if area <= 0:
        raise VanishingPopulationError("spectrum has no weight on this grid")
    return SpectrumResult(grid, S / area, "unit-area", coherent)
