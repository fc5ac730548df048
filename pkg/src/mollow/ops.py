"""Operators on labeled tensor-product Hilbert spaces and the Liouvillian superoperator.

Conventions used throughout the package:

* the two-level decay rate gamma is the unit of every rate and frequency,
* frequencies are measured in the frame rotating at the drive (drive at 0),
* vectorization is column-stacking, ``vec(A X B) = (B^T kron A) vec(X)``,

so the Liouvillian of ``drho/dt = -i[H, rho] + sum_k r_k D[c_k](rho)`` reads

    L = -i (I kron H - H^T kron I)
        + sum_k r_k (conj(c_k) kron c_k - 1/2 I kron c_k^dag c_k
                     - 1/2 (c_k^dag c_k)^T kron I).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionBudgetError, LayoutError

GAMMA = 1.0  # two-level decay rate; the unit of every rate and frequency

HERMITIAN_TOL = 1e-12
TRACE_PRESERVATION_TOL = 1e-10

# Dense storage only; Hilbert dimensions beyond this make the d^2 x d^2
# Liouvillian too large to factor in reasonable time.
MAX_HILBERT_DIM = 64


def _frozen(matrix: np.ndarray) -> np.ndarray:
    out = np.array(matrix, dtype=complex, order="C")
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class SpaceLayout:
    """Ordered labeled subsystems spanning a tensor-product Hilbert space."""

    subsystems: tuple[tuple[str, int], ...]

    def __init__(self, subsystems: Sequence[tuple[str, int]]):
        subsystems = tuple((str(label), int(dim)) for label, dim in subsystems)
        labels = [label for label, _ in subsystems]
        if len(set(labels)) != len(labels):
            raise LayoutError(f"duplicate subsystem labels in {labels}")
        for label, dim in subsystems:
            if dim < 2:
                raise LayoutError(f"subsystem {label!r} has dim {dim} < 2")
        object.__setattr__(self, "subsystems", subsystems)

    @property
    def dim(self) -> int:
        out = 1
        for _, d in self.subsystems:
            out *= d
        return out

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.subsystems)

    def index_of(self, label: str) -> int:
        for i, (name, _) in enumerate(self.subsystems):
            if name == label:
                return i
        raise LayoutError(f"unknown subsystem label {label!r}; have {self.labels}")

    def dim_of(self, label: str) -> int:
        return self.subsystems[self.index_of(label)][1]

    def extended(self, extra: Sequence[tuple[str, int]]) -> "SpaceLayout":
        return SpaceLayout(tuple(self.subsystems) + tuple(extra))


@dataclass(frozen=True)
class Operator:
    """Dense complex operator on the full space described by ``layout``."""

    layout: SpaceLayout
    matrix: np.ndarray

    def __post_init__(self):
        m = _frozen(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise LayoutError(f"operator matrix must be square, got shape {m.shape}")
        if m.shape[0] != self.layout.dim:
            raise LayoutError(
                f"operator dim {m.shape[0]} != layout dim {self.layout.dim}"
            )
        object.__setattr__(self, "matrix", m)

    def dag(self) -> "Operator":
        return Operator(self.layout, self.matrix.conj().T)

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        return float(np.abs(self.matrix - self.matrix.conj().T).max()) < tol

    def _check_same_layout(self, other: "Operator"):
        if self.layout.subsystems != other.layout.subsystems:
            raise LayoutError("operators live on different layouts")

    def __add__(self, other: "Operator") -> "Operator":
        self._check_same_layout(other)
        return Operator(self.layout, self.matrix + other.matrix)

    def __sub__(self, other: "Operator") -> "Operator":
        self._check_same_layout(other)
        return Operator(self.layout, self.matrix - other.matrix)

    def __mul__(self, scalar: complex) -> "Operator":
        return Operator(self.layout, self.matrix * scalar)

    __rmul__ = __mul__

    def __matmul__(self, other: "Operator") -> "Operator":
        self._check_same_layout(other)
        return Operator(self.layout, self.matrix @ other.matrix)


@dataclass(frozen=True)
class LindbladModel:
    """Hamiltonian plus ``(rate, collapse)`` pairs; ``emission_op`` is detected."""

    layout: SpaceLayout
    hamiltonian: Operator
    collapses: tuple[tuple[float, Operator], ...]
    emission_op: Operator

    def __post_init__(self):
        object.__setattr__(
            self,
            "collapses",
            tuple((float(rate), op) for rate, op in self.collapses),
        )
        if not self.hamiltonian.is_hermitian():
            dev = np.abs(
                self.hamiltonian.matrix - self.hamiltonian.matrix.conj().T
            ).max()
            raise LayoutError(f"hamiltonian is not hermitian (max dev {dev:.2e})")
        for rate, op in self.collapses:
            if rate < 0:
                raise LayoutError(f"negative collapse rate {rate}")
            op._check_same_layout(self.hamiltonian)
        self.emission_op._check_same_layout(self.hamiltonian)
        if self.layout.subsystems != self.hamiltonian.layout.subsystems:
            raise LayoutError("model layout differs from hamiltonian layout")


@dataclass(eq=False)
class Superoperator:
    """d^2 x d^2 matrix acting on column-stacked operators.

    The eigendecomposition is computed lazily and cached; access is
    synchronized so instances can be shared across threads.
    """

    hilbert_dim: int
    matrix: np.ndarray
    layout: SpaceLayout | None = None
    _eig_lock: threading.Lock = field(
        default_factory=threading.Lock, repr=False, compare=False
    )
    _eig_cache: tuple | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        m = _frozen(self.matrix)
        if m.shape != (self.hilbert_dim**2, self.hilbert_dim**2):
            raise LayoutError(
                f"superoperator shape {m.shape} != ({self.hilbert_dim**2},)*2"
            )
        self.matrix = m

    @property
    def dim(self) -> int:
        """Dimension of the operator space, d^2."""
        return self.hilbert_dim**2

    def max_trace_violation(self) -> float:
        """Largest entry of (vec I)^dag L; zero for a trace-preserving generator."""
        tr = trace_vector(self.hilbert_dim)
        return float(np.abs(tr @ self.matrix).max())


def vec(matrix: np.ndarray) -> np.ndarray:
    """Column-stack a matrix into a vector."""
    return np.asarray(matrix).reshape(-1, order="F")


def unvec(v: np.ndarray, dim: int) -> np.ndarray:
    """Inverse of :func:`vec` for a ``dim x dim`` matrix."""
    return np.asarray(v).reshape((dim, dim), order="F")


def trace_vector(dim: int) -> np.ndarray:
    """Row vector t with t @ vec(X) = Tr X."""
    t = np.zeros(dim * dim, dtype=complex)
    t[:: dim + 1] = 1.0
    return t


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two square matrices."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise LayoutError(f"kron: first factor not square, shape {a.shape}")
    if b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise LayoutError(f"kron: second factor not square, shape {b.shape}")
    return np.kron(a, b)


def embed(local: np.ndarray, layout: SpaceLayout, label: str) -> Operator:
    """Lift a subsystem operator to the full space (identity elsewhere)."""
    local = np.asarray(local, dtype=complex)
    k = layout.index_of(label)
    want = layout.subsystems[k][1]
    if local.shape != (want, want):
        raise LayoutError(
            f"operator shape {local.shape} does not match subsystem "
            f"{label!r} of dim {want}"
        )
    out = np.eye(1, dtype=complex)
    for i, (_, d) in enumerate(layout.subsystems):
        out = np.kron(out, local if i == k else np.eye(d, dtype=complex))
    return Operator(layout, out)


def destroy(dim: int) -> np.ndarray:
    """Truncated bosonic lowering operator; for dim=2 this is sigma_minus."""
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1).astype(complex)


def sigma_minus() -> np.ndarray:
    """Two-level lowering operator |g><e| in the (g, e) basis."""
    return destroy(2)


def identity(layout: SpaceLayout) -> Operator:
    return Operator(layout, np.eye(layout.dim, dtype=complex))


def liouvillian(model: LindbladModel) -> Superoperator:
    """Assemble the master-equation generator in column-stacking convention."""
    d = model.layout.dim
    if d > MAX_HILBERT_DIM:
        raise DimensionBudgetError(
            f"Hilbert dim {d} exceeds the dense-storage budget {MAX_HILBERT_DIM}"
        )
    eye = np.eye(d, dtype=complex)
    H = model.hamiltonian.matrix
    L = -1j * (np.kron(eye, H) - np.kron(H.T, eye))
    for rate, c_op in model.collapses:
        if rate == 0.0:
            continue
        c = c_op.matrix
        cdc = c.conj().T @ c
        L += rate * (
            np.kron(c.conj(), c)
            - 0.5 * np.kron(eye, cdc)
            - 0.5 * np.kron(cdc.T, eye)
        )
    out = Superoperator(d, L, layout=model.layout)
    violation = out.max_trace_violation()
    if violation >= TRACE_PRESERVATION_TOL:
        raise LayoutError(
            f"assembled generator is not trace-preserving (max {violation:.2e})"
        )
    return out
