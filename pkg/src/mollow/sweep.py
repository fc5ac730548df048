"""Grid sweeps: the two-photon correlation map, spectra, and CSV output.

Map cells are pure, independent tasks; only the upper triangle is computed
(the zero-delay map is exchange-symmetric) and results land in a preallocated
matrix by index, so the output is bit-identical for any worker count.  CSV
numbers use the shortest round-trip decimal representation of binary64, which
makes golden files byte-stable.
"""

from __future__ import annotations

import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .dynamics import G2TauResult, SpectrumResult, spectrum_qrt
from .errors import SweepError
from .models import RFParams, dressed_structure, rf_model
from .sensors import SensorSpec, epsilon_default, filtered_g2, filtered_spectrum

UNIT_TAGS = ("gamma", "omega_plus")


@dataclass(frozen=True)
class FrequencyGrid:
    """Evenly spaced frequency axis; ``units`` is 'gamma' or 'omega_plus'."""

    min: float
    max: float
    count: int
    units: str = "gamma"

    def __post_init__(self):
        if self.min >= self.max:
            raise ValueError(f"grid min {self.min} must be < max {self.max}")
        if self.count < 2:
            raise ValueError(f"grid count {self.count} must be >= 2")
        if self.units not in UNIT_TAGS:
            raise ValueError(f"units must be one of {UNIT_TAGS}, got {self.units!r}")

    def points(self) -> np.ndarray:
        """Grid points in the declared units, endpoints included."""
        return self.min + np.arange(self.count) * (self.max - self.min) / (
            self.count - 1
        )

    def points_gamma(self, omega_plus: float | None = None) -> np.ndarray:
        """Grid points converted to gamma units."""
        pts = self.points()
        if self.units == "gamma":
            return pts
        if omega_plus is None:
            raise ValueError("omega_plus needed to convert omega_plus-unit grid")
        return pts * omega_plus


@dataclass(frozen=True)
class CorrelationMap:
    """g2 values over all frequency pairs of one grid (both axes)."""

    grid: FrequencyGrid
    values: np.ndarray
    gamma_filter: float
    params: RFParams
    epsilon_drift_max: float
    omega_plus: float
    epsilon: float

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.count, self.grid.count):
            raise ValueError(f"map shape {v.shape} != grid count {self.grid.count}")
        if v.min() < -1e-9:
            raise ValueError(f"negative map value {v.min():.2e}")
        if np.abs(v - v.T).max() > 1e-10:
            raise ValueError("map is not exchange-symmetric")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)


def _map_cell(task):
    """Evaluate one (i, j) cell; module-level so worker processes can pick it up."""
    i, j, rabi, detuning, w1, w2, gamma_filter, epsilon = task
    model = rf_model(RFParams(rabi, detuning))
    s1 = SensorSpec(w1, gamma_filter, epsilon)
    s2 = SensorSpec(w2, gamma_filter, epsilon)
    try:
        res = filtered_g2(model, s1, s2)
    except Exception as exc:
        raise SweepError(
            f"map cell ({i}, {j}) at omega1={w1}, omega2={w2} failed: {exc}"
        ) from exc
    return i, j, res.value, res.epsilon_drift


def g2_map(
    p: RFParams,
    grid: FrequencyGrid,
    gamma_filter: float,
    worker_count: int = 1,
    epsilon: float | None = None,
) -> CorrelationMap:
    """Two-photon correlation map over ``grid x grid``.

    Evaluates the upper triangle (i <= j) and mirrors; the result does not
    depend on ``worker_count``.
    """
    if worker_count < 1:
        raise ValueError("worker_count must be >= 1")
    omega_plus = dressed_structure(p).splitting
    freqs = grid.points_gamma(omega_plus)
    n = grid.count
    tasks = [
        (i, j, p.rabi, p.detuning, freqs[i], freqs[j], gamma_filter, epsilon)
        for i in range(n)
        for j in range(i, n)
    ]
    values = np.empty((n, n), dtype=float)
    drift_max = 0.0
    if worker_count == 1:
        results = map(_map_cell, tasks)
    else:
        chunk = max(1, len(tasks) // (8 * worker_count))
        pool = ProcessPoolExecutor(max_workers=worker_count)
        try:
            results = list(pool.map(_map_cell, tasks, chunksize=chunk))
        finally:
            pool.shutdown()
    for i, j, value, drift in results:
        values[i, j] = value
        values[j, i] = value
        drift_max = max(drift_max, drift)
    if epsilon is None:
        eps_used = epsilon_default([SensorSpec(0.0, gamma_filter)])
    else:
        eps_used = epsilon
    return CorrelationMap(
        grid, values, gamma_filter, p, drift_max, omega_plus, eps_used
    )


def spectrum_sweep(
    p: RFParams, grid: FrequencyGrid, gamma_filter: float | None = None
) -> SpectrumResult:
    """Emission spectrum on the grid: exact (no filter) or sensor-filtered."""
    try:
        omega_plus = dressed_structure(p).splitting
    except Exception:
        omega_plus = None
    freqs = grid.points_gamma(omega_plus)
    model = rf_model(p)
    if gamma_filter is None:
        result = spectrum_qrt(model, freqs)
    else:
        result = filtered_spectrum(model, gamma_filter, freqs)
    return result


def _format(x: float) -> str:
    """Shortest decimal that round-trips binary64."""
    return repr(float(x))


def _atomic_write(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".csv")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _meta_lines(meta: dict) -> list[str]:
    return [f"#{key}={value}" for key, value in meta.items()]


def write_map(cmap: CorrelationMap, path: str):
    """Emit the map as CSV: '#key=value' metadata, header, row-major cells."""
    meta = {
        "kind": "g2map",
        "rabi": _format(cmap.params.rabi),
        "detuning": _format(cmap.params.detuning),
        "gamma_filter": _format(cmap.gamma_filter),
        "omega_plus": _format(cmap.omega_plus),
        "epsilon": _format(cmap.epsilon),
        "epsilon_policy": "halve-until-drift<=1%,max3",
        "epsilon_drift_max": _format(cmap.epsilon_drift_max),
        "units": cmap.grid.units,
        "grid_min": _format(cmap.grid.min),
        "grid_max": _format(cmap.grid.max),
        "grid_count": str(cmap.grid.count),
    }
    lines = _meta_lines(meta)
    lines.append("omega1,omega2,g2")
    pts = cmap.grid.points()
    for i in range(cmap.grid.count):
        for j in range(cmap.grid.count):
            lines.append(
                f"{_format(pts[i])},{_format(pts[j])},{_format(cmap.values[i, j])}"
            )
    _atomic_write(path, "\n".join(lines) + "\n")


def write_spectrum(
    result: SpectrumResult,
    path: str,
    grid: FrequencyGrid | None = None,
    extra_meta: dict | None = None,
):
    """Emit a spectrum as 'omega,S' rows in the map file's metadata dialect.

    When ``grid`` is given, the frequency column is written in the grid's
    declared units; otherwise in gamma units as computed.
    """
    meta = {
        "kind": "spectrum",
        "units": grid.units if grid is not None else "gamma",
        "normalization": result.normalization,
    }
    if result.coherent_weight is not None:
        meta["coherent_weight"] = _format(result.coherent_weight)
    if extra_meta:
        meta.update({k: str(v) for k, v in extra_meta.items()})
    lines = _meta_lines(meta)
    lines.append("omega,S")
    axis = grid.points() if grid is not None else result.frequencies
    for x, y in zip(axis, result.values):
        lines.append(f"{_format(x)},{_format(y)}")
    _atomic_write(path, "\n".join(lines) + "\n")


def write_g2_tau(result: G2TauResult, path: str, extra_meta: dict | None = None):
    """Emit a delayed correlation as 'tau,g2' rows (taus in 1/gamma)."""
    meta = {"kind": "g2tau", "units": "gamma"}
    if extra_meta:
        meta.update({k: str(v) for k, v in extra_meta.items()})
    lines = _meta_lines(meta)
    lines.append("tau,g2")
    for x, y in zip(result.taus, result.values):
        lines.append(f"{_format(x)},{_format(y)}")
    _atomic_write(path, "\n".join(lines) + "\n")
