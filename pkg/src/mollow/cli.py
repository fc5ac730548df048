"""Command-line front end: config parsing, dispatch, CSV + manifest output.

Config files are plain-text ``key = value`` lines under ``[section]``
headers; command-line flags override file values.  The manifest written next
to the data uses the same dialect, so a finished run can be replayed by
passing the manifest as the config.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from dataclasses import dataclass

import numpy as np

from ._version import VERSION
from .errors import (
    ConfigError,
    DegenerateSteadyStateError,
    DimensionBudgetError,
    EigendecompositionError,
    LayoutError,
    MollowError,
    RegimeError,
    SteadyStateError,
    SweepError,
    TruncationError,
    VanishingPopulationError,
)
from .models import (
    DEFAULT_GAMMA_FILTER,
    BundleParams,
    RFParams,
    bundle_model,
    bundle_reference_model,
    check_truncation,
    dressed_structure,
    rf_model,
)
from .dynamics import expval, g2_tau_unfiltered, steady_state
from .ops import liouvillian
from .sensors import SensorSpec, filtered_g2, filtered_g2_tau
from .sweep import (
    FrequencyGrid,
    g2_map,
    spectrum_sweep,
    write_g2_tau,
    write_map,
    write_spectrum,
    _atomic_write,
    _format,
)

COMMANDS = ("spectrum", "g2map", "g2tau", "bundle", "leapfrog-check")

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_MODEL = 3
EXIT_NUMERICAL = 4
EXIT_VANISHING = 5
EXIT_IO = 6

_MODEL_ERRORS = (RegimeError, LayoutError, DimensionBudgetError, TruncationError)
_NUMERICAL_ERRORS = (
    DegenerateSteadyStateError,
    SteadyStateError,
    EigendecompositionError,
    SweepError,
)

# every key the config dialect accepts: (section, key) -> python type
_SCHEMA = {
    ("run", "command"): str,
    ("run", "out"): str,
    ("run", "workers"): int,
    ("physics", "rabi"): float,
    ("physics", "detuning"): float,
    ("grid", "min"): float,
    ("grid", "max"): float,
    ("grid", "count"): int,
    ("grid", "units"): str,
    ("filter", "gamma_filter"): float,
    ("tau", "max"): float,
    ("tau", "count"): int,
    ("sensors", "omega1"): float,
    ("sensors", "omega2"): float,
    ("bundle", "n"): int,
    ("bundle", "cavity_coupling"): float,
    ("bundle", "cavity_decay"): float,
    ("bundle", "fock_truncation"): int,
    ("epsilon", "epsilon"): float,
}

# written by `run`, accepted and ignored when a manifest is replayed
_RESULT_KEYS = (
    "version",
    "command",
    "omega_plus",
    "epsilon",
    "epsilon_drift_max",
    "wall_time_s",
)


@dataclass
class RunConfig:
    """Fully resolved parameters of one CLI invocation."""

    command: str
    out: str = "."
    workers: int = 1
    rabi: float | None = None
    detuning: float = 0.0
    grid_min: float = -1.5
    grid_max: float = 1.5
    grid_count: int | None = None
    units: str = "omega_plus"
    gamma_filter: float | None = None
    tau_max: float = 50.0
    tau_count: int = 201
    omega1: float | None = None
    omega2: float | None = None
    bundle_n: int = 2
    cavity_coupling: float = 0.05
    cavity_decay: float = 0.1
    fock_truncation: int = 8
    epsilon: float | None = None

    def grid(self) -> FrequencyGrid:
        return FrequencyGrid(self.grid_min, self.grid_max, self.grid_count, self.units)

    def physics(self) -> RFParams:
        return RFParams(self.rabi, self.detuning)


def _parse_ini(path: str) -> tuple[dict, list[str]]:
    """Parse the sectioned key=value dialect, collecting every problem."""
    problems: list[str] = []
    pairs: dict[tuple[str, str], tuple[str, int]] = {}
    section = None
    try:
        with open(path) as fh:
            raw_lines = fh.readlines()
    except OSError as exc:
        return {}, [f"cannot read config {path}: {exc}"]
    for lineno, raw in enumerate(raw_lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith(";"):
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            continue
        if "=" not in line:
            problems.append(f"{path}:{lineno}: not a key=value line: {line!r}")
            continue
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if section is None:
            problems.append(f"{path}:{lineno}: key {key!r} before any [section]")
            continue
        if section == "result":
            if key not in _RESULT_KEYS:
                problems.append(
                    f"{path}:{lineno}: unknown key {key!r} in [result]"
                )
            continue
        if (section, key) not in _SCHEMA:
            problems.append(
                f"{path}:{lineno}: unknown key {key!r} in section [{section}]"
            )
            continue
        if (section, key) in pairs:
            problems.append(
                f"{path}:{lineno}: duplicate key {key!r} in section [{section}]"
            )
            continue
        pairs[(section, key)] = (value, lineno)
    return pairs, problems


_FIELD_BY_KEY = {
    ("run", "out"): "out",
    ("run", "workers"): "workers",
    ("physics", "rabi"): "rabi",
    ("physics", "detuning"): "detuning",
    ("grid", "min"): "grid_min",
    ("grid", "max"): "grid_max",
    ("grid", "count"): "grid_count",
    ("grid", "units"): "units",
    ("filter", "gamma_filter"): "gamma_filter",
    ("tau", "max"): "tau_max",
    ("tau", "count"): "tau_count",
    ("sensors", "omega1"): "omega1",
    ("sensors", "omega2"): "omega2",
    ("bundle", "n"): "bundle_n",
    ("bundle", "cavity_coupling"): "cavity_coupling",
    ("bundle", "cavity_decay"): "cavity_decay",
    ("bundle", "fock_truncation"): "fock_truncation",
    ("epsilon", "epsilon"): "epsilon",
}


def parse_config(command: str, config_path: str | None, overrides: dict) -> RunConfig:
    """Merge file values and flag overrides into a validated RunConfig.

    Raises ConfigError carrying the full list of problems, not just the
    first one.
    """
    problems: list[str] = []
    cfg = RunConfig(command=command)
    if cfg_defaults := _COMMAND_DEFAULTS.get(command):
        for name, value in cfg_defaults.items():
            setattr(cfg, name, value)
    if config_path is not None:
        pairs, file_problems = _parse_ini(config_path)
        problems.extend(file_problems)
        for (section, key), (value, lineno) in pairs.items():
            if section == "run" and key == "command":
                if value != command:
                    problems.append(
                        f"{config_path}:{lineno}: config command {value!r} does "
                        f"not match invoked subcommand {command!r}"
                    )
                continue
            typ = _SCHEMA[(section, key)]
            try:
                typed = typ(value)
            except ValueError:
                problems.append(
                    f"{config_path}:{lineno}: [{section}] {key} = {value!r} is "
                    f"not a valid {typ.__name__}"
                )
                continue
            setattr(cfg, _FIELD_BY_KEY[(section, key)], typed)
    for name, value in overrides.items():
        if value is not None:
            setattr(cfg, name, value)

    # range checks: every referenced value must be valid for its target module
    if cfg.rabi is None:
        problems.append("missing required key: [physics] rabi (or --rabi)")
    elif cfg.rabi <= 0:
        problems.append(f"[physics] rabi must be > 0, got {cfg.rabi}")
    if not np.isfinite(cfg.detuning):
        problems.append("[physics] detuning must be finite")
    if cfg.workers < 1:
        problems.append(f"[run] workers must be >= 1, got {cfg.workers}")
    if cfg.units not in ("gamma", "omega_plus"):
        problems.append(f"[grid] units must be gamma|omega_plus, got {cfg.units!r}")
    if cfg.grid_count is not None and cfg.grid_count < 2:
        problems.append(f"[grid] count must be >= 2, got {cfg.grid_count}")
    if cfg.grid_min >= cfg.grid_max:
        problems.append(
            f"[grid] min {cfg.grid_min} must be < max {cfg.grid_max}"
        )
    if cfg.gamma_filter is not None and cfg.gamma_filter <= 0:
        problems.append(f"[filter] gamma_filter must be > 0, got {cfg.gamma_filter}")
    if cfg.tau_max <= 0:
        problems.append(f"[tau] max must be > 0, got {cfg.tau_max}")
    if cfg.tau_count < 2:
        problems.append(f"[tau] count must be >= 2, got {cfg.tau_count}")
    if cfg.epsilon is not None and cfg.epsilon <= 0:
        problems.append(f"[epsilon] epsilon must be > 0, got {cfg.epsilon}")
    if command == "g2tau":
        if cfg.omega1 is None:
            problems.append("missing required key: [sensors] omega1 (or --omega1)")
        if cfg.omega2 is None:
            problems.append("missing required key: [sensors] omega2 (or --omega2)")
    if command == "bundle":
        if cfg.bundle_n < 2:
            problems.append(f"[bundle] n must be >= 2, got {cfg.bundle_n}")
        if cfg.cavity_coupling <= 0:
            problems.append("[bundle] cavity_coupling must be > 0")
        if cfg.cavity_decay <= 0:
            problems.append("[bundle] cavity_decay must be > 0")
        if cfg.fock_truncation < 2 * cfg.bundle_n + 2:
            problems.append(
                f"[bundle] fock_truncation {cfg.fock_truncation} < 2n+2 = "
                f"{2 * cfg.bundle_n + 2}"
            )
    if problems:
        raise ConfigError(problems)
    return cfg


_COMMAND_DEFAULTS = {
    "spectrum": {"grid_count": 801},
    "g2map": {"grid_count": 101, "gamma_filter": DEFAULT_GAMMA_FILTER},
    "g2tau": {"grid_count": 101, "gamma_filter": DEFAULT_GAMMA_FILTER},
    "bundle": {"grid_count": 101},
    "leapfrog-check": {"grid_count": 101, "gamma_filter": DEFAULT_GAMMA_FILTER},
}


def _write_manifest(cfg: RunConfig, path: str, results: dict, wall_time: float):
    lines = [
        "[run]",
        f"command = {cfg.command}",
        f"out = {cfg.out}",
        f"workers = {cfg.workers}",
        "",
        "[physics]",
        f"rabi = {_format(cfg.rabi)}",
        f"detuning = {_format(cfg.detuning)}",
        "",
        "[grid]",
        f"min = {_format(cfg.grid_min)}",
        f"max = {_format(cfg.grid_max)}",
        f"count = {cfg.grid_count}",
        f"units = {cfg.units}",
        "",
        "[tau]",
        f"max = {_format(cfg.tau_max)}",
        f"count = {cfg.tau_count}",
    ]
    if cfg.gamma_filter is not None:
        lines += ["", "[filter]", f"gamma_filter = {_format(cfg.gamma_filter)}"]
    if cfg.omega1 is not None or cfg.omega2 is not None:
        lines += ["", "[sensors]"]
        if cfg.omega1 is not None:
            lines.append(f"omega1 = {_format(cfg.omega1)}")
        if cfg.omega2 is not None:
            lines.append(f"omega2 = {_format(cfg.omega2)}")
    if cfg.command == "bundle":
        lines += [
            "",
            "[bundle]",
            f"n = {cfg.bundle_n}",
            f"cavity_coupling = {_format(cfg.cavity_coupling)}",
            f"cavity_decay = {_format(cfg.cavity_decay)}",
            f"fock_truncation = {cfg.fock_truncation}",
        ]
    if cfg.epsilon is not None:
        lines += ["", "[epsilon]", f"epsilon = {_format(cfg.epsilon)}"]
    lines += ["", "[result]", f"version = {VERSION}", f"command = {cfg.command}"]
    for key, value in results.items():
        lines.append(f"{key} = {value}")
    lines.append(f"wall_time_s = {wall_time:.3f}")
    _atomic_write(path, "\n".join(lines) + "\n")


def _run_spectrum(cfg: RunConfig, out_dir: str, results: dict):
    grid = cfg.grid()
    result = spectrum_sweep(cfg.physics(), grid, cfg.gamma_filter)
    meta = {"rabi": _format(cfg.rabi), "detuning": _format(cfg.detuning)}
    if cfg.gamma_filter is not None:
        meta["gamma_filter"] = _format(cfg.gamma_filter)
    try:
        omega_plus = dressed_structure(cfg.physics()).splitting
        meta["omega_plus"] = _format(omega_plus)
        results["omega_plus"] = _format(omega_plus)
    except RegimeError:
        pass
    write_spectrum(result, os.path.join(out_dir, "spectrum.csv"), grid, meta)
    return EXIT_OK


def _run_g2map(cfg: RunConfig, out_dir: str, results: dict):
    cmap = g2_map(
        cfg.physics(), cfg.grid(), cfg.gamma_filter, cfg.workers, cfg.epsilon
    )
    results["omega_plus"] = _format(cmap.omega_plus)
    results["epsilon"] = _format(cmap.epsilon)
    results["epsilon_drift_max"] = _format(cmap.epsilon_drift_max)
    write_map(cmap, os.path.join(out_dir, "g2map.csv"))
    return EXIT_OK


def _sensor_freqs_gamma(cfg: RunConfig) -> tuple[float, float, float | None]:
    """omega1/omega2 converted from grid units to gamma units."""
    if cfg.units == "omega_plus":
        omega_plus = dressed_structure(cfg.physics()).splitting
        return cfg.omega1 * omega_plus, cfg.omega2 * omega_plus, omega_plus
    try:
        omega_plus = dressed_structure(cfg.physics()).splitting
    except RegimeError:
        omega_plus = None
    return cfg.omega1, cfg.omega2, omega_plus


def _run_g2tau(cfg: RunConfig, out_dir: str, results: dict):
    w1, w2, omega_plus = _sensor_freqs_gamma(cfg)
    taus = np.linspace(0.0, cfg.tau_max, cfg.tau_count)
    s1 = SensorSpec(w1, cfg.gamma_filter, cfg.epsilon)
    s2 = SensorSpec(w2, cfg.gamma_filter, cfg.epsilon)
    result = filtered_g2_tau(rf_model(cfg.physics()), s1, s2, taus)
    meta = {
        "rabi": _format(cfg.rabi),
        "detuning": _format(cfg.detuning),
        "gamma_filter": _format(cfg.gamma_filter),
        "omega1_gamma": _format(w1),
        "omega2_gamma": _format(w2),
    }
    if omega_plus is not None:
        meta["omega_plus"] = _format(omega_plus)
        results["omega_plus"] = _format(omega_plus)
    write_g2_tau(result, os.path.join(out_dir, "g2tau.csv"), meta)
    return EXIT_OK


def _cavity_g2(model) -> tuple[float, float]:
    result = g2_tau_unfiltered(model, np.array([0.0]))
    rho = steady_state(liouvillian(model))
    population = expval(rho, model.emission_op.dag() @ model.emission_op).real
    return float(result.values[0]), population


def _run_bundle(cfg: RunConfig, out_dir: str, results: dict):
    params = BundleParams(
        cfg.bundle_n, cfg.cavity_coupling, cfg.cavity_decay, cfg.fock_truncation
    )
    model = bundle_model(cfg.physics(), params)
    tail = check_truncation(model)
    splitting = dressed_structure(cfg.physics()).splitting
    g2_bundle, pop = _cavity_g2(model)
    g2_reference, _ = _cavity_g2(bundle_reference_model(cfg.physics(), params))
    results["omega_plus"] = _format(splitting)
    rows = [
        ("omega_cavity_gamma", splitting / cfg.bundle_n),
        ("g2_bundle", g2_bundle),
        ("g2_reference_at_peak", g2_reference),
        ("cavity_population", pop),
        ("truncation_tail", tail),
    ]
    lines = [
        "#kind=bundle",
        f"#rabi={_format(cfg.rabi)}",
        f"#n={cfg.bundle_n}",
        f"#omega_plus={_format(splitting)}",
        "quantity,value",
    ]
    lines += [f"{name},{_format(value)}" for name, value in rows]
    _atomic_write(os.path.join(out_dir, "bundle.csv"), "\n".join(lines) + "\n")
    return EXIT_OK


# central-line sample abscissas for the leapfrog check, in splitting units;
# chosen off every peak by more than 2 * gamma_filter at the defaults
_LEAPFROG_SAMPLES = (0.3, 0.45, 0.6, 0.75, 1.2)


def _run_leapfrog_check(cfg: RunConfig, out_dir: str, results: dict):
    structure = dressed_structure(cfg.physics())
    model = rf_model(cfg.physics())
    print(
        "predicted two-photon sums (gamma units): "
        + ", ".join(_format(s) for s in structure.leapfrog_sums)
    )
    rows = []
    all_bunched = True
    for x in _LEAPFROG_SAMPLES:
        w1 = x * structure.splitting
        w2 = -w1  # central antidiagonal: omega1 + omega2 = 0
        value = filtered_g2(
            model,
            SensorSpec(w1, cfg.gamma_filter, cfg.epsilon),
            SensorSpec(w2, cfg.gamma_filter, cfg.epsilon),
        ).value
        rows.append((w1, w2, value))
        all_bunched &= value > 1.0
        print(f"g2(omega1={w1:+.4f}, omega2={w2:+.4f}) = {value:.4f}")
    results["omega_plus"] = _format(structure.splitting)
    lines = [
        "#kind=leapfrog-check",
        f"#rabi={_format(cfg.rabi)}",
        f"#gamma_filter={_format(cfg.gamma_filter)}",
        f"#omega_plus={_format(structure.splitting)}",
        "omega1,omega2,g2",
    ]
    lines += [f"{_format(a)},{_format(b)},{_format(v)}" for a, b, v in rows]
    _atomic_write(os.path.join(out_dir, "leapfrog.csv"), "\n".join(lines) + "\n")
    print("leapfrog check:", "PASS" if all_bunched else "FAIL")
    return EXIT_OK if all_bunched else EXIT_CHECK_FAILED


_RUNNERS = {
    "spectrum": _run_spectrum,
    "g2map": _run_g2map,
    "g2tau": _run_g2tau,
    "bundle": _run_bundle,
    "leapfrog-check": _run_leapfrog_check,
}


def run(cfg: RunConfig) -> int:
    """Execute a validated config; returns the process exit status."""
    start = time.monotonic()
    out_dir = cfg.out
    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as exc:
        print(f"error: cannot create output dir {out_dir}: {exc}", file=sys.stderr)
        return EXIT_IO
    results: dict = {}
    try:
        status = _RUNNERS[cfg.command](cfg, out_dir, results)
    except _MODEL_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except _NUMERICAL_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except VanishingPopulationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VANISHING
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    wall = time.monotonic() - start
    try:
        _write_manifest(cfg, os.path.join(out_dir, "manifest"), results, wall)
    except OSError as exc:
        print(f"error writing manifest: {exc}", file=sys.stderr)
        return EXIT_IO
    return status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mollow",
        description=(
            "Emission spectra and frequency-filtered photon correlations of a "
            "driven two-level emitter (rates in units of its decay rate gamma)."
        ),
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="sectioned key=value file")
    common.add_argument("--out", metavar="DIR", help="output directory")
    common.add_argument("--workers", type=int, metavar="N")
    common.add_argument("--rabi", type=float, metavar="OMEGA_R")
    common.add_argument("--detuning", type=float, metavar="DELTA")
    common.add_argument("--gamma-filter", type=float, metavar="GAMMA")
    common.add_argument("--grid-min", type=float, metavar="W")
    common.add_argument("--grid-max", type=float, metavar="W")
    common.add_argument("--grid-count", type=int, metavar="N")
    common.add_argument("--units", choices=("gamma", "omega_plus"))
    common.add_argument("--n", type=int, metavar="N", help="bundle photon number")
    common.add_argument("--tau-max", type=float, metavar="T")
    common.add_argument("--tau-count", type=int, metavar="N")
    common.add_argument("--omega1", type=float, metavar="W", help="in grid units")
    common.add_argument("--omega2", type=float, metavar="W", help="in grid units")
    common.add_argument("--epsilon", type=float, metavar="EPS")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("spectrum", parents=[common], help="emission spectrum CSV")
    sub.add_parser("g2map", parents=[common], help="two-photon correlation map CSV")
    sub.add_parser("g2tau", parents=[common], help="filtered g2(tau) CSV")
    sub.add_parser("bundle", parents=[common], help="cavity bundle comparison")
    sub.add_parser(
        "leapfrog-check", parents=[common], help="verify bunching on the central line"
    )
    return parser


_FLAG_FIELDS = {
    "out": "out",
    "workers": "workers",
    "rabi": "rabi",
    "detuning": "detuning",
    "gamma_filter": "gamma_filter",
    "grid_min": "grid_min",
    "grid_max": "grid_max",
    "grid_count": "grid_count",
    "units": "units",
    "n": "bundle_n",
    "tau_max": "tau_max",
    "tau_count": "tau_count",
    "omega1": "omega1",
    "omega2": "omega2",
    "epsilon": "epsilon",
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {
        field_name: getattr(args, flag)
        for flag, field_name in _FLAG_FIELDS.items()
    }
    try:
        cfg = parse_config(args.command, args.config, overrides)
    except ConfigError as exc:
        for problem in exc.problems:
            print(f"config error: {problem}", file=sys.stderr)
        return EXIT_CONFIG
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
