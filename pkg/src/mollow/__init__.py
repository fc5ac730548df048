"""Emission spectra and frequency-filtered photon correlations of small open
quantum systems, built on Liouvillian steady states, the quantum regression
rule and weakly coupled two-level sensor detectors.

All rates and frequencies are in units of the two-level decay rate gamma,
in the frame rotating at the drive frequency.
"""

from ._version import VERSION as __version__
from .dynamics import (
    DensityMatrix,
    G2TauResult,
    SpectrumResult,
    evolve_vec,
    expval,
    g2_tau_unfiltered,
    spectrum_qrt,
    steady_state,
    two_time_correlator,
)
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
    BundleParams,
    DressedStructure,
    RFParams,
    bundle_model,
    bundle_reference_model,
    dressed_structure,
    leapfrog_lines,
    rf_model,
)
from .ops import (
    GAMMA,
    LindbladModel,
    Operator,
    SpaceLayout,
    Superoperator,
    destroy,
    embed,
    identity,
    kron,
    liouvillian,
    sigma_minus,
    unvec,
    vec,
)
from .sensors import (
    FilteredG2,
    SensorSpec,
    attach_sensors,
    filtered_g2,
    filtered_g2_tau,
    filtered_gn,
    filtered_spectrum,
    sensor_populations,
)
from .sweep import (
    CorrelationMap,
    FrequencyGrid,
    g2_map,
    spectrum_sweep,
    write_g2_tau,
    write_map,
    write_spectrum,
)

__all__ = [
    "__version__",
    "GAMMA",
    "SpaceLayout",
    "Operator",
    "LindbladModel",
    "Superoperator",
    "kron",
    "embed",
    "liouvillian",
    "destroy",
    "sigma_minus",
    "identity",
    "vec",
    "unvec",
    "DensityMatrix",
    "SpectrumResult",
    "G2TauResult",
    "steady_state",
    "expval",
    "evolve_vec",
    "two_time_correlator",
    "g2_tau_unfiltered",
    "spectrum_qrt",
    "SensorSpec",
    "FilteredG2",
    "attach_sensors",
    "filtered_spectrum",
    "filtered_g2",
    "filtered_g2_tau",
    "filtered_gn",
    "sensor_populations",
    "RFParams",
    "DressedStructure",
    "BundleParams",
    "rf_model",
    "dressed_structure",
    "leapfrog_lines",
    "bundle_model",
    "bundle_reference_model",
    "FrequencyGrid",
    "CorrelationMap",
    "g2_map",
    "spectrum_sweep",
    "write_map",
    "write_spectrum",
    "write_g2_tau",
    "MollowError",
    "LayoutError",
    "DegenerateSteadyStateError",
    "SteadyStateError",
    "EigendecompositionError",
    "RegimeError",
    "VanishingPopulationError",
    "DimensionBudgetError",
    "TruncationError",
    "SweepError",
    "ConfigError",
]
