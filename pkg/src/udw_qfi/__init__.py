"""Phase-estimation quantum Fisher information for a uniformly accelerated
two-level detector coupled to a massless scalar vacuum, with and without two
perpendicular reflecting mirrors."""

from .dynamics import (
    BlochState,
    DecayRates,
    DetectorParams,
    GeneratorMatrix,
    NegativeRateError,
    decay_rates,
    evolve_analytic,
    evolve_numeric_oracle,
    generator,
)
from .field_response import (
    OracleConvergenceError,
    RegularizationFault,
    ResponseValue,
    WightmanParams,
    boundary_bracket,
    f1,
    f2,
    response,
    response_numeric_oracle,
    wightman,
)
from .geometry import BoundaryConfig, RindlerWorldline, image_distances, worldline_coords
from .metrology import (
    PhaseState,
    QfiRecord,
    SpectralDecomposition,
    cramer_rao,
    density_from_bloch,
    dphi_rho,
    evolve_phase_state,
    qfi_closed_form,
    qfi_general,
    qfi_max_eq22,
    qfi_record,
    spectral,
)
from .sweep import FixedParams, RunManifest, SweepResult, SweepSpec, run_preset, run_sweep

__version__ = "0.1.0"

__all__ = [
    "BlochState",
    "BoundaryConfig",
    "DecayRates",
    "DetectorParams",
    "FixedParams",
    "GeneratorMatrix",
    "NegativeRateError",
    "OracleConvergenceError",
    "PhaseState",
    "QfiRecord",
    "RegularizationFault",
    "ResponseValue",
    "RindlerWorldline",
    "RunManifest",
    "SpectralDecomposition",
    "SweepResult",
    "SweepSpec",
    "WightmanParams",
    "boundary_bracket",
    "cramer_rao",
    "decay_rates",
    "density_from_bloch",
    "dphi_rho",
    "evolve_analytic",
    "evolve_numeric_oracle",
    "evolve_phase_state",
    "f1",
    "f2",
    "generator",
    "image_distances",
    "qfi_closed_form",
    "qfi_general",
    "qfi_max_eq22",
    "qfi_record",
    "response",
    "response_numeric_oracle",
    "run_preset",
    "run_sweep",
    "spectral",
    "wightman",
    "worldline_coords",
]
