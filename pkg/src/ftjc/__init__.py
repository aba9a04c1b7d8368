"""Fractional-time Jaynes-Cummings toolkit.

Closed-form dynamics of the resonant Jaynes-Cummings model under a
fractional time derivative, made unitary block by block through a
time-dependent Dyson map. The package evaluates the Mittag-Leffler
function on the complex plane (compiled core with a pure-Python
fallback), builds the per-excitation unitary blocks with a continuous
phase branch, evolves Fock and coherent seeds, computes atomic and
photon-statistics observables, and solves the inverse problem of a
time-dependent coupling reproducing the fractional inversion in the
standard model.
"""

__version__ = "0.1.0"

from ._backend import backend_name
from .errors import (ConfigError, ConsistencyError, CutoffError,
                     DegeneracyError, DomainError, EvaluationError, FtjcError,
                     GridCoarseError, InputError, InsufficientSpanError,
                     PresetError, SectorError, StepSizeError)
from .mittag import (DEFAULT_TOL, MLResult, gamma_real, ml_contour, ml_eval,
                     ml_eval_many, ml_series)
from .evolution import (IDENTITY_INIT, BlockPropagator, BlockTrajectory,
                        DysonInit, DysonMap, FractionalOrder, UnitaryBlock,
                        block_at, block_determinant, block_trajectory,
                        dyson_params, propagator_pair, tracked_log,
                        unitary_block)
from .states import (FieldDensity, JointState, TrajectoryResult, evolve,
                     evolve_trajectory, field_density, init_coherent_excited,
                     init_fock_excited, qubit_density)
from .observables import (HusimiGrid, concurrence, field_moments, husimi,
                          husimi_grid, mandel_q, mean_photon,
                          oscillation_periods, photon_parity,
                          population_inversion, quadrature_variance_x)
from .inverse import (CouplingProfile, RoundtripReport, TwoLevelResult,
                      extract_coupling, forward_two_level, roundtrip_report,
                      roundtrip_target)
from .config import OBSERVABLE_NAMES, SweepConfig, preset, preset_names
from .runner import run_experiment, time_grid, verify_manifest

__all__ = [
    "__version__",
    "backend_name",
    "FtjcError", "InputError", "DomainError", "ConfigError", "PresetError",
    "CutoffError", "SectorError", "EvaluationError", "GridCoarseError",
    "StepSizeError", "DegeneracyError", "ConsistencyError",
    "InsufficientSpanError",
    "DEFAULT_TOL", "MLResult", "gamma_real", "ml_series", "ml_contour",
    "ml_eval", "ml_eval_many",
    "FractionalOrder", "BlockPropagator", "DysonInit", "IDENTITY_INIT",
    "DysonMap", "UnitaryBlock", "BlockTrajectory", "propagator_pair",
    "block_determinant", "tracked_log", "dyson_params", "unitary_block",
    "block_at", "block_trajectory",
    "JointState", "FieldDensity", "TrajectoryResult", "init_fock_excited",
    "init_coherent_excited", "evolve", "evolve_trajectory", "field_density",
    "qubit_density",
    "population_inversion", "concurrence", "mean_photon", "photon_parity",
    "mandel_q", "field_moments", "quadrature_variance_x", "HusimiGrid",
    "husimi", "husimi_grid", "oscillation_periods",
    "CouplingProfile", "TwoLevelResult", "RoundtripReport",
    "extract_coupling", "forward_two_level", "roundtrip_target",
    "roundtrip_report",
    "OBSERVABLE_NAMES", "SweepConfig", "preset", "preset_names",
    "time_grid", "run_experiment", "verify_manifest",
]
