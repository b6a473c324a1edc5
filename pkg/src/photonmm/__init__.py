"""Simulator and analysis toolkit for a gated single-photon interferometer.

Three candidate outcome models -- joint-at-detection quantum statistics,
independence beyond a light-speed signaling threshold, and an ether-drift
fringe shift -- as exact distributions, a seeded Monte Carlo trial engine,
and the statistics to tell the models apart from recorded counts.
"""

from .analysis import (
    SWEEP_CSV_HEADER,
    DiscriminationReport,
    RateEstimate,
    SweepRow,
    Verdict,
    default_phase_grid,
    discriminate,
    estimate_rates,
    format_number,
    sample_size_for_power,
    sweep_phase,
    wilson_interval,
    write_sweep_csv,
)
from .errors import ConfigurationError, DataInconsistencyError, EmptyLedgerError
from .ether import (
    EtherConfig,
    ether_joint,
    ether_phase_shift,
    ether_time_difference,
    required_arm_length,
)
from .models import (
    ROUNDED_LIGHT_SPEED,
    SPEED_OF_LIGHT,
    TWO_PI,
    ModelId,
    OpticalGeometry,
    OutcomeDistribution,
    SeparationRegime,
    canonical_phase,
    coincidence_rate_change,
    local_joint,
    phase_from_geometry,
    phase_shift_for_rate_change,
    quantum_joint,
    separation_regime,
    single_detector_probability,
)
from .simulate import (
    OUTCOME_ORDER,
    RNG_ALGORITHM,
    ExperimentConfig,
    JointOutcome,
    TrialLedger,
    resolve_distribution,
    run,
    sample_trial,
)

__all__ = [
    "ConfigurationError",
    "DataInconsistencyError",
    "DiscriminationReport",
    "EmptyLedgerError",
    "EtherConfig",
    "ExperimentConfig",
    "JointOutcome",
    "ModelId",
    "OpticalGeometry",
    "OutcomeDistribution",
    "OUTCOME_ORDER",
    "RateEstimate",
    "RNG_ALGORITHM",
    "ROUNDED_LIGHT_SPEED",
    "SPEED_OF_LIGHT",
    "SWEEP_CSV_HEADER",
    "SeparationRegime",
    "SweepRow",
    "TWO_PI",
    "TrialLedger",
    "Verdict",
    "canonical_phase",
    "coincidence_rate_change",
    "default_phase_grid",
    "discriminate",
    "estimate_rates",
    "ether_joint",
    "ether_phase_shift",
    "ether_time_difference",
    "format_number",
    "local_joint",
    "phase_from_geometry",
    "phase_shift_for_rate_change",
    "quantum_joint",
    "required_arm_length",
    "resolve_distribution",
    "run",
    "sample_size_for_power",
    "sample_trial",
    "separation_regime",
    "single_detector_probability",
    "sweep_phase",
    "wilson_interval",
    "write_sweep_csv",
]

__version__ = "0.1.0"
