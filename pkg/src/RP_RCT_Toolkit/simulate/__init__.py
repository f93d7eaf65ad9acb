"""
Synthetic RP-RCT populations, the protocol itself and Monte Carlo studies.
"""
from .behaviors import HONEST, CheaterBehavior, behavior_code, behavior_label
from .population import (
    CASE_STUDY_OUTCOMES,
    CovariateSpec,
    LatentPopulation,
    OutcomeModel,
    PopulationConfig,
    case_study_population,
    generate_population,
)
from .power import PowerPoint, power_study
from .protocol import TruthSidecar, run_protocol, run_protocol_outcomes, true_ate, true_tau_h
from .replicate import (
    BehaviorBias,
    EstimatorSummary,
    LambdaSummary,
    MonteCarloSummary,
    ReplicateOptions,
    behavior_bias_study,
    replicate,
    run_replicate,
    summarize,
)

__all__ = [
    'HONEST',
    'CheaterBehavior',
    'behavior_code',
    'behavior_label',
    'CASE_STUDY_OUTCOMES',
    'CovariateSpec',
    'LatentPopulation',
    'OutcomeModel',
    'PopulationConfig',
    'case_study_population',
    'generate_population',
    'PowerPoint',
    'power_study',
    'TruthSidecar',
    'run_protocol',
    'run_protocol_outcomes',
    'true_ate',
    'true_tau_h',
    'BehaviorBias',
    'EstimatorSummary',
    'LambdaSummary',
    'MonteCarloSummary',
    'ReplicateOptions',
    'behavior_bias_study',
    'replicate',
    'run_replicate',
    'summarize',
]
