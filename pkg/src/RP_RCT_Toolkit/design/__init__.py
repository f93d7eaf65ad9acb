"""
Design of RP-RCTs: privacy/parameter conversion and the cost of privacy.
"""
from .design_spec import DEFAULT_GAP, DesignSpec, LambdaCoefficients, solve_frr_for_epsilon
from .efficiency import (
    EfficiencyQuote,
    private_variance,
    relative_efficiency,
    relative_efficiency_for_spec,
    required_n,
    sample_size,
)
from .report import DesignReport, design_report

__all__ = [
    'DEFAULT_GAP',
    'DesignSpec',
    'LambdaCoefficients',
    'solve_frr_for_epsilon',
    'EfficiencyQuote',
    'private_variance',
    'relative_efficiency',
    'relative_efficiency_for_spec',
    'required_n',
    'sample_size',
    'DesignReport',
    'design_report',
]
