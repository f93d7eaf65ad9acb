"""
Estimators for privatized, possibly contaminated RP-RCT data.
"""
from .balance import BalanceRow, covariate_balance
from .bootstrap import BootstrapResult, ModelPolicy, bootstrap_se
from .cheaters import estimate_lambda, profile_log_likelihood
from .dataset import MultiOutcomeDataset, PrivateDataset
from .effects import estimate_classical, estimate_tau_h_cov, estimate_tau_h_diff, wald_test
from .report import EstimateReport, estimate_outcome, estimate_outcomes
from .types import CheaterEstimate, EffectEstimate, Method, WaldResult

__all__ = [
    'BalanceRow',
    'covariate_balance',
    'BootstrapResult',
    'ModelPolicy',
    'bootstrap_se',
    'estimate_lambda',
    'profile_log_likelihood',
    'MultiOutcomeDataset',
    'PrivateDataset',
    'estimate_classical',
    'estimate_tau_h_cov',
    'estimate_tau_h_diff',
    'wald_test',
    'EstimateReport',
    'estimate_outcome',
    'estimate_outcomes',
    'CheaterEstimate',
    'EffectEstimate',
    'Method',
    'WaldResult',
]
