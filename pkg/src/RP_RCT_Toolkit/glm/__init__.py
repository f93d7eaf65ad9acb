"""
Logistic working models: IRLS fitting, AIC selection, prediction with
missing covariates.
"""
from .encoder import INTERCEPT, DesignEncoder
from .irls import FitOptions, LogisticModel, fit, fit_frame, log_likelihood, predict, score
from .selection import select_aic
from .working import WorkingModels, fit_working_models

__all__ = [
    'INTERCEPT',
    'DesignEncoder',
    'FitOptions',
    'LogisticModel',
    'fit',
    'fit_frame',
    'log_likelihood',
    'predict',
    'score',
    'select_aic',
    'WorkingModels',
    'fit_working_models',
]
