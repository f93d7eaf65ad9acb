"""
FRR privatization and differential-privacy accounting.
"""
from .frr import (
    FrrParams,
    Prompt,
    privatize,
    privatize_many,
    response_distribution,
    sample_prompt,
    sample_prompts,
)
from .privacy import (
    EpsilonVariants,
    PrivacyLoss,
    channel_epsilon,
    epsilon_from_sum,
    epsilon_general,
    epsilon_symmetric,
    epsilon_variants,
    mixture_channel,
)

__all__ = [
    'FrrParams',
    'Prompt',
    'privatize',
    'privatize_many',
    'response_distribution',
    'sample_prompt',
    'sample_prompts',
    'EpsilonVariants',
    'PrivacyLoss',
    'channel_epsilon',
    'epsilon_from_sum',
    'epsilon_general',
    'epsilon_symmetric',
    'epsilon_variants',
    'mixture_channel',
]
