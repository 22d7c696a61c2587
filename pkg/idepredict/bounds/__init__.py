"""
Reference bounds

- crlb: CRLB (scalar and joint) and the misspecified CRLB
- hcrb: Single-test-point Hammersley-Chapman-Robbins bound
- bayesian: Minimum binary error probability, Ziv-Zakai bound and Bayesian CRLB
"""

from .crlb import BoundKind, BoundValue, crlb_scalar, crlb_joint, mcrlb_parametric_mean
from .hcrb import hcrb_single_test_point, default_test_points
from .bayesian import p_min_e, zzb, bcrlb

__all__ = [
    'BoundKind',
    'BoundValue',
    'crlb_scalar',
    'crlb_joint',
    'mcrlb_parametric_mean',
    'hcrb_single_test_point',
    'default_test_points',
    'p_min_e',
    'zzb',
    'bcrlb',
]
