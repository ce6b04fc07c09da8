"""
Features Package
Test wavefunctions, CV discretisation, boxed unitaries and twirls, the
design map R and the QECM
"""

from .cvdisc import discretize_density, discretize_pure, projection_bound, staircase_profile
from .design import apply_R, apply_R_power, norm_on_K
from .encryption import avg_ciphertext, decrypt, delta_bound, encrypt, sample_key
from .twirl import boxed_unitary, exact_double_twirl, exact_single_twirl, mc_double_twirl

__all__ = [
    'discretize_density',
    'discretize_pure',
    'projection_bound',
    'staircase_profile',
    'apply_R',
    'apply_R_power',
    'norm_on_K',
    'avg_ciphertext',
    'decrypt',
    'delta_bound',
    'encrypt',
    'sample_key',
    'boxed_unitary',
    'exact_double_twirl',
    'exact_single_twirl',
    'mc_double_twirl',
]
