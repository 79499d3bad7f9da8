"""
Estimation Module

Pilot processing and the MMSE / LS channel estimators with their exact statistics.
"""

from .estimators import (
    ESTIMATORS,
    EstimateStats,
    Estimator,
    estimate_stats,
    ls_estimate,
    ls_estimate_stats,
    mmse_error_cov,
    mmse_estimate,
    mmse_estimate_stats,
)
from .pilot_processing import PilotGroupStats, pilot_noise, processed_pilot, psi_matrix
from .serving_cell import ServingCell, estimation_mse, serving_cell

__all__ = [
    'Estimator',
    'ESTIMATORS',
    'PilotGroupStats',
    'EstimateStats',
    'ServingCell',
    'psi_matrix',
    'processed_pilot',
    'pilot_noise',
    'mmse_estimate',
    'mmse_error_cov',
    'mmse_estimate_stats',
    'ls_estimate',
    'ls_estimate_stats',
    'estimate_stats',
    'serving_cell',
    'estimation_mse',
]
