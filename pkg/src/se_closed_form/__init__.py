"""
Closed-Form SE Module

Rigorous closed-form UL SINR and SE of MR combining with MMSE or LS channel
estimates under correlated Rician fading and pilot contamination.
"""

from .breakdown import SinrBreakdownLs, SinrBreakdownMmse, se_from_sinr
from .ls import ls_cross_moment, ls_moments, sinr_ls
from .mmse import ROUTE_RTOL, mmse_cross_moment, mmse_signal_moments, sinr_mmse
from .network_eval import SinrBreakdown, closed_form_sinr, evaluate_network

__all__ = [
    'SinrBreakdownMmse',
    'SinrBreakdownLs',
    'SinrBreakdown',
    'ROUTE_RTOL',
    'se_from_sinr',
    'mmse_signal_moments',
    'mmse_cross_moment',
    'sinr_mmse',
    'ls_moments',
    'ls_cross_moment',
    'sinr_ls',
    'closed_form_sinr',
    'evaluate_network',
]
