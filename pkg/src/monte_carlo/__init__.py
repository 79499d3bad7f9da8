"""
Monte Carlo Module

Sampling oracle for the closed forms: counter-based substreams, complex Gaussian
sampling, block-wise moment accumulation and per-UE validation reports.
"""

from .accumulator import MomentAccumulator
from .config import McConfig
from .engine import McMoments, accumulate_moments, mc_moments
from .rng import STREAM_CHANNELS, STREAM_LAYOUT, substream
from .sampling import cn_factor, sample_cn, standard_cn
from .validation import SeReport, mc_sinr, summarize, validate

__all__ = [
    'McConfig',
    'McMoments',
    'MomentAccumulator',
    'SeReport',
    'STREAM_LAYOUT',
    'STREAM_CHANNELS',
    'substream',
    'standard_cn',
    'cn_factor',
    'sample_cn',
    'accumulate_moments',
    'mc_moments',
    'mc_sinr',
    'validate',
    'summarize',
]
