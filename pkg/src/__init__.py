"""
Rician Massive MIMO Uplink Simulator Package

Closed-form and Monte Carlo uplink spectral efficiency for multi-cell Massive MIMO
with spatially correlated Rician fading, MMSE/LS channel estimation and MR combining.
"""

__version__ = "0.1.0"
