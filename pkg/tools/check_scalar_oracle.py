"""
Check the closed forms and the Monte Carlo engine on the scalar single-UE case.

With M=1, K=1, L=1, beta=1, p=1, tau_p=1, sigma^2=1 and no LoS, every moment is known
by hand: MMSE gives E{v^H h} = 0.5, E{|v^H h|^2} = 0.75 and SINR 0.25; LS gives
eta = 1, mu = 2, chi = 3 and SINR 0.25.

Usage:
    python tools/check_scalar_oracle.py [--trials 100000] [--seed 0]
"""

import argparse
import os
import sys

import numpy as np

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.channel_model.data_structures import LinkStats, SystemConfig
from src.estimation.serving_cell import ServingCell
from src.monte_carlo.engine import McMoments
from src.monte_carlo.accumulator import MomentAccumulator
from src.monte_carlo.rng import substream
from src.monte_carlo.sampling import standard_cn
from src.monte_carlo.validation import mc_sinr
from src.se_closed_form import ls_cross_moment, ls_moments, sinr_ls, sinr_mmse

EXPECTED_SINR = 0.25


def scalar_cell() -> ServingCell:
    config = SystemConfig(
        num_antennas=1, ues_per_cell=1, num_cells=1, tau_c=2, tau_p=1,
        ul_power_mw=1.0, noise_power_mw=1.0,
    )
    link = LinkStats(mean=np.zeros(1), cov=np.eye(1), beta_los_db=0.0, beta_nlos_db=0.0, angle_rad=0.0)
    return ServingCell.from_links([link], [0], config)


def sampled_sinr(cell: ServingCell, estimator: str, trials: int, seed: int):
    """SINR from direct sampling of h and the pilot noise."""
    rng = substream(seed, 0)
    h = standard_cn(rng, (trials, 1))
    y = h + standard_cn(rng, (trials, 1))
    v = 0.5 * y if estimator == 'mmse' else y
    vh = np.sum(v.conj() * h, axis=1)
    features = np.column_stack([vh.real, vh.imag, np.abs(vh) ** 2, np.sum(np.abs(v) ** 2, axis=1), np.abs(vh) ** 2])
    acc = MomentAccumulator.from_samples(features)
    moments = McMoments.from_accumulator(acc, 0, 0, estimator, cell.powers)
    return mc_sinr(moments, cell.config)


def main():
    """Print closed-form and sampled results next to the hand-computed values."""
    parser = argparse.ArgumentParser(description=__doc__.split('\n\n')[0])
    parser.add_argument('--trials', type=int, default=100_000)
    parser.add_argument('--seed', type=int, default=0)
    args = parser.parse_args()

    cell = scalar_cell()
    mmse = sinr_mmse(cell, 0)
    ls = sinr_ls(cell, 0)
    eta, mu = ls_moments(cell, 0)

    print("=" * 70)
    print("Scalar oracle: M=1, K=1, L=1, beta=1, p=1, tau_p=1, sigma^2=1")
    print("=" * 70)
    print(f"MMSE closed form:  SINR = {mmse.sinr:.15f}  (expected {EXPECTED_SINR})")
    print(f"LS closed form:    SINR = {ls.sinr:.15f}  (expected {EXPECTED_SINR})")
    print(f"LS moments:        eta = {eta.real:.15f}, mu = {mu:.15f}, chi = {ls_cross_moment(cell, 0, 0):.15f}")

    ok = abs(mmse.sinr - EXPECTED_SINR) < 1e-12 and abs(ls.sinr - EXPECTED_SINR) < 1e-12
    for estimator in ('mmse', 'ls'):
        sinr, std_error = sampled_sinr(cell, estimator, args.trials, args.seed)
        within = abs(sinr - EXPECTED_SINR) <= 5 * std_error
        ok = ok and within
        print(f"{estimator.upper():4s} sampled:      SINR = {sinr:.5f} +- {std_error:.5f}  "
              f"({'ok' if within else 'OUTSIDE 5 SE'})")

    print()
    print("PASS" if ok else "FAIL")
    return 0 if ok else 2


if __name__ == "__main__":
    sys.exit(main())
