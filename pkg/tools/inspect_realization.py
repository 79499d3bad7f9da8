"""
Print the geometry and per-UE closed-form breakdown of one network drop.

Useful when a UE has a surprising SE: shows its serving BS, pilot, distance,
gains, Rician factor and the signal, interference and noise terms of its SINR.

Usage:
    python tools/inspect_realization.py [--scenario validate] [--drop 0] [--antennas 32] [--estimator mmse]
"""

import argparse
import os
import sys

import numpy as np

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.experiments import build_experiment_config
from src.experiments.runners import realize_drop
from src.se_closed_form import evaluate_network


def main():
    """Print one row per UE."""
    parser = argparse.ArgumentParser(description=__doc__.split('\n\n')[0])
    parser.add_argument('--scenario', default='validate', choices=['paper-fig1', 'paper-fig2', 'validate'])
    parser.add_argument('--drop', type=int, default=0)
    parser.add_argument('--seed', type=int, default=None)
    parser.add_argument('--antennas', type=int, default=32)
    parser.add_argument('--estimator', default='mmse', choices=['mmse', 'ls'])
    parser.add_argument('--rayleigh', action='store_true')
    args = parser.parse_args()

    experiment = build_experiment_config(scenario=args.scenario, overrides={'seed': args.seed})
    realization = realize_drop(experiment, args.drop).with_antennas(args.antennas).with_fading(args.rayleigh)
    config = realization.config
    results = evaluate_network(realization, args.estimator)

    print("=" * 100)
    print(f"Drop {args.drop} of {args.scenario} (seed {experiment.seed}), M = {config.num_antennas}, "
          f"{args.estimator.upper()}, {'Rayleigh' if args.rayleigh else 'Rician'}")
    print("=" * 100)
    print(f"{'UE':>4s} {'cell':>4s} {'BS':>3s} {'pilot':>5s} {'copilots':>8s} {'dist m':>8s} {'LoS dB':>8s} "
          f"{'NLoS dB':>8s} {'kappa dB':>9s} {'SINR dB':>8s} {'SE':>7s}")
    print("-" * 100)
    for ue, result in enumerate(results):
        bs = result.bs
        los = realization.beta_los_db[bs, ue]
        nlos = realization.beta_nlos_db[bs, ue]
        kappa = -np.inf if realization.rayleigh else los - nlos
        copilots = int(np.sum(realization.pilots == realization.pilots[ue])) - 1
        sinr_db = 10 * np.log10(result.sinr) if result.sinr > 0 else -np.inf
        print(f"{ue:4d} {ue // config.ues_per_cell:4d} {bs:3d} {int(realization.pilots[ue]):5d} {copilots:8d} "
              f"{realization.distances[bs, ue]:8.1f} {los:8.1f} {nlos:8.1f} {kappa:9.1f} "
              f"{sinr_db:8.2f} {result.se:7.3f}")

    se = np.array([result.se for result in results])
    print("-" * 100)
    print(f"Sum SE per cell: {se.sum() / config.num_cells:.3f} bit/s/Hz")


if __name__ == "__main__":
    main()
