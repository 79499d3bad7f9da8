"""
Simple example: closed-form UL spectral efficiency of one network drop.

Drops the 16-cell setup once, evaluates MR combining with MMSE and LS estimates
under Rician and Rayleigh fading, and prints the sum SE per cell.

Requirements:
- Python dependencies installed (pip install -r requirements.txt)

Usage:
    python example_simple.py [num_antennas]
"""

import sys
from pathlib import Path

import numpy as np

# Add project root to path
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

from src.experiments import build_experiment_config
from src.experiments.runners import realize_drop
from src.se_closed_form import evaluate_network


def main():
    """Evaluate one drop and print a per-estimator summary."""
    antennas = int(sys.argv[1]) if len(sys.argv) > 1 else 100

    print("=" * 80)
    print(f"Massive MIMO UL - closed-form SE of one drop (M = {antennas})")
    print("=" * 80)

    experiment = build_experiment_config(scenario='paper-fig1', overrides={'drops': 1})
    config = experiment.system_config()
    base = realize_drop(experiment, drop=0).with_antennas(antennas)

    print(f"\nCells: {config.num_cells}, UEs per cell: {config.ues_per_cell}, "
          f"tau_p: {config.tau_p}, tau_c: {config.tau_c}")
    print(f"UEs served outside their drop cell: "
          f"{int(np.sum(base.serving != np.arange(config.num_ues) // config.ues_per_cell))}\n")

    print(f"{'fading':10s} {'estimator':10s} {'sum SE/cell':>12s} {'min UE SE':>10s} {'max UE SE':>10s}")
    print("-" * 56)
    for fading in ('rician', 'rayleigh'):
        realization = base.with_fading(fading == 'rayleigh')
        for estimator in ('mmse', 'ls'):
            se = np.array([result.se for result in evaluate_network(realization, estimator)])
            print(f"{fading:10s} {estimator:10s} {se.sum() / config.num_cells:12.3f} "
                  f"{se.min():10.3f} {se.max():10.3f}")

    print("\nSE in bit/s/Hz. Run `python -m src.main.app fig1` for the full sweep.")


if __name__ == "__main__":
    main()
