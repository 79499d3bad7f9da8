"""
Unit tests for experiments module.
"""

from pathlib import Path

import numpy as np
import pytest

from src.common.errors import ConfigurationError, InvalidArgumentError, OutputError
from src.experiments import (
    PRESETS,
    build_experiment_config,
    deep_merge,
    drop_cases,
    emit_plot_script,
    empirical_cdf,
    load_experiment_config,
    read_csv,
    realize_drop,
    run_fig1,
    run_fig2,
    run_validate,
    write_csv,
)
from src.experiments.output import FIG1_COLUMNS, FIG2_COLUMNS, PER_UE_COLUMNS, VALIDATE_COLUMNS, format_value

CONFIG_DIR = Path(__file__).resolve().parents[2] / 'config'
SMALL_SYSTEM = {'num_cells': 4, 'ues_per_cell': 2, 'tau_p': 2, 'tau_c': 20}


def small_experiment(tmp_path, **overrides):
    data = {
        'scenario': 'custom',
        'system': SMALL_SYSTEM,
        'sweep': [4, 8],
        'drops': 2,
        'seed': 5,
        'output': str(tmp_path / 'out.csv'),
    }
    data.update(overrides)
    return build_experiment_config(data)


class TestExperimentConfig:
    """Test preset merging and validation."""

    def test_presets_validate(self):
        """Test every preset is a valid experiment on its own."""
        for scenario in PRESETS:
            experiment = build_experiment_config(scenario=scenario)
            assert experiment.scenario == scenario

    def test_fig1_preset(self):
        """Test the antenna sweep defaults."""
        experiment = build_experiment_config(scenario='paper-fig1')
        assert experiment.sweep == list(range(10, 101, 10))
        assert experiment.drops == 50
        assert experiment.system.num_cells == 16
        assert experiment.estimators == ['mmse', 'ls']

    def test_validate_preset(self):
        """Test the desk-scale Monte Carlo scenario."""
        experiment = build_experiment_config(scenario='validate')
        assert experiment.sweep == [8, 32]
        assert (experiment.system.num_cells, experiment.system.ues_per_cell, experiment.system.tau_p) == (4, 2, 2)
        assert experiment.mc_config().n_realizations == 100_000

    def test_powers_converted_once(self):
        """Test dBm inputs become mW in the system configuration."""
        config = build_experiment_config(scenario='paper-fig1').system_config(100)
        assert config.num_antennas == 100
        assert config.ul_power_mw == pytest.approx(10.0)
        assert config.noise_power_mw == pytest.approx(10 ** -9.4)
        assert config.asd_rad == pytest.approx(np.radians(10))

    def test_overrides(self):
        """Test CLI-style overrides; None leaves the value alone."""
        experiment = build_experiment_config(scenario='validate', overrides={'seed': 9, 'output': None})
        assert experiment.seed == 9
        assert experiment.output == 'results/validate.csv'

    def test_nested_file_values(self):
        """Test file values merge into nested preset sections."""
        experiment = build_experiment_config({'scenario': 'validate', 'system': {'tau_c': 50}})
        assert experiment.system.tau_c == 50
        assert experiment.system.num_cells == 4

    def test_mc_seed_from_experiment(self):
        """Test the Monte Carlo seed follows the experiment seed."""
        experiment = build_experiment_config({'scenario': 'validate', 'seed': 42})
        assert experiment.mc_config().seed == 42

    def test_unknown_key(self):
        """Test unknown keys name their dotted location."""
        with pytest.raises(ConfigurationError, match=r"system\.antennas"):
            build_experiment_config({'system': {'antennas': 3}}, scenario='custom')

    def test_non_square_cells(self):
        """Test the grid needs a square number of cells."""
        with pytest.raises(ConfigurationError, match="perfect square"):
            build_experiment_config({'system': {'num_cells': 5}}, scenario='custom')

    def test_pilots_too_short(self):
        """Test K > tau_p."""
        with pytest.raises(ConfigurationError, match="tau_p"):
            build_experiment_config({'system': {'ues_per_cell': 3, 'tau_p': 2}}, scenario='validate')

    def test_duplicate_sweep(self):
        """Test repeated antenna counts."""
        with pytest.raises(ConfigurationError, match="sweep"):
            build_experiment_config({'sweep': [8, 8]}, scenario='custom')

    def test_unknown_scenario(self):
        """Test scenario names."""
        with pytest.raises(ConfigurationError, match="scenario"):
            build_experiment_config({'scenario': 'fig9'})

    def test_schema_version(self):
        """Test only version 1 is accepted."""
        with pytest.raises(ConfigurationError, match="schema_version"):
            build_experiment_config({'schema_version': 2}, scenario='custom')

    def test_deep_merge(self):
        """Test nested dictionaries merge and the base stays untouched."""
        base = {'a': {'b': 1, 'c': 2}, 'd': [1]}
        merged = deep_merge(base, {'a': {'c': 3}, 'd': [2]})
        assert merged == {'a': {'b': 1, 'c': 3}, 'd': [2]}
        assert base == {'a': {'b': 1, 'c': 2}, 'd': [1]}


class TestLoadExperimentConfig:
    """Test YAML loading."""

    def test_load_file(self, tmp_path):
        """Test a YAML file over its preset."""
        path = tmp_path / 'exp.yaml'
        path.write_text("scenario: validate\nsweep: [4]\nlogging:\n  level: DEBUG\n", encoding='utf-8')
        experiment = load_experiment_config(path)
        assert experiment.sweep == [4]
        assert experiment.logging.level == 'DEBUG'
        assert experiment.drops == 1

    def test_scenario_argument(self, tmp_path):
        """Test the scenario argument applies when the file has none."""
        path = tmp_path / 'exp.yaml'
        path.write_text("seed: 3\n", encoding='utf-8')
        experiment = load_experiment_config(path, scenario='paper-fig2')
        assert experiment.scenario == 'paper-fig2'
        assert experiment.seed == 3

    def test_empty_file(self, tmp_path):
        """Test an empty file is the bare preset."""
        path = tmp_path / 'empty.yaml'
        path.write_text("", encoding='utf-8')
        assert load_experiment_config(path, scenario='validate').sweep == [8, 32]

    def test_no_path(self):
        """Test loading a preset without a file."""
        assert load_experiment_config(scenario='paper-fig2').sweep == [100]

    def test_missing_file(self, tmp_path):
        """Test a missing file."""
        with pytest.raises(ConfigurationError, match="not found"):
            load_experiment_config(tmp_path / 'nope.yaml')

    def test_malformed_yaml(self, tmp_path):
        """Test broken YAML."""
        path = tmp_path / 'bad.yaml'
        path.write_text("sweep: [1, 2\n", encoding='utf-8')
        with pytest.raises(ConfigurationError, match="malformed"):
            load_experiment_config(path)

    def test_top_level_list(self, tmp_path):
        """Test a non-mapping document."""
        path = tmp_path / 'list.yaml'
        path.write_text("- 1\n- 2\n", encoding='utf-8')
        with pytest.raises(ConfigurationError, match="mapping"):
            load_experiment_config(path)

    def test_shipped_files(self):
        """Test the experiment files under config/ load."""
        for name, scenario in (('paper_fig1', 'paper-fig1'), ('paper_fig2', 'paper-fig2'), ('validate', 'validate')):
            assert load_experiment_config(CONFIG_DIR / f'{name}.yaml').scenario == scenario
        assert load_experiment_config(CONFIG_DIR / 'custom.template.yaml').scenario == 'custom'


class TestOutput:
    """Test CSV and plot script output."""

    def test_format_value(self):
        """Test cell formatting."""
        assert format_value(True) == 'true'
        assert format_value(False) == 'false'
        assert format_value(0.1) == '0.1'
        assert format_value(1 / 3) == '0.333333333333'
        assert format_value(np.float64(2.5)) == '2.5'
        assert format_value(7) == '7'
        assert format_value('mmse') == 'mmse'

    def test_write_and_read(self, tmp_path):
        """Test writing rows and reading them back."""
        path = write_csv(tmp_path / 'sub' / 'a.csv', ['x', 'flag'], [{'x': 1.5, 'flag': True}, {'x': 2, 'flag': False}])
        assert path.read_text(encoding='utf-8') == "x,flag\n1.5,true\n2,false\n"
        assert read_csv(path) == [{'x': '1.5', 'flag': 'true'}, {'x': '2', 'flag': 'false'}]

    def test_write_failure(self, tmp_path):
        """Test unwritable paths raise OutputError."""
        blocker = tmp_path / 'file'
        blocker.write_text('x')
        with pytest.raises(OutputError):
            write_csv(blocker / 'a.csv', ['x'], [])

    def test_read_missing(self, tmp_path):
        """Test reading a missing file."""
        with pytest.raises(OutputError):
            read_csv(tmp_path / 'missing.csv')

    def test_plot_scripts(self, tmp_path):
        """Test gnuplot scripts are written next to the CSV."""
        csv_path = tmp_path / 'fig1.csv'
        script = emit_plot_script(csv_path, 'fig1', [('mmse', 'rician'), ('ls', 'rayleigh')])
        assert script == tmp_path / 'fig1.gp'
        text = script.read_text(encoding='utf-8')
        assert "set datafile separator ','" in text
        assert "strcol(2) eq 'mmse'" in text
        assert "fig1.png" in text
        fig2 = emit_plot_script(tmp_path / 'fig2.csv', 'fig2', [('ls', 'rician', 100)])
        assert "$3 == 100" in fig2.read_text(encoding='utf-8')

    def test_unknown_figure(self, tmp_path):
        """Test unknown figure names."""
        with pytest.raises(InvalidArgumentError):
            emit_plot_script(tmp_path / 'x.csv', 'fig3', [])

    def test_empirical_cdf(self):
        """Test ECDF levels (i + 1) / n over sorted values."""
        values, levels = empirical_cdf(np.array([3.0, 1.0, 2.0, 2.0]))
        assert values.tolist() == [1.0, 2.0, 2.0, 3.0]
        assert levels.tolist() == [0.25, 0.5, 0.75, 1.0]


class TestRunners:
    """Test the experiment runners on a small network."""

    def test_drops_share_geometry(self, tmp_path):
        """Test every case of a drop shares the base geometry."""
        experiment = small_experiment(tmp_path)
        base = realize_drop(experiment, 1)
        assert base.drop_id == 1
        cases = list(drop_cases(experiment, base))
        assert [(f, m) for f, m, _ in cases] == [('rician', 4), ('rician', 8), ('rayleigh', 4), ('rayleigh', 8)]
        digests = {r.with_antennas(4).geometry_digest() for _, _, r in cases}
        assert len(digests) == 1
        assert realize_drop(experiment, 1).geometry_digest(True) == base.geometry_digest(True)

    def test_fig1(self, tmp_path):
        """Test the sweep CSV layout and the plot script."""
        experiment = small_experiment(tmp_path, per_ue_output=str(tmp_path / 'per_ue.csv'))
        result = run_fig1(experiment)
        rows = read_csv(result.output)
        assert list(rows[0]) == FIG1_COLUMNS
        assert len(rows) == 8
        assert [(r['fading'], r['estimator'], r['M']) for r in rows[:3]] == [
            ('rician', 'mmse', '4'), ('rician', 'mmse', '8'), ('rician', 'ls', '4'),
        ]
        assert all(float(r['mean_sum_se']) > 0 for r in rows)
        assert all(float(r['std_error']) >= 0 for r in rows)
        assert result.plot_script.exists()
        per_ue = read_csv(tmp_path / 'per_ue.csv')
        assert list(per_ue[0]) == PER_UE_COLUMNS
        assert len(per_ue) == 2 * 2 * 2 * 2 * 8
        assert result.all_passed

    def test_fig1_mean_is_per_cell_sum(self, tmp_path):
        """Test the sweep value is the per-cell sum SE averaged over drops."""
        experiment = small_experiment(tmp_path)
        result = run_fig1(experiment)
        selected = [r for r in result.ue_results if (r.antennas, r.estimator, r.fading) == (8, 'ls', 'rayleigh')]
        per_drop = [sum(r.se for r in selected if r.drop == d) / 4 for d in range(2)]
        row = next(r for r in result.rows if (r['M'], r['estimator'], r['fading']) == (8, 'ls', 'rayleigh'))
        assert row['mean_sum_se'] == pytest.approx(np.mean(per_drop))
        assert row['std_error'] == pytest.approx(np.std(per_drop, ddof=1) / np.sqrt(2))

    def test_fig1_single_drop(self, tmp_path):
        """Test a single drop reports zero standard error."""
        result = run_fig1(small_experiment(tmp_path, drops=1, sweep=[4]))
        assert all(row['std_error'] == 0.0 for row in result.rows)

    def test_thread_count_does_not_change_output(self, tmp_path):
        """Test byte-identical CSVs for different thread counts."""
        experiment = small_experiment(tmp_path)
        first = run_fig1(experiment, threads=1).output.read_bytes()
        second = run_fig1(experiment, threads=3).output.read_bytes()
        assert first == second

    def test_fig2(self, tmp_path):
        """Test the CDF CSV."""
        result = run_fig2(small_experiment(tmp_path, sweep=[8]))
        rows = read_csv(result.output)
        assert list(rows[0]) == FIG2_COLUMNS
        assert len(rows) == 2 * 2 * 2 * 8
        curve = [r for r in rows if r['estimator'] == 'mmse' and r['fading'] == 'rayleigh']
        se = [float(r['se']) for r in curve]
        assert se == sorted(se)
        assert float(curve[-1]['cdf']) == 1.0
        assert "with steps" in result.plot_script.read_text(encoding='utf-8')

    def test_validate(self, tmp_path):
        """Test the validation CSV layout."""
        experiment = small_experiment(
            tmp_path, sweep=[4], drops=1, fading=['rician'],
            monte_carlo={'n_realizations': 2000},
        )
        result = run_validate(experiment, threads=2)
        rows = read_csv(result.output)
        assert list(rows[0]) == VALIDATE_COLUMNS
        assert len(rows) == 16
        assert {r['passed'] for r in rows} <= {'true', 'false'}
        assert len(result.reports) == 16
        assert result.plot_script is None
