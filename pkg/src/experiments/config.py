"""
Experiment configuration: YAML files deep-merged over scenario presets and validated
with pydantic.
"""

import copy
import math
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ..channel_model.data_structures import SystemConfig
from ..channel_model.propagation import dbm_to_mw
from ..common.errors import ConfigurationError
from ..estimation.estimators import Estimator
from ..monte_carlo.config import McConfig

Scenario = Literal['paper-fig1', 'paper-fig2', 'validate', 'custom']
Fading = Literal['rician', 'rayleigh']
LogLevel = Literal['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL']


class SystemSettings(BaseModel):
    """System parameters as written in experiment files (powers in dBm)."""
    model_config = ConfigDict(frozen=True, extra='forbid')

    num_cells: int = Field(default=16, ge=1)
    ues_per_cell: int = Field(default=10, ge=1)
    tau_c: int = Field(default=200, ge=1)
    tau_p: int = Field(default=10, ge=1)
    ul_power_dbm: float = 10.0
    noise_power_dbm: float = -94.0
    asd_deg: float = Field(default=10.0, ge=0)
    bandwidth_hz: float = Field(default=20e6, gt=0)
    cell_side_m: float = Field(default=250.0, gt=0)
    min_distance_m: float = Field(default=35.0, ge=0)
    shadow_std_los_db: float = Field(default=4.0, ge=0)
    shadow_std_nlos_db: float = Field(default=10.0, ge=0)

    @model_validator(mode='after')
    def _check_layout(self) -> 'SystemSettings':
        if math.isqrt(self.num_cells) ** 2 != self.num_cells:
            raise ValueError(
                f"num_cells={self.num_cells} is not a perfect square; the wrap-around grid "
                "needs 1, 4, 9, 16, ... cells"
            )
        if self.ues_per_cell > self.tau_p:
            raise ValueError(
                f"ues_per_cell={self.ues_per_cell} exceeds tau_p={self.tau_p}; "
                "raise tau_p or lower ues_per_cell"
            )
        if self.tau_c <= self.tau_p:
            raise ValueError(f"tau_c={self.tau_c} must exceed tau_p={self.tau_p}")
        return self

    def to_system_config(self, num_antennas: int) -> SystemConfig:
        """SystemConfig for a given antenna count, powers converted to mW."""
        data = self.model_dump(exclude={'ul_power_dbm', 'noise_power_dbm'})
        return SystemConfig(
            num_antennas=num_antennas,
            ul_power_mw=dbm_to_mw(self.ul_power_dbm),
            noise_power_mw=dbm_to_mw(self.noise_power_dbm),
            **data,
        )


class MonteCarloSettings(BaseModel):
    """Monte Carlo knobs; the seed comes from the experiment."""
    model_config = ConfigDict(frozen=True, extra='forbid')

    n_realizations: int = Field(default=100_000, ge=1)
    batch_size: int = Field(default=1000, ge=1)
    sigma_factor: float = Field(default=5.0, gt=0)
    relative_target: float = Field(default=0.03, gt=0)

    def to_mc_config(self, seed: int) -> McConfig:
        return McConfig(seed=seed, **self.model_dump())


class LoggingSettings(BaseModel):
    model_config = ConfigDict(frozen=True, extra='forbid')

    level: LogLevel = 'INFO'
    file: Optional[str] = None


class ExperimentConfig(BaseModel):
    """
    Complete description of one experiment run.

    Attributes:
        schema_version: File format version (must be 1)
        scenario: Preset the file was merged over
        system: System parameters
        sweep: Antenna counts to evaluate
        drops: Number of random network realizations
        estimators: Channel estimators to evaluate
        fading: Fading modes; both modes of a drop share its geometry
        assignment_basis: Gain table that drives the serving-BS choice
        seed: Root seed of every random stream
        monte_carlo: Monte Carlo settings (validate only)
        output: Main CSV path
        per_ue_output: Optional per-UE CSV path
        logging: Log level and optional log file
    """
    model_config = ConfigDict(frozen=True, extra='forbid')

    schema_version: Literal[1] = 1
    scenario: Scenario = 'custom'
    system: SystemSettings = SystemSettings()
    sweep: List[int] = Field(min_length=1)
    drops: int = Field(default=1, ge=1)
    estimators: List[Estimator] = Field(default_factory=lambda: ['mmse', 'ls'], min_length=1)
    fading: List[Fading] = Field(default_factory=lambda: ['rician', 'rayleigh'], min_length=1)
    assignment_basis: Literal['nlos', 'los'] = 'nlos'
    seed: int = Field(default=0, ge=0)
    monte_carlo: MonteCarloSettings = MonteCarloSettings()
    output: str = 'results/experiment.csv'
    per_ue_output: Optional[str] = None
    logging: LoggingSettings = LoggingSettings()

    @field_validator('sweep')
    @classmethod
    def _check_sweep(cls, sweep: List[int]) -> List[int]:
        if any(m < 1 for m in sweep):
            raise ValueError(f"antenna counts must be >= 1, got {sweep}")
        if len(set(sweep)) != len(sweep):
            raise ValueError(f"antenna counts must be unique, got {sweep}")
        return sweep

    @field_validator('estimators', 'fading')
    @classmethod
    def _check_unique(cls, values: List[str]) -> List[str]:
        if len(set(values)) != len(values):
            raise ValueError(f"entries must be unique, got {values}")
        return values

    def system_config(self, num_antennas: Optional[int] = None) -> SystemConfig:
        return self.system.to_system_config(self.sweep[0] if num_antennas is None else num_antennas)

    def mc_config(self) -> McConfig:
        return self.monte_carlo.to_mc_config(self.seed)


_BASE_PRESET: Dict[str, Any] = {
    'schema_version': 1,
    'system': {},
    'estimators': ['mmse', 'ls'],
    'fading': ['rician', 'rayleigh'],
    'seed': 0,
}

PRESETS: Dict[str, Dict[str, Any]] = {
    'paper-fig1': {
        **_BASE_PRESET,
        'scenario': 'paper-fig1',
        'sweep': list(range(10, 101, 10)),
        'drops': 50,
        'output': 'results/fig1.csv',
    },
    'paper-fig2': {
        **_BASE_PRESET,
        'scenario': 'paper-fig2',
        'sweep': [100],
        'drops': 50,
        'output': 'results/fig2.csv',
    },
    'validate': {
        **_BASE_PRESET,
        'scenario': 'validate',
        'system': {'num_cells': 4, 'ues_per_cell': 2, 'tau_p': 2},
        'sweep': [8, 32],
        'drops': 1,
        'monte_carlo': {'n_realizations': 100_000},
        'output': 'results/validate.csv',
    },
    'custom': {
        **_BASE_PRESET,
        'scenario': 'custom',
        'sweep': [10, 50, 100],
        'drops': 5,
        'output': 'results/custom.csv',
    },
}


def deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """Recursively merge `override` into a copy of `base`; non-dict values replace."""
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def _describe(error: ValidationError, source: str) -> str:
    lines = [f"invalid experiment configuration ({source}):"]
    for item in error.errors():
        location = '.'.join(str(part) for part in item['loc']) or '<root>'
        lines.append(f"  {location}: {item['msg']}")
    return '\n'.join(lines)


def build_experiment_config(
    data: Optional[Dict[str, Any]] = None,
    scenario: Optional[Scenario] = None,
    overrides: Optional[Dict[str, Any]] = None,
    source: str = '<inline>',
) -> ExperimentConfig:
    """
    Merge file data over its scenario preset, then apply overrides and validate.

    The scenario is taken from the data, then from `scenario`, then 'custom'.

    Raises:
        ConfigurationError: unknown scenario or failed validation
    """
    data = dict(data or {})
    chosen = data.get('scenario', scenario or 'custom')
    if chosen not in PRESETS:
        raise ConfigurationError(
            f"unknown scenario {chosen!r} in {source}; expected one of {sorted(PRESETS)}"
        )
    merged = deep_merge(PRESETS[chosen], data)
    merged = deep_merge(merged, {k: v for k, v in (overrides or {}).items() if v is not None})
    try:
        return ExperimentConfig.model_validate(merged)
    except ValidationError as e:
        raise ConfigurationError(_describe(e, source)) from e


def load_experiment_config(
    path: Optional[Union[str, Path]] = None,
    scenario: Optional[Scenario] = None,
    overrides: Optional[Dict[str, Any]] = None,
) -> ExperimentConfig:
    """
    Load an experiment file (YAML) or, without a path, the bare preset.

    Raises:
        ConfigurationError: unreadable file, malformed YAML or invalid values
    """
    if path is None:
        return build_experiment_config(None, scenario, overrides, source=f"preset {scenario}")
    path = Path(path)
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = yaml.safe_load(f)
    except FileNotFoundError as e:
        raise ConfigurationError(f"configuration file not found: {path}") from e
    except yaml.YAMLError as e:
        raise ConfigurationError(f"malformed YAML in {path}: {e}") from e
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigurationError(f"{path}: top level must be a mapping")
    return build_experiment_config(data, scenario, overrides, source=str(path))
